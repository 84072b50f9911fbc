#include "twistdh/measures.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace twistdh {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool rvec_equal(const RVec& a, const RVec& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

VolumeExpr vol_mul(const VolumeExpr& a, const VolumeExpr& b) {
  return {a.coeff * b.coeff, a.volg_power + b.volg_power};
}

VolumeExpr vol_scale(double s, const VolumeExpr& a) {
  return {s * a.coeff, a.volg_power};
}

VolumeExpr vol_add(const VolumeExpr& a, const VolumeExpr& b) {
  if (a.coeff == 0.0) return b;
  if (b.coeff == 0.0) return a;
  if (a.volg_power != b.volg_power)
    throw std::invalid_argument("volume grading mismatch in addition");
  return {a.coeff + b.coeff, a.volg_power};
}

MeasureContext::MeasureContext(const Twist& tw)
    : tw_(&tw), signs_(build_twist_signs(tw)) {
  const RootSystem& rs = tw.group;
  covol_fix_ = lattice_covolume(rs, tw.fix_lattice);
  covol_proj_ = lattice_covolume(rs, tw.proj_lattice);
  moving_block_det_ = static_cast<double>(tw.intersection_order);
  rho_terms_ = expand_shift(rs.rho);
}

MeasureContext::AlternatingTerms MeasureContext::expand_shift(
    const RVec& shift) const {
  const RootSystem& rs = tw_->group;
  check(shift.size() == rs.ambient_dim,
        "shift has wrong ambient dimension");
  check(rvec_equal(rmat_apply(tw_->kappa_matrix, shift), shift),
        "shift is not fixed by the twist");
  AlternatingTerms terms;
  terms.images.reserve(tw_->wk_indices.size());
  terms.dets.reserve(tw_->wk_indices.size());
  for (std::size_t i = 0; i < tw_->wk_indices.size(); ++i) {
    terms.images.push_back(weyl_apply(rs, tw_->wk_indices[i], shift));
    terms.dets.push_back(tw_->wk_det_fix[i]);
  }
  return terms;
}

double MeasureContext::det_factor(const TorusPoint& a) const {
  double acc = moving_block_det_;
  for (const RootOrbit& orbit : signs_.orbits) {
    double x = tw_->pair_d(orbit.exponent, a);
    cplx z = std::polar(1.0, kTwoPi * x);
    acc *= std::norm(cplx(1.0, 0.0) - static_cast<double>(orbit.sign) * z);
  }
  return acc;
}

cplx MeasureContext::alternating_sum(const TorusPoint& a,
                                     const RVec& shift) const {
  const AlternatingTerms local =
      rvec_equal(shift, tw_->group.rho) ? rho_terms_ : expand_shift(shift);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < local.images.size(); ++i) {
    double x = tw_->pair_d(local.images[i], a);
    sum += static_cast<double>(local.dets[i]) * std::polar(1.0, kTwoPi * x);
  }
  return sum;
}

ClassVolume MeasureContext::class_volume(const TorusPoint& a) const {
  TorusPoint xi = tw_->reduce_to_alcove(a);
  // Regularity: every orbit block must stay away from 1, otherwise the
  // class drops dimension and carries no Riemannian volume.
  double det = moving_block_det_;
  bool regular = true;
  for (const RootOrbit& orbit : signs_.orbits) {
    double x = tw_->pair_d(orbit.exponent, xi);
    cplx z = std::polar(1.0, kTwoPi * x);
    double block = std::norm(cplx(1.0, 0.0) -
                             static_cast<double>(orbit.sign) * z);
    if (block < 1e-12) regular = false;
    det *= block;
  }
  if (!regular) return {VolumeExpr{0.0, 1}, true};
  return {VolumeExpr{std::sqrt(det) / covol_fix_, 1}, false};
}

double twisted_det_factor(const Twist& tw, const TorusPoint& a) {
  return MeasureContext(tw).det_factor(a);
}

cplx weyl_alternating_sum(const Twist& tw, const TorusPoint& a,
                          const RVec& shift) {
  return MeasureContext(tw).alternating_sum(a, shift);
}

ClassVolume class_volume(const Twist& tw, const TorusPoint& a) {
  return MeasureContext(tw).class_volume(a);
}

}  // namespace twistdh
