#include "twistdh/characters.hpp"

#include <cmath>
#include <complex>
#include <algorithm>
#include <cstdlib>
#include <functional>
#include <stdexcept>

namespace twistdh {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Richardson extrapolation steps for evaluation at non-regular points: the
// quotient is sampled at xi + eps * dir and the O(eps) error cancelled.
constexpr double kFallbackEps[2] = {1e-5, 5e-6};

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void validate_dominant(const RootSystem& rs, const WeightCoords& lambda) {
  require(lambda.size() == static_cast<std::size_t>(rs.rank),
          "weight coordinate count != rank");
  for (long c : lambda) require(c >= 0, "weight is not dominant");
}

std::vector<double> offset_point(const TorusPoint& xi,
                                 const std::vector<double>& dir, double eps) {
  std::vector<double> out(xi);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += eps * dir[i];
  return out;
}

}  // namespace

CharacterContext::CharacterContext(const Twist& tw)
    : tw_(&tw), mctx_(tw) {
  const RootSystem& rs = tw.group;
  reg_dir_fix_ = rvec_to_doubles(tw.project_fix(rs.rho));
  reg_dir_full_ = rvec_to_doubles(rs.rho);
}

bool CharacterContext::is_fixed_weight(const WeightCoords& lambda) const {
  if (lambda.size() != static_cast<std::size_t>(tw_->group.rank)) return false;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (lambda[i] != lambda[tw_->simple_perm[i]]) return false;
  return true;
}

const MeasureContext::AlternatingTerms& CharacterContext::twined_terms(
    const WeightCoords& lambda) const {
  auto it = twined_cache_.find(lambda);
  if (it != twined_cache_.end()) return it->second;
  const RootSystem& rs = tw_->group;
  validate_dominant(rs, lambda);
  require(is_fixed_weight(lambda), "weight is not fixed by the twist");
  RVec shift = rvec_add(rs.weight_ambient(lambda), rs.rho);
  return twined_cache_.emplace(lambda, mctx_.expand_shift(shift))
      .first->second;
}

const CharacterContext::FullTerms& CharacterContext::full_terms(
    const WeightCoords& lambda) const {
  auto it = full_cache_.find(lambda);
  if (it != full_cache_.end()) return it->second;
  const RootSystem& rs = tw_->group;
  validate_dominant(rs, lambda);
  RVec shift = rvec_add(rs.weight_ambient(lambda), rs.rho);
  const WeylGroup& wg = rs.weyl();
  FullTerms terms;
  terms.images.reserve(wg.size());
  terms.dets.reserve(wg.size());
  for (std::size_t i = 0; i < wg.size(); ++i) {
    terms.images.push_back(weyl_apply(rs, i, shift));
    terms.dets.push_back(wg.dets[i]);
  }
  return full_cache_.emplace(lambda, std::move(terms)).first->second;
}

cplx CharacterContext::twined_ratio(const WeightCoords& lambda,
                                    const TorusPoint& xi,
                                    bool* regular) const {
  const auto& num_terms = twined_terms(lambda);
  cplx num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < num_terms.images.size(); ++i) {
    num += static_cast<double>(num_terms.dets[i]) *
           std::polar(1.0, kTwoPi * tw_->pair_d(num_terms.images[i], xi));
  }
  den = mctx_.alternating_sum(xi, tw_->group.rho);
  const double threshold =
      1e-8 * std::sqrt(static_cast<double>(num_terms.images.size()));
  *regular = std::abs(den) > threshold;
  return *regular ? num / den : cplx(0.0);
}

cplx CharacterContext::twining_character(const WeightCoords& lambda,
                                         const TorusPoint& xi) const {
  bool regular = false;
  cplx value = twined_ratio(lambda, xi, &regular);
  if (regular) return value;
  // At the identity the quotient degenerates completely but the value is the
  // dimension of the orbit-system representation.
  bool at_identity = true;
  for (const RVec& beta : tw_->orbit.positive_roots)
    if (std::abs(tw_->pair_d(beta, xi)) > 1e-12) at_identity = false;
  if (at_identity) return to_double(orbit_dimension(lambda));
  // Otherwise extrapolate along a direction regular for every wall.
  cplx f[2];
  for (int k = 0; k < 2; ++k) {
    TorusPoint moved = offset_point(xi, reg_dir_fix_, kFallbackEps[k]);
    f[k] = twined_ratio(lambda, moved, &regular);
    if (!regular)
      throw std::runtime_error(
          "twining character: fallback points are still singular");
  }
  return 2.0 * f[1] - f[0];
}

cplx CharacterContext::weyl_character(const WeightCoords& lambda,
                                      const TorusPoint& xi) const {
  const FullTerms& num_terms = full_terms(lambda);
  const FullTerms& den_terms =
      full_terms(WeightCoords(tw_->group.rank, 0));
  auto eval = [&](const FullTerms& t, const TorusPoint& at) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < t.images.size(); ++i)
      acc += static_cast<double>(t.dets[i]) *
             std::polar(1.0, kTwoPi * tw_->pair_d(t.images[i], at));
    return acc;
  };
  const double threshold =
      1e-8 * std::sqrt(static_cast<double>(den_terms.images.size()));
  cplx den = eval(den_terms, xi);
  if (std::abs(den) > threshold) return eval(num_terms, xi) / den;
  bool at_identity = true;
  for (std::size_t p = 0; p < tw_->group.n_positive; ++p)
    if (std::abs(tw_->pair_d(tw_->group.roots[p], xi)) > 1e-12)
      at_identity = false;
  if (at_identity) return to_double(weyl_dimension(tw_->group, lambda));
  cplx f[2];
  for (int k = 0; k < 2; ++k) {
    TorusPoint moved = offset_point(xi, reg_dir_full_, kFallbackEps[k]);
    cplx d = eval(den_terms, moved);
    if (std::abs(d) <= threshold)
      throw std::runtime_error(
          "character: fallback points are still singular");
    f[k] = eval(num_terms, moved) / d;
  }
  return 2.0 * f[1] - f[0];
}

Rat CharacterContext::orbit_dimension(const WeightCoords& lambda) const {
  const RootSystem& rs = tw_->group;
  validate_dominant(rs, lambda);
  require(is_fixed_weight(lambda), "weight is not fixed by the twist");
  RVec lam_rho = tw_->project_fix(rvec_add(rs.weight_ambient(lambda), rs.rho));
  RVec rho_fix = tw_->project_fix(rs.rho);
  Rat dim(1);
  for (const RVec& beta : tw_->orbit.positive_roots)
    dim *= rs.form(lam_rho, beta) / rs.form(rho_fix, beta);
  if (dim.get_den() != 1)
    throw std::runtime_error("orbit dimension must be integral");
  return dim;
}

Rat CharacterContext::heat_eigenvalue(const WeightCoords& lambda) const {
  const RootSystem& rs = tw_->group;
  validate_dominant(rs, lambda);
  RVec lam_rho = rvec_add(rs.weight_ambient(lambda), rs.rho);
  return rs.form(lam_rho, lam_rho) - rs.form(rs.rho, rs.rho);
}

double CharacterContext::inner_product(const WeightCoords& lambda,
                                       const WeightCoords& mu,
                                       long grid_n) const {
  require(grid_n >= 2, "grid size must be at least 2");
  const auto& tl = twined_terms(lambda);
  const auto& tm = twined_terms(mu);
  const std::vector<RVec>& basis = tw_->proj_lattice;
  const std::size_t d = basis.size();
  const RootSystem& rs = tw_->group;
  // integer frequencies of every numerator term along the grid directions
  auto freqs = [&](const std::vector<RVec>& images) {
    std::vector<long> out;
    out.reserve(images.size() * d);
    for (const RVec& u : images)
      for (std::size_t i = 0; i < d; ++i)
        out.push_back(to_long(rs.form(u, basis[i])));
    return out;
  };
  std::vector<long> fl = freqs(tl.images), fm = freqs(tm.images);
  // Sum over the half-offset grid of A_lambda * conj(A_mu): each plane wave
  // sums to zero unless its frequency is divisible by grid_n, in which case
  // it contributes grid_n^d times an alias sign.  Normalizing by the grid
  // size and the commutant order makes matched diagonal terms sum to one.
  double acc = 0.0;
  for (std::size_t a = 0; a < tl.images.size(); ++a) {
    for (std::size_t b = 0; b < tm.images.size(); ++b) {
      int sign = tl.dets[a] * tm.dets[b];
      bool alive = true;
      for (std::size_t i = 0; i < d && alive; ++i) {
        long f = fl[a * d + i] - fm[b * d + i];
        if (f % grid_n != 0)
          alive = false;
        else if (((f / grid_n) % 2) != 0)
          sign = -sign;
      }
      if (alive) acc += sign;
    }
  }
  return acc / static_cast<double>(tl.images.size());
}

double CharacterContext::inner_product_dense(const WeightCoords& lambda,
                                             const WeightCoords& mu,
                                             long grid_n) const {
  require(grid_n >= 2, "grid size must be at least 2");
  const auto& tl = twined_terms(lambda);
  const auto& tm = twined_terms(mu);
  const std::vector<RVec>& basis = tw_->proj_lattice;
  const std::size_t d = basis.size();
  std::vector<std::vector<double>> basis_d;
  for (const RVec& v : basis) basis_d.push_back(rvec_to_doubles(v));
  std::vector<long> index(d, 0);
  cplx acc = 0.0;
  const std::size_t m = tw_->group.ambient_dim;
  while (true) {
    TorusPoint xi(m, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      double c = (static_cast<double>(index[i]) + 0.5) /
                 static_cast<double>(grid_n);
      for (std::size_t a = 0; a < m; ++a) xi[a] += c * basis_d[i][a];
    }
    cplx va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < tl.images.size(); ++i)
      va += static_cast<double>(tl.dets[i]) *
            std::polar(1.0, kTwoPi * tw_->pair_d(tl.images[i], xi));
    for (std::size_t i = 0; i < tm.images.size(); ++i)
      vb += static_cast<double>(tm.dets[i]) *
            std::polar(1.0, kTwoPi * tw_->pair_d(tm.images[i], xi));
    acc += va * std::conj(vb);
    std::size_t pos = 0;
    while (pos < d && ++index[pos] == grid_n) index[pos++] = 0;
    if (pos == d) break;
  }
  double cells = std::pow(static_cast<double>(grid_n), static_cast<int>(d));
  return acc.real() / (cells * static_cast<double>(tl.images.size()));
}

std::vector<WeightCoords> fixed_dominant_weights(const Twist& tw,
                                                 long max_level) {
  const RootSystem& rs = tw.group;
  if (max_level < 0) return {};
  // level cost of raising a whole node orbit by one
  std::vector<long> orbit_cost;
  RVec theta_co = rs.coroot(rs.highest_root_index);
  for (const auto& orbit : tw.simple_orbits) {
    long cost = 0;
    for (int node : orbit)
      cost += to_long(rs.form(rs.fundamental_weights[node], theta_co));
    orbit_cost.push_back(cost);
  }
  std::vector<WeightCoords> out;
  WeightCoords current(rs.rank, 0);
  // depth-first over orbit coefficients, cheapest-first order is irrelevant
  // because the result gets sorted
  std::function<void(std::size_t, long)> walk = [&](std::size_t k,
                                                    long budget) {
    if (k == tw.simple_orbits.size()) {
      out.push_back(current);
      return;
    }
    for (long v = 0; v * orbit_cost[k] <= budget; ++v) {
      for (int node : tw.simple_orbits[k]) current[node] = v;
      walk(k + 1, budget - v * orbit_cost[k]);
    }
    for (int node : tw.simple_orbits[k]) current[node] = 0;
  };
  walk(0, max_level);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace twistdh
