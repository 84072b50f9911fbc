#include "twistdh/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace twistdh {

namespace {

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// composition a after b: (a o b)[i] = a[b[i]]
std::vector<int> perm_mul(const std::vector<int>& a,
                          const std::vector<int>& b) {
  std::vector<int> out(b.size());
  for (size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

std::vector<int> perm_inv(const std::vector<int>& a) {
  std::vector<int> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[a[i]] = static_cast<int>(i);
  return out;
}

std::vector<int> commutator_perm(const std::vector<int>& tau,
                                 const std::vector<int>& kappa) {
  return perm_mul(perm_mul(tau, kappa),
                  perm_mul(perm_inv(tau), perm_inv(kappa)));
}

void check_same_group(const RootSystem& rs, const Twist* tw,
                      const char* where) {
  if (tw == nullptr)
    throw std::invalid_argument(std::string("surface assembly: null twist in ") +
                                where);
  if (tw->group.series != rs.series || tw->group.rank != rs.rank)
    throw std::invalid_argument(
        std::string("surface assembly: twist in ") + where +
        " was built over a different group than the assembly");
}

// Enumerates dominant weights that are constant on each joint orbit of
// simple nodes, with level (pairing against the highest coroot) at most
// max_level, in increasing order of the orbit values.
void enumerate_orbit_weights(
    const RootSystem& rs, const std::vector<std::vector<int>>& orbits,
    long max_level, const std::function<void(const WeightCoords&)>& emit) {
  const int rank = rs.rank;
  std::vector<long> node_cost(rank);
  for (int i = 0; i < rank; ++i) {
    WeightCoords unit(rank, 0);
    unit[i] = 1;
    node_cost[i] = weight_level(rs, unit);
  }
  std::vector<long> orbit_cost(orbits.size(), 0);
  for (size_t k = 0; k < orbits.size(); ++k)
    for (int node : orbits[k]) orbit_cost[k] += node_cost[node];

  WeightCoords lambda(rank, 0);
  std::function<void(size_t, long)> dfs = [&](size_t k, long budget) {
    if (k == orbits.size()) {
      emit(lambda);
      return;
    }
    const long cost = orbit_cost[k];
    for (long v = 0; v * cost <= budget; ++v) {
      for (int node : orbits[k]) lambda[node] = v;
      dfs(k + 1, budget - v * cost);
      if (cost == 0) break;  // defensive; level marks are positive
    }
    for (int node : orbits[k]) lambda[node] = 0;
  };
  dfs(0, max_level);
}

}  // namespace

DHCoefficient fuse_coefficients(const DHCoefficient& c1,
                                const DHCoefficient& c2, const Rat& dim) {
  if (dim < 1)
    throw std::invalid_argument("fuse_coefficients: dimension must be >= 1");
  DHCoefficient out;
  out.vanishes = c1.vanishes || c2.vanishes;
  out.degenerate = c1.degenerate || c2.degenerate;
  out.volg_power = c1.volg_power + c2.volg_power;
  if (out.vanishes) return out;  // keeps the zero rational/numeric parts
  out.rational = c1.rational * c2.rational / dim;
  out.numeric = c1.numeric * c2.numeric;
  return out;
}

VolumeExpr fuse_coefficients(const VolumeExpr& c1, const VolumeExpr& c2,
                             long dim) {
  if (dim < 1)
    throw std::invalid_argument("fuse_coefficients: dimension must be >= 1");
  return vol_scale(1.0 / static_cast<double>(dim), vol_mul(c1, c2));
}

ModuliContext::ModuliContext(const SurfaceAssembly& spec) : spec_(&spec) {
  if (spec.group == nullptr)
    throw std::invalid_argument("surface assembly: missing group");
  const RootSystem& rs = *spec.group;
  const long h = static_cast<long>(spec.handles.size());
  const long b = static_cast<long>(spec.boundaries.size());
  if (2 * h + b < 1)
    throw std::invalid_argument(
        "surface assembly: needs at least one handle or boundary class");

  // Composed target twist: handle commutators then boundary twists, composed
  // as functions in listed order.
  std::vector<int> total = identity_perm(rs.rank);
  auto note_perm = [&](const std::vector<int>& p) {
    if (std::find(decorating_perms_.begin(), decorating_perms_.end(), p) ==
        decorating_perms_.end())
      decorating_perms_.push_back(p);
  };
  for (const HandleTwists& ht : spec.handles) {
    check_same_group(rs, ht.tau, "a handle");
    check_same_group(rs, ht.kappa, "a handle");
    total = perm_mul(total, commutator_perm(ht.tau->simple_perm,
                                            ht.kappa->simple_perm));
    note_perm(ht.tau->simple_perm);
    note_perm(ht.kappa->simple_perm);
  }
  for (const BoundaryClass& bc : spec.boundaries) {
    check_same_group(rs, bc.twist, "a boundary");
    total = perm_mul(total, bc.twist->simple_perm);
    note_perm(bc.twist->simple_perm);
  }
  target_ = make_twist(rs, total);
  target_chars_ = std::make_unique<CharacterContext>(target_);

  for (const BoundaryClass& bc : spec.boundaries) {
    const CharacterContext& ctx = boundary_context(*bc.twist);
    boundary_chars_.push_back(&ctx);
    boundary_points_.push_back(bc.twist->reduce_to_alcove(bc.xi));
    boundary_volumes_.push_back(
        ctx.measures().class_volume(boundary_points_.back()));
  }

  // Joint orbits of the simple nodes under every decorating permutation.
  std::vector<int> parent(rs.rank);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const std::vector<int>& p : decorating_perms_)
    for (int i = 0; i < rs.rank; ++i) parent[find(i)] = find(p[i]);
  std::map<int, std::vector<int>> buckets;
  for (int i = 0; i < rs.rank; ++i) buckets[find(i)].push_back(i);
  for (auto& [root, nodes] : buckets) joint_orbits_.push_back(nodes);
  std::sort(joint_orbits_.begin(), joint_orbits_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

const CharacterContext& ModuliContext::boundary_context(const Twist& tw) {
  auto it = pool_.find(tw.simple_perm);
  if (it == pool_.end())
    it = pool_.emplace(tw.simple_perm, std::make_unique<CharacterContext>(tw))
             .first;
  return *it->second;
}

int ModuliContext::coefficient_power() const {
  return static_cast<int>(2 * spec_->handles.size() +
                          spec_->boundaries.size());
}

bool ModuliContext::admissible(const WeightCoords& lambda) const {
  if (static_cast<int>(lambda.size()) != spec_->group->rank)
    throw std::invalid_argument("weight has the wrong rank");
  for (const std::vector<int>& p : decorating_perms_)
    for (size_t i = 0; i < p.size(); ++i)
      if (lambda[p[i]] != lambda[i]) return false;
  return true;
}

std::vector<WeightCoords> ModuliContext::admissible_weights(
    long max_level) const {
  std::vector<WeightCoords> out;
  enumerate_orbit_weights(*spec_->group, joint_orbits_, max_level,
                          [&](const WeightCoords& w) { out.push_back(w); });
  return out;
}

DHCoefficient ModuliContext::dh_coefficient(const WeightCoords& lambda) const {
  DHCoefficient acc;  // default: the structured vanishing result
  if (!admissible(lambda)) return acc;
  const Rat dim = weyl_dimension(*spec_->group, lambda);

  bool first = true;
  auto fold = [&](const DHCoefficient& piece) {
    acc = first ? piece : fuse_coefficients(acc, piece, dim);
    first = false;
  };
  for (size_t i = 0; i < spec_->handles.size(); ++i) {
    DHCoefficient piece;
    piece.vanishes = false;
    piece.rational = Rat(1) / dim;
    piece.numeric = 1.0;
    piece.volg_power = 2;
    fold(piece);
  }
  for (size_t j = 0; j < spec_->boundaries.size(); ++j) {
    DHCoefficient piece;
    piece.vanishes = false;
    piece.rational = 1;
    piece.volg_power = 1;
    if (boundary_volumes_[j].degenerate) {
      piece.numeric = 0.0;
      piece.degenerate = true;
    } else {
      piece.numeric = boundary_volumes_[j].volume.coeff *
                      boundary_chars_[j]->twining_character(
                          lambda, boundary_points_[j]);
    }
    fold(piece);
  }
  return acc;
}

cplx ModuliContext::probability_coefficient(const WeightCoords& lambda) const {
  if (!admissible(lambda)) return 0.0;
  const Rat dim = weyl_dimension(*spec_->group, lambda);
  Rat denom = 1;
  for (int k = 0; k < coefficient_power() - 1; ++k) denom *= dim;
  cplx chars = 1.0;
  for (size_t j = 0; j < spec_->boundaries.size(); ++j) {
    if (boundary_volumes_[j].degenerate) return 0.0;
    chars *= boundary_chars_[j]->twining_character(lambda,
                                                   boundary_points_[j]);
  }
  return chars / to_double(denom);
}

DensityValue ModuliContext::dh_density(const TorusPoint& xi, double heat_t,
                                       long level_cutoff) const {
  if (!(heat_t > 0.0))
    throw std::invalid_argument("dh_density: heat time must be positive");
  const TorusPoint a = target_.reduce_to_alcove(xi);
  cplx sum = 0.0;
  for (const WeightCoords& lam : admissible_weights(level_cutoff)) {
    const DHCoefficient c = dh_coefficient(lam);
    const double damp =
        std::exp(-heat_t * to_double(target_chars_->heat_eigenvalue(lam)));
    sum += damp * c.coefficient() *
           std::conj(target_chars_->twining_character(lam, a));
  }
  DensityValue out;
  out.value = VolumeExpr{std::real(sum), coefficient_power() - 1};
  out.residual = tail_bound(heat_t, level_cutoff) + std::abs(std::imag(sum));
  return out;
}

// Bounds the dropped tail of the density series.  Each term is bounded by
//   e^{-t p(lambda)} dim^{2-2h} prod_j Vol(C_j)
// (every character factor is at most the dimension in absolute value);
// levels past the cutoff are summed until they stop mattering, and the
// remainder beyond the scanned window is closed off geometrically.  Returns
// infinity when no usable bound was reached within the window.
double ModuliContext::tail_bound(double heat_t, long level_cutoff) const {
  double class_mass = 1.0;
  for (const ClassVolume& cv : boundary_volumes_) {
    if (cv.degenerate) return 0.0;  // the density is identically zero
    class_mass *= cv.volume.coeff;
  }
  const long two_minus_2h = 2 - 2 * static_cast<long>(spec_->handles.size());

  const long kWindow = 64;
  std::vector<double> level_sum(kWindow + 1, 0.0);
  double total = 0.0;
  long done = 0;  // levels beyond the cutoff already accumulated
  for (long chunk : {8L, 16L, 32L, kWindow}) {
    enumerate_orbit_weights(
        *spec_->group, joint_orbits_, level_cutoff + chunk,
        [&](const WeightCoords& lam) {
          const long rel = weight_level(*spec_->group, lam) - level_cutoff;
          if (rel <= done || rel > chunk) return;
          const double dim = to_double(weyl_dimension(*spec_->group, lam));
          const double damp = std::exp(
              -heat_t * to_double(target_chars_->heat_eigenvalue(lam)));
          level_sum[rel] +=
              damp * std::pow(dim, static_cast<double>(two_minus_2h)) *
              class_mass;
        });
    double chunk_total = 0.0;
    for (long k = done + 1; k <= chunk; ++k) chunk_total += level_sum[k];
    total += chunk_total;
    done = chunk;
    if (chunk_total <= 1e-16 * total) break;  // the tail stopped mattering
  }
  // Geometric closure from the decay across the last populated levels.
  double last = 0.0, prev = 0.0;
  for (long k = kWindow; k >= 1; --k)
    if (level_sum[k] > 0.0) {
      last = level_sum[k];
      for (long j = k - 1; j >= 1; --j)
        if (level_sum[j] > 0.0) {
          prev = level_sum[j];
          break;
        }
      break;
    }
  if (last == 0.0) return total;  // the whole tail was empty
  if (prev == 0.0 || last >= 0.9 * prev)
    return std::numeric_limits<double>::infinity();
  const double r = last / prev;
  return total + last * r / (1.0 - r);
}

DensityValue ModuliContext::dh_density_extrapolated(const TorusPoint& xi,
                                                    double heat_t,
                                                    long level_cutoff) const {
  const DensityValue f1 = dh_density(xi, heat_t, level_cutoff);
  const DensityValue f2 = dh_density(xi, heat_t / 2.0, level_cutoff);
  const DensityValue f4 = dh_density(xi, heat_t / 4.0, level_cutoff);
  // Third-order elimination of the leading t and t^2 errors; the defect
  // against the second-order estimate measures what the extrapolation left.
  const double f0 =
      (8.0 * f4.value.coeff - 6.0 * f2.value.coeff + f1.value.coeff) / 3.0;
  const double second_order = 2.0 * f4.value.coeff - f2.value.coeff;
  DensityValue out;
  out.value = VolumeExpr{f0, f4.value.volg_power};
  out.residual = std::abs(f0 - second_order) + f4.residual;
  return out;
}

long ModuliContext::default_level_cutoff(double heat_t, double eps) const {
  if (!(heat_t > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("default_level_cutoff: positive t, eps");
  const long kMax = 4096;
  long cutoff = 0;
  for (long level = 1; level <= kMax; ++level) {
    double min_damp = std::numeric_limits<double>::infinity();
    bool populated = false;
    enumerate_orbit_weights(
        *spec_->group, joint_orbits_, level, [&](const WeightCoords& lam) {
          if (weight_level(*spec_->group, lam) != level) return;
          populated = true;
          min_damp = std::min(
              min_damp,
              std::exp(-heat_t *
                       to_double(target_chars_->heat_eigenvalue(lam))));
        });
    if (!populated) continue;
    if (min_damp < eps) return cutoff;
    cutoff = level;
  }
  return cutoff;
}

ReducedVolume reduced_volume(const ModuliContext& ctx, const TorusPoint& xi,
                             long gamma_order, double heat_t,
                             long level_cutoff, bool extrapolate) {
  if (gamma_order < 1)
    throw std::invalid_argument("reduced_volume: gamma_order must be >= 1");
  const ClassVolume cv = ctx.target_measures().class_volume(xi);
  if (cv.degenerate)
    throw std::invalid_argument(
        "reduced_volume: the class is degenerate (measure zero), where the "
        "density-to-volume correspondence assumes a principal-stratum fiber "
        "and does not apply");
  const DensityValue dens =
      extrapolate ? ctx.dh_density_extrapolated(xi, heat_t, level_cutoff)
                  : ctx.dh_density(xi, heat_t, level_cutoff);
  ReducedVolume out;
  out.value.coeff =
      static_cast<double>(gamma_order) * cv.volume.coeff * dens.value.coeff;
  out.value.volg_power = cv.volume.volg_power - 1 + dens.value.volg_power;
  out.residual =
      static_cast<double>(gamma_order) * cv.volume.coeff * dens.residual;
  return out;
}

}  // namespace twistdh
