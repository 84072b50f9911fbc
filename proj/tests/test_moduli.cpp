#include "doctest.h"
#include "twistdh/moduli.hpp"

#include <cmath>
#include <complex>
#include <deque>
#include <set>
#include <stdexcept>
#include <vector>

using namespace twistdh;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Owns the group and the twists so the assembly's raw pointers stay valid.
struct Surface {
  explicit Surface(Series s, int rank) : rs(build_root_system(s, rank)) {
    spec.group = &rs;
  }
  const Twist* tw(const std::string& name) {
    twists.push_back(twist_by_name(rs, name));
    return &twists.back();
  }
  void handle(const std::string& tau, const std::string& kappa) {
    spec.handles.push_back({tw(tau), tw(kappa)});
  }
  void boundary(const std::string& name, const std::vector<double>& coeffs) {
    const Twist* t = tw(name);
    spec.boundaries.push_back({t, t->alcove_point(coeffs)});
  }
  RootSystem rs;
  std::deque<Twist> twists;
  SurfaceAssembly spec;
};

// su(2) closed forms: character of the k-th irreducible at the alcove
// coordinate u, and the Casimir exponent.
double su2_char(long k, double u) {
  return std::sin((k + 1) * kPi * u) / std::sin(kPi * u);
}
double su2_heat(long k, double t) {
  return std::exp(-t * 0.5 * static_cast<double>(k) * (k + 2));
}

}  // namespace

TEST_CASE("one-handle torus over su(2): exact inverse-dimension table") {
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  ModuliContext ctx(s.spec);
  CHECK(ctx.coefficient_power() == 2);
  CHECK(ctx.target_twist().is_identity());
  for (long k = 0; k <= 6; ++k) {
    const DHCoefficient c = ctx.dh_coefficient({k});
    CHECK_FALSE(c.vanishes);
    CHECK_FALSE(c.degenerate);
    CHECK(c.rational == Rat(1) / (k + 1));
    CHECK(std::abs(c.numeric - cplx(1.0)) < 1e-14);
    CHECK(c.volg_power == 2);
    // classic commutator-class expansion: one inverse dimension survives
    // after dividing out the total mass volG^2
    CHECK(ctx.probability_coefficient({k}).real() ==
          doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
  }
}

TEST_CASE("untwisted cylinder: coefficients factor into class data") {
  const double u1 = 0.3, u2 = 0.55;
  Surface s(Series::A, 1);
  s.boundary("identity", {u1});
  s.boundary("identity", {u2});
  ModuliContext ctx(s.spec);
  CHECK(ctx.coefficient_power() == 2);
  for (long k = 0; k <= 5; ++k) {
    const DHCoefficient c = ctx.dh_coefficient({k});
    CHECK_FALSE(c.vanishes);
    CHECK(c.rational == Rat(1) / (k + 1));
    CHECK(c.volg_power == 2);
    // Vol(C(u)) = sqrt(2) sin(pi u) volG, so the numeric part collapses to
    // 2 sin((k+1) pi u1) sin((k+1) pi u2).
    const double expect =
        2.0 * std::sin((k + 1) * kPi * u1) * std::sin((k + 1) * kPi * u2);
    CHECK(c.numeric.real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(c.numeric.imag()) < 1e-12);
  }
}

TEST_CASE("handle plus boundary fuse to the product formula") {
  const double u0 = 0.4;
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  s.boundary("identity", {u0});
  ModuliContext ctx(s.spec);
  CHECK(ctx.coefficient_power() == 3);
  for (long k = 0; k <= 5; ++k) {
    const DHCoefficient c = ctx.dh_coefficient({k});
    CHECK(c.rational == Rat(1) / ((k + 1) * (k + 1)));
    CHECK(c.volg_power == 3);
    const double expect = std::sqrt(2.0) * std::sin((k + 1) * kPi * u0);
    CHECK(c.numeric.real() == doctest::Approx(expect).epsilon(1e-12));
    // probability coefficient = chi_k(a) / dim^2
    CHECK(ctx.probability_coefficient({k}).real() ==
          doctest::Approx(su2_char(k, u0) / ((k + 1) * (k + 1)))
              .epsilon(1e-12));
  }
}

TEST_CASE("weights moved by a decorating twist vanish structurally") {
  Surface s(Series::A, 2);
  s.handle("identity", "identity");
  s.boundary("flip", {0.2});
  ModuliContext ctx(s.spec);
  CHECK(ctx.target_twist().simple_perm == std::vector<int>{1, 0});

  CHECK_FALSE(ctx.admissible({1, 0}));
  const DHCoefficient moved = ctx.dh_coefficient({1, 0});
  CHECK(moved.vanishes);
  CHECK(moved.numeric == cplx(0.0));
  CHECK(ctx.probability_coefficient({1, 0}) == cplx(0.0));

  CHECK(ctx.admissible({1, 1}));
  CHECK_FALSE(ctx.dh_coefficient({1, 1}).vanishes);

  const std::vector<WeightCoords> adm = ctx.admissible_weights(4);
  for (const WeightCoords& w : adm) CHECK(w[0] == w[1]);
  // matches the twist's own fixed-weight enumeration
  CHECK(adm == fixed_dominant_weights(*s.spec.boundaries[0].twist, 4));
}

TEST_CASE("degenerate boundary class zeroes the table and blocks volumes") {
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  s.boundary("identity", {0.0});  // central class: measure zero
  ModuliContext ctx(s.spec);
  const DHCoefficient c = ctx.dh_coefficient({2});
  CHECK_FALSE(c.vanishes);
  CHECK(c.degenerate);
  CHECK(c.numeric == cplx(0.0));
  CHECK(ctx.probability_coefficient({2}) == cplx(0.0));
  // the density is identically zero and carries no tail
  const DensityValue d = ctx.dh_density({0.125, -0.125}, 0.05, 8);
  CHECK(d.value.coeff == 0.0);
  CHECK(d.residual == 0.0);
  // zero volume at regular evaluation classes, rejection at degenerate ones
  CHECK(reduced_volume(ctx, {0.2, -0.2}, 1, 0.05, 8).value.coeff == 0.0);
  CHECK_THROWS_AS(reduced_volume(ctx, {0.0, 0.0}, 1, 0.05, 8),
                  std::invalid_argument);
}

TEST_CASE("fusing two assemblies multiplies their coefficient tables") {
  Surface left(Series::A, 2);
  left.handle("flip", "flip");
  left.boundary("flip", {0.22});
  Surface right(Series::A, 2);
  right.boundary("flip", {0.37});
  Surface both(Series::A, 2);
  both.handle("flip", "flip");
  both.boundary("flip", {0.22});
  both.boundary("flip", {0.37});

  ModuliContext la(left.spec), rb(right.spec), ab(both.spec);
  for (const WeightCoords lam :
       std::vector<WeightCoords>{{0, 0}, {1, 1}, {2, 2}}) {
    const DHCoefficient fused = fuse_coefficients(
        la.dh_coefficient(lam), rb.dh_coefficient(lam),
        weyl_dimension(left.rs, lam));
    const DHCoefficient direct = ab.dh_coefficient(lam);
    CHECK(fused.rational == direct.rational);
    CHECK(fused.volg_power == direct.volg_power);
    CHECK(std::abs(fused.numeric - direct.numeric) < 1e-12);
    CHECK(fused.vanishes == direct.vanishes);
  }
  // the symbolic-volume view fuses the same way
  const VolumeExpr v = fuse_coefficients(la.dh_coefficient({1, 1}).value(),
                                         rb.dh_coefficient({1, 1}).value(), 8);
  CHECK(v.coeff ==
        doctest::Approx(ab.dh_coefficient({1, 1}).value().coeff)
            .epsilon(1e-12));
  CHECK(v.volg_power == ab.dh_coefficient({1, 1}).value().volg_power);
}

TEST_CASE("one-handle torus density matches the plain sine series") {
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  ModuliContext ctx(s.spec);
  const double t = 0.05;
  const long cutoff = ctx.default_level_cutoff(t);
  CHECK(cutoff >= 8);

  for (double u : {0.17, 0.5, 0.83}) {
    const TorusPoint xi = ctx.target_twist().alcove_point({u});
    const DensityValue d = ctx.dh_density(xi, t, cutoff);
    CHECK(d.value.volg_power == 1);
    double expect = 0.0;
    for (long k = 0; k <= cutoff; ++k)
      expect += su2_heat(k, t) * su2_char(k, u) / (k + 1);
    CHECK(d.value.coeff == doctest::Approx(expect).epsilon(1e-12));
    CHECK(d.residual < 1e-6);

    // exact Weyl invariance through the alcove reduction
    TorusPoint neg = xi;
    for (double& c : neg) c = -c;
    CHECK(ctx.dh_density(neg, t, cutoff).value.coeff ==
          doctest::Approx(d.value.coeff).epsilon(1e-12));
  }
}

TEST_CASE("density truncation residual dominates the dropped tail") {
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  ModuliContext ctx(s.spec);
  const TorusPoint xi = ctx.target_twist().alcove_point({0.31});
  const double t = 0.08;
  const DensityValue coarse = ctx.dh_density(xi, t, 3);
  const DensityValue fine = ctx.dh_density(xi, t, 60);
  CHECK(std::abs(coarse.value.coeff - fine.value.coeff) <=
        coarse.residual + fine.residual + 1e-12);
  CHECK(coarse.residual > std::abs(coarse.value.coeff - fine.value.coeff) / 50);
}

TEST_CASE("extrapolated density hits the heat-kernel limit") {
  // Torus with one flip boundary held at u0; the exact zero-temperature
  // density is the Dirichlet Green's function series
  //   volG^2 sqrt(2) sum_k sin((k+1) pi u0) sin((k+1) pi u) /
  //          ((k+1)^2 sin(pi u))
  // which sums to volG^2 sqrt(2) (pi^2/2) G(u, u0) / sin(pi u) with
  // G(u, u0) = u0 (1 - u) for u > u0.
  const double u0 = 0.35, u = 0.7;
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  s.boundary("identity", {u0});
  ModuliContext ctx(s.spec);
  const TorusPoint xi = ctx.target_twist().alcove_point({u});
  const double t = 0.1;
  const long cutoff = ctx.default_level_cutoff(t / 4);

  const double exact = std::sqrt(2.0) * 0.5 * kPi * kPi * u0 * (1.0 - u) /
                       std::sin(kPi * u);
  const DensityValue plain = ctx.dh_density(xi, t, cutoff);
  const DensityValue extr = ctx.dh_density_extrapolated(xi, t, cutoff);
  CHECK(extr.value.volg_power == 2);
  const double err_plain = std::abs(plain.value.coeff - exact);
  const double err_extr = std::abs(extr.value.coeff - exact);
  CHECK(err_extr < 2e-4 * exact);
  CHECK(err_extr * 5.0 < err_plain);  // extrapolation actually helps
  CHECK(err_extr < extr.residual + 1e-4 * exact);
}

TEST_CASE("reduced volume reproduces the sawtooth profile of the torus") {
  // One free boundary on a one-handle su(2) surface: Vol(M(u)) extrapolates
  // to gamma sqrt(2) sum_k sin((k+1) pi u)/(k+1) = gamma sqrt(2) pi (1-u)/2.
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  ModuliContext ctx(s.spec);
  const double t = 0.05;
  const long cutoff = ctx.default_level_cutoff(t / 4);
  for (double u : {0.33, 0.61, 0.85}) {
    const TorusPoint xi = ctx.target_twist().alcove_point({u});
    const ReducedVolume rv = reduced_volume(ctx, xi, 1, t, cutoff, true);
    CHECK(rv.value.volg_power == 1);
    const double exact = std::sqrt(2.0) * kPi * (1.0 - u) / 2.0;
    CHECK(rv.value.coeff == doctest::Approx(exact).epsilon(5e-3));

    const ReducedVolume doubled = reduced_volume(ctx, xi, 2, t, cutoff, true);
    CHECK(doubled.value.coeff ==
          doctest::Approx(2.0 * rv.value.coeff).epsilon(1e-14));
  }
  CHECK_THROWS_AS(reduced_volume(ctx, {0.0, 0.0}, 1, t, cutoff),
                  std::invalid_argument);
}

TEST_CASE("admissible weights respect every decorating twist jointly") {
  Surface s(Series::D, 4);
  s.handle("triality", "flip");
  ModuliContext ctx(s.spec);
  // The commutator of the two outer automorphisms is again order three.
  CHECK(ctx.target_twist().order == 3);

  const std::vector<int>& fp = s.spec.handles[0].kappa->simple_perm;
  const std::vector<int>& tp = s.spec.handles[0].tau->simple_perm;
  const std::vector<WeightCoords> adm = ctx.admissible_weights(3);
  CHECK(!adm.empty());
  std::set<WeightCoords> seen(adm.begin(), adm.end());
  // brute-force filter over all dominant weights of the same levels
  long count = 0;
  for (long a = 0; a <= 3; ++a)
    for (long b = 0; b <= 3; ++b)
      for (long c = 0; c <= 3; ++c)
        for (long d = 0; d <= 3; ++d) {
          const WeightCoords w{a, b, c, d};
          if (weight_level(s.rs, w) > 3) continue;
          bool fixed = true;
          for (size_t i = 0; i < 4; ++i)
            if (w[fp[i]] != w[i] || w[tp[i]] != w[i]) fixed = false;
          if (fixed) {
            ++count;
            CHECK(seen.count(w) == 1);
            CHECK(ctx.admissible(w));
          } else {
            CHECK(seen.count(w) == 0);
            CHECK_FALSE(ctx.admissible(w));
          }
        }
  CHECK(count == static_cast<long>(adm.size()));
}

TEST_CASE("assembly validation rejects mismatched or empty surfaces") {
  Surface s(Series::A, 2);
  ModuliContext* ignored = nullptr;
  CHECK_THROWS_AS(ignored = new ModuliContext(s.spec), std::invalid_argument);
  (void)ignored;

  Surface other(Series::A, 3);
  const Twist* alien = other.tw("identity");
  s.spec.boundaries.push_back({alien, {0.1, 0.0, -0.1}});
  CHECK_THROWS_AS(ignored = new ModuliContext(s.spec), std::invalid_argument);
}
