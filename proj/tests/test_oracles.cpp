#include "doctest.h"
#include "twistdh/oracles.hpp"

#include <cmath>
#include <complex>
#include <deque>
#include <stdexcept>
#include <vector>

using namespace twistdh;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

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

TorusPoint random_su3_point(PhiloxStream& rng) {
  const double x = rng.uniform() - 0.5, y = rng.uniform() - 0.5;
  return {x, y, -x - y};
}

}  // namespace

TEST_CASE("explicit su(3) modules have the cube dimensions") {
  for (long a = 0; a <= 3; ++a) {
    const Sl3Oracle oracle(a);
    CHECK(oracle.dimension() == (a + 1) * (a + 1) * (a + 1));
    CHECK(oracle.label() == WeightCoords{a, a});
  }
  Sl3Oracle* ignored = nullptr;
  CHECK_THROWS_AS(ignored = new Sl3Oracle(4), std::invalid_argument);
  (void)ignored;
  CHECK_THROWS_AS(sl3_twining_oracle({1, 0}, {0.0, 0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("representation matrices are homomorphic and unitary") {
  const RootSystem rs = build_root_system(Series::A, 2);
  SuModel model(rs);
  PhiloxStream rng(11, 0);
  for (long a : {1L, 2L}) {
    const Sl3Oracle oracle(a);
    const long d = oracle.dimension();
    const Eigen::MatrixXcd g = model.haar(rng), h = model.haar(rng);
    const Eigen::MatrixXcd rg = oracle.rep(g), rh = oracle.rep(h);
    CHECK((oracle.rep(Eigen::MatrixXcd(g * h)) - rg * rh).norm() < 1e-10);
    CHECK((rg.adjoint() * rg - Eigen::MatrixXcd::Identity(d, d)).norm() <
          1e-10);
    // the character is the trace of the representation matrix
    const TorusPoint xi = random_su3_point(rng);
    CHECK(std::abs(oracle.rep(model.torus_element(xi)).trace() -
                   oracle.character(xi)) < 1e-10);
  }
}

TEST_CASE("the twist lift intertwines the flip and squares to one") {
  const RootSystem rs = build_root_system(Series::A, 2);
  SuModel model(rs);
  const Twist flip = twist_by_name(rs, "flip");
  PhiloxStream rng(13, 1);
  for (long a : {1L, 2L}) {
    const Sl3Oracle oracle(a);
    const long d = oracle.dimension();
    const Eigen::MatrixXcd& lift = oracle.twist_lift();
    CHECK((lift * lift - Eigen::MatrixXcd::Identity(d, d)).norm() < 1e-10);
    CHECK((lift.adjoint() * lift - Eigen::MatrixXcd::Identity(d, d)).norm() <
          1e-10);
    for (int i = 0; i < 5; ++i) {
      const Eigen::MatrixXcd g = model.haar(rng);
      const Eigen::MatrixXcd lhs = lift * oracle.rep(g) * lift.adjoint();
      const Eigen::MatrixXcd rhs = oracle.rep(model.apply_twist(flip, g));
      CHECK((lhs - rhs).norm() < 1e-9);
    }
  }
}

TEST_CASE("adjoint twisted trace at the identity is plus two") {
  const Sl3Oracle adjoint(1);
  CHECK(adjoint.twining_trace({0.0, 0.0, 0.0}).real() ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(adjoint.twining_trace({0.0, 0.0, 0.0}).imag()) < 1e-12);
}

TEST_CASE("oracle agrees with the alternating-sum twining characters") {
  const RootSystem rs = build_root_system(Series::A, 2);
  const Twist flip = twist_by_name(rs, "flip");
  const CharacterContext chars(flip);
  PhiloxStream rng(17, 2);
  for (long a = 0; a <= 3; ++a) {
    const WeightCoords lam{a, a};
    for (int i = 0; i < 8; ++i) {
      const TorusPoint xi = flip.alcove_point({0.05 + 0.9 * rng.uniform()});
      const cplx closed = chars.twining_character(lam, xi);
      const cplx explicit_trace = sl3_twining_oracle(lam, xi);
      CHECK(std::abs(closed - explicit_trace) < 1e-9);
    }
    // and at the identity, where the closed form uses the dimension shortcut
    CHECK(std::abs(chars.twining_character(lam, {0.0, 0.0, 0.0}) -
                   sl3_twining_oracle(lam, {0.0, 0.0, 0.0})) < 1e-9);
  }
}

TEST_CASE("oracle agrees with the ordinary Weyl characters") {
  const RootSystem rs = build_root_system(Series::A, 2);
  const Twist id = identity_twist(rs);
  const CharacterContext chars(id);
  PhiloxStream rng(19, 3);
  for (long a = 0; a <= 3; ++a) {
    for (int i = 0; i < 8; ++i) {
      const TorusPoint xi = random_su3_point(rng);
      CHECK(std::abs(chars.weyl_character({a, a}, xi) -
                     Sl3Oracle(a).character(xi)) < 1e-8);
    }
  }
}

TEST_CASE("twisted convolution identity holds under exact Haar integration") {
  const RootSystem rs = build_root_system(Series::A, 2);
  SuModel model(rs);
  PhiloxStream rng(23, 4);
  const Eigen::MatrixXcd x = model.haar(rng);

  // equal labels: all four twist decorations
  for (long a : {0L, 1L}) {
    const Sl3Oracle left(a), right(a);
    for (bool kf : {false, true})
      for (bool tf : {false, true}) {
        const cplx lhs = sl3_convolution_lhs(left, kf, right, tf, x);
        const cplx rhs = sl3_convolution_rhs(left, kf, right, tf, x);
        CHECK(std::abs(lhs - rhs) < 1e-6 * std::max(1.0, std::abs(rhs)));
      }
  }
  // the largest label within budget, matched twists
  {
    const Sl3Oracle left(2), right(2);
    for (bool both : {false, true}) {
      const cplx lhs = sl3_convolution_lhs(left, both, right, both, x);
      const cplx rhs = sl3_convolution_rhs(left, both, right, both, x);
      CHECK(std::abs(lhs - rhs) < 1e-6 * std::max(1.0, std::abs(rhs)));
    }
  }
  // distinct labels annihilate each other
  {
    const Sl3Oracle left(1), right(2);
    for (bool kf : {false, true}) {
      const cplx lhs = sl3_convolution_lhs(left, kf, right, kf, x);
      CHECK(std::abs(lhs) < 1e-6);
      CHECK(sl3_convolution_rhs(left, kf, right, kf, x) == cplx(0.0));
    }
  }
}

TEST_CASE("alcove haar densities integrate to one") {
  struct Case {
    Series s;
    int rank;
    const char* name;
  };
  for (const Case& c : {Case{Series::A, 1, "identity"},
                        Case{Series::A, 2, "identity"},
                        Case{Series::A, 2, "flip"}, Case{Series::A, 3, "flip"},
                        Case{Series::D, 4, "triality"}}) {
    const RootSystem rs = build_root_system(c.s, c.rank);
    const Twist tw = twist_by_name(rs, c.name);
    const MeasureContext mctx(tw);
    const int d = tw.fixed_dim();
    const int n = d == 1 ? 4000 : 250;
    double integral = 0.0;
    std::vector<int> idx(static_cast<size_t>(d), 0);
    while (true) {
      std::vector<double> u(static_cast<size_t>(d));
      double sum = 0.0;
      for (int k = 0; k < d; ++k) {
        u[static_cast<size_t>(k)] = (idx[static_cast<size_t>(k)] + 0.5) / n;
        sum += u[static_cast<size_t>(k)];
      }
      if (sum < 1.0)
        integral += haar_class_density(mctx, u) / std::pow(n, d);
      int k = d - 1;
      while (k >= 0 && ++idx[static_cast<size_t>(k)] == n) {
        idx[static_cast<size_t>(k)] = 0;
        --k;
      }
      if (k < 0) break;
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(5e-3));
  }
  // su(2) closed form
  const RootSystem a1 = build_root_system(Series::A, 1);
  const Twist id1 = identity_twist(a1);
  const MeasureContext m1(id1);
  for (double u : {0.2, 0.5, 0.8})
    CHECK(haar_class_density(m1, {u}) ==
          doctest::Approx(2.0 * std::sin(kPi * u) * std::sin(kPi * u))
              .epsilon(1e-12));
}

TEST_CASE("monte carlo histogram matches the series for the plain torus") {
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  ModuliContext ctx(s.spec);
  // heat time small enough that the damping bias of the leading coefficient
  // stays far below the sampling error of 40000 draws
  const double t = 0.001;
  const McComparison cmp =
      mc_compare(ctx, 40000, 8, t, ctx.default_level_cutoff(t), 20260815);
  CHECK(cmp.dim == 1);
  CHECK(static_cast<int>(cmp.bins.size()) == 8);
  double mc_total = 0.0, series_total = 0.0;
  for (const McBin& b : cmp.bins) {
    mc_total += b.mc_mass;
    series_total += b.series_mass;
    CHECK(std::abs(b.z) < 4.5);
  }
  CHECK(mc_total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(series_total == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("monte carlo histogram matches the series in the flip sector") {
  // one handle plus one flip boundary on su(3): the composed target is the
  // flip, so samples project through the twisted-class coordinates
  Surface s(Series::A, 2);
  s.handle("identity", "identity");
  s.boundary("flip", {0.4});
  ModuliContext ctx(s.spec);
  CHECK(ctx.target_twist().order == 2);
  const double t = 0.004;
  const McComparison cmp =
      mc_compare(ctx, 30000, 8, t, ctx.default_level_cutoff(t), 7070707);
  CHECK(cmp.dim == 1);
  double mc_total = 0.0, series_total = 0.0;
  for (const McBin& b : cmp.bins) {
    mc_total += b.mc_mass;
    series_total += b.series_mass;
    CHECK(std::abs(b.z) < 4.5);
  }
  CHECK(mc_total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(series_total == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("kernel-density curves agree within sampling error") {
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  ModuliContext ctx(s.spec);
  const double t = 0.02;
  const KdeComparison cmp = mc_kde_compare(ctx, 30000, 41, 0.0, t,
                                           ctx.default_level_cutoff(t), 555);
  CHECK(cmp.bandwidth > 0.01);
  CHECK(cmp.bandwidth < 0.2);
  for (size_t j = 0; j < cmp.u.size(); ++j) {
    if (cmp.u[j] < 0.1 || cmp.u[j] > 0.9) continue;  // interior comparison
    const double diff = std::abs(cmp.mc_density[j] - cmp.series_density[j]);
    CHECK(diff < 6.0 * cmp.mc_stderr[j] + 2e-3);
  }
}

TEST_CASE("fixed seeds reproduce results bit for bit") {
  Surface s(Series::A, 1);
  s.handle("identity", "identity");
  ModuliContext ctx(s.spec);
  const McComparison a = mc_compare(ctx, 4000, 6, 0.05, 12, 42);
  const McComparison b = mc_compare(ctx, 4000, 6, 0.05, 12, 42);
  const McComparison c = mc_compare(ctx, 4000, 6, 0.05, 12, 43);
  REQUIRE(a.bins.size() == b.bins.size());
  bool identical = true, same_as_c = true;
  for (size_t i = 0; i < a.bins.size(); ++i) {
    identical = identical && a.bins[i].mc_mass == b.bins[i].mc_mass &&
                a.bins[i].series_mass == b.bins[i].series_mass &&
                a.bins[i].z == b.bins[i].z;
    same_as_c = same_as_c && a.bins[i].mc_mass == c.bins[i].mc_mass;
  }
  CHECK(identical);
  CHECK_FALSE(same_as_c);
}

TEST_CASE("surfaces without matrix models are rejected up front") {
  Surface s(Series::D, 4);
  s.handle("triality", "flip");
  ModuliContext ctx(s.spec);
  CHECK_THROWS_AS(mc_compare(ctx, 100, 4, 0.1, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_kde_compare(ctx, 100, 8, 0.0, 0.1, 4, 1),
                  std::invalid_argument);
}
