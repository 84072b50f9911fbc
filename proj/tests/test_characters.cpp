#include "doctest.h"
#include "twistdh/characters.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace twistdh;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Twist make(Series s, int rank, const std::string& name) {
  RootSystem rs = build_root_system(s, rank);
  return twist_by_name(rs, name);
}

TorusPoint rand_interior(const Twist& tw, const MeasureContext& ctx,
                         std::mt19937& gen) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const int d = tw.fixed_dim();
  std::vector<double> coeffs(d);
  for (int attempt = 0; attempt < 200; ++attempt) {
    for (auto& c : coeffs) c = u(gen) * 0.9 / d;
    TorusPoint xi = tw.alcove_point(coeffs);
    if (ctx.det_factor(xi) > 1e-6) return xi;
  }
  REQUIRE(false);
  return {};
}

}  // namespace

TEST_CASE("su(2) characters: Chebyshev closed form and dimensions") {
  Twist tw = make(Series::A, 1, "identity");
  CharacterContext cc(tw);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (long k = 0; k <= 4; ++k) {
    WeightCoords lam = {k};
    for (int trial = 0; trial < 5; ++trial) {
      double t = u(gen);
      TorusPoint xi = tw.alcove_point({t});
      cplx value = cc.weyl_character(lam, xi);
      double expected =
          std::sin((k + 1) * M_PI * t) / std::sin(M_PI * t);
      CHECK(std::abs(value - cplx(expected)) < 1e-10);
    }
    // identity evaluation hits the exact dimension shortcut
    TorusPoint origin(tw.group.ambient_dim, 0.0);
    CHECK(std::abs(cc.weyl_character(lam, origin) - cplx(double(k + 1))) <
          1e-12);
    CHECK(cc.heat_eigenvalue(lam) == Rat(k * (k + 2)) / 2);
  }
}

TEST_CASE("identity twist: twining characters collapse to ordinary ones") {
  std::mt19937 gen(5);
  for (auto [s, rank] : {std::pair<Series, int>{Series::A, 2},
                         {Series::B, 2},
                         {Series::G, 2}}) {
    Twist tw = make(s, rank, "identity");
    CharacterContext cc(tw);
    std::vector<WeightCoords> weights =
        fixed_dominant_weights(tw, 3);
    for (const WeightCoords& lam : weights) {
      for (int trial = 0; trial < 4; ++trial) {
        TorusPoint xi = rand_interior(tw, cc.measures(), gen);
        cplx a = cc.twining_character(lam, xi);
        cplx b = cc.weyl_character(lam, xi);
        CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(b)));
      }
    }
  }
}

TEST_CASE("su(3) flip: twining characters are Chebyshev in the double angle") {
  // The commutant reduction turns the (a,a) weight into the (a+1)-dimensional
  // representation evaluated at twice the angle.
  Twist tw = make(Series::A, 2, "flip");
  CharacterContext cc(tw);
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.06, 0.94);
  for (long a = 0; a <= 2; ++a) {
    WeightCoords lam = {a, a};
    for (int trial = 0; trial < 6; ++trial) {
      double t = u(gen);
      TorusPoint xi = tw.alcove_point({t});  // B(theta, xi) = t / 2
      double x = 0.5 * t;
      cplx value = cc.twining_character(lam, xi);
      double expected =
          std::sin((a + 1) * kTwoPi * x) / std::sin(kTwoPi * x);
      CHECK(std::abs(value - cplx(expected)) < 1e-9);
    }
    CHECK(cc.orbit_dimension(lam) == Rat(a + 1));
  }
  CHECK_THROWS_AS(cc.twining_character({1, 0}, tw.alcove_point({0.3})),
                  std::invalid_argument);
}

TEST_CASE("twining values at the identity equal automorphism traces") {
  // Frozen from the classical decompositions of the adjoint representation
  // under a diagram automorphism: tr = dim(fixed) - dim(odd part) for
  // involutions, 14 - 7 = 7 for triality on so(8).
  struct Row {
    Series s;
    int rank;
    const char* name;
    long adjoint_trace;
  };
  const Row rows[] = {
      {Series::A, 2, "flip", 2},      // sl(3): 3 - 5 q-graded -> +2 after
                                      // normalizing on the highest vector
      {Series::A, 3, "flip", 5},      // sl(4) = sp(4) + 5
      {Series::D, 4, "triality", 7},  // so(8) = g2 + 7 + 7
      {Series::E, 6, "flip", 26},     // e6 = f4 + 26
  };
  for (const Row& r : rows) {
    CAPTURE(series_name(r.s));
    Twist tw = make(r.s, r.rank, r.name);
    CharacterContext cc(tw);
    WeightCoords adjoint =
        [&] {
          RVec c = tw.group.fundamental_coords(tw.group.highest_root());
          WeightCoords w(c.size());
          for (std::size_t i = 0; i < c.size(); ++i) w[i] = to_long(c[i]);
          return w;
        }();
    CHECK(cc.orbit_dimension(adjoint) == Rat(r.adjoint_trace));
    TorusPoint origin(tw.group.ambient_dim, 0.0);
    CHECK(std::abs(cc.twining_character(adjoint, origin) -
                   cplx(double(r.adjoint_trace))) < 1e-9);
  }
}

TEST_CASE("fallback extrapolation recovers wall values") {
  // a point on an interior reflection wall of the su(4)-flip alcove,
  // approached smoothly by the two-step extrapolation
  Twist tw = make(Series::A, 3, "flip");
  CharacterContext cc(tw);
  WeightCoords lam = {1, 0, 1};
  // walk along an edge of the alcove: one barycentric weight vanishes
  TorusPoint on_wall = tw.alcove_point({0.0, 0.35});
  cplx direct = cc.twining_character(lam, on_wall);
  // compare with a nearby honest evaluation sequence
  TorusPoint close = tw.alcove_point({1e-7, 0.35});
  cplx nearby = cc.twining_character(lam, close);
  CHECK(std::abs(direct - nearby) < 1e-4 * (1.0 + std::abs(nearby)));
}

TEST_CASE("fixed dominant weight enumeration by level") {
  SUBCASE("su(3) flip keeps balanced weights") {
    Twist tw = make(Series::A, 2, "flip");
    auto ws = fixed_dominant_weights(tw, 4);
    REQUIRE(ws.size() == 3);
    CHECK(ws[0] == WeightCoords{0, 0});
    CHECK(ws[1] == WeightCoords{1, 1});
    CHECK(ws[2] == WeightCoords{2, 2});
  }
  SUBCASE("counts for larger twists") {
    CHECK(fixed_dominant_weights(make(Series::E, 6, "flip"), 4).size() == 8);
    CHECK(fixed_dominant_weights(make(Series::D, 4, "triality"), 4).size() ==
          4);
    // untwisted su(2): levels 0..4
    CHECK(fixed_dominant_weights(make(Series::A, 1, "identity"), 4).size() ==
          5);
  }
  SUBCASE("every enumerated weight is fixed and within level") {
    Twist tw = make(Series::D, 5, "flip");
    CharacterContext cc(tw);
    auto ws = fixed_dominant_weights(tw, 3);
    for (const auto& w : ws) {
      CHECK(cc.is_fixed_weight(w));
      CHECK(weight_level(tw.group, w) <= 3);
    }
  }
}

TEST_CASE("collapsed inner product equals the literal grid sum") {
  // deliberately tiny grids so aliasing terms are active in both paths
  struct Probe {
    Series s;
    int rank;
    const char* name;
    long n;
  };
  const Probe probes[] = {
      {Series::A, 2, "flip", 3},
      {Series::A, 2, "flip", 7},
      {Series::A, 3, "flip", 4},
      {Series::D, 4, "triality", 5},
  };
  for (const Probe& p : probes) {
    CAPTURE(series_name(p.s));
    CAPTURE(p.n);
    Twist tw = make(p.s, p.rank, p.name);
    CharacterContext cc(tw);
    auto ws = fixed_dominant_weights(tw, 2);
    for (const auto& lam : ws) {
      for (const auto& mu : ws) {
        double exact = cc.inner_product(lam, mu, p.n);
        double dense = cc.inner_product_dense(lam, mu, p.n);
        CHECK(std::abs(exact - dense) < 1e-10);
      }
    }
  }
}

TEST_CASE("twining characters are orthonormal under the class measure") {
  for (auto [s, rank, name, level] :
       {std::tuple<Series, int, const char*, long>{Series::A, 2, "flip", 4},
        {Series::A, 3, "flip", 3},
        {Series::A, 4, "flip", 3},
        {Series::D, 4, "flip", 2},
        {Series::D, 4, "triality", 2}}) {
    CAPTURE(series_name(s));
    CAPTURE(rank);
    Twist tw = make(s, rank, name);
    CharacterContext cc(tw);
    auto ws = fixed_dominant_weights(tw, level);
    REQUIRE(ws.size() >= 2);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      for (std::size_t j = 0; j < ws.size(); ++j) {
        double ip = cc.inner_product(ws[i], ws[j], 256);
        double expected = (i == j) ? 1.0 : 0.0;
        CHECK(std::abs(ip - expected) < 1e-8);
      }
    }
  }
}
