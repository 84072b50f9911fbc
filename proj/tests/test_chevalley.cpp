#include "doctest.h"
#include "twistdh/chevalley.hpp"

#include <random>

using namespace twistdh;

namespace {

Twist make(Series s, int rank, const std::string& name) {
  RootSystem rs = build_root_system(s, rank);
  return twist_by_name(rs, name);
}

// Integer simple-root coordinates of a positive root.
std::vector<long> pos_coords(const RootSystem& rs, std::size_t p) {
  return rs.root_simple_coords[p];
}

// B-pairing of two root-lattice vectors given in simple coordinates; for
// simply-laced systems the Gram matrix of the simples is the Cartan matrix.
long lattice_pairing(const RootSystem& rs, const std::vector<long>& a,
                     const std::vector<long>& b) {
  long acc = 0;
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.rank; ++j)
      acc += a[i] * to_long(rs.cartan[i][j]) * b[j];
  return acc;
}

int sign_of(const TwistSigns& s, std::size_t p) { return s.root_sign[p]; }

// Index of the positive root with the given simple coordinates.
std::size_t find_positive(const RootSystem& rs, const std::vector<long>& c) {
  for (std::size_t p = 0; p < rs.n_positive; ++p)
    if (rs.root_simple_coords[p] == c) return p;
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("structure cocycle: antisymmetry against the pairing parity") {
  std::mt19937 gen(7);
  for (auto [s, rank] : {std::pair<Series, int>{Series::A, 2},
                         {Series::A, 4},
                         {Series::D, 4},
                         {Series::D, 5},
                         {Series::E, 6}}) {
    Twist tw = make(s, rank, "flip");
    TwistSigns signs = build_twist_signs(tw);
    std::uniform_int_distribution<long> coef(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<long> a(rank), b(rank);
      for (auto& v : a) v = coef(gen);
      for (auto& v : b) v = coef(gen);
      int eab = cocycle_eval(signs, a, b);
      int eba = cocycle_eval(signs, b, a);
      long pair = lattice_pairing(tw.group, a, b);
      CHECK(eab * eba == ((pair % 2 == 0) ? 1 : -1));
      long na = lattice_pairing(tw.group, a, a);
      REQUIRE(na % 2 == 0);
      CHECK(cocycle_eval(signs, a, a) == (((na / 2) % 2 == 0) ? 1 : -1));
    }
  }
}

TEST_CASE("lift signs, hand-computed small cases") {
  // Conventions: the lift fixes every simple root vector, and the sign of a
  // composite root is propagated through the structure cocycle.
  SUBCASE("su(3) flip: the highest root vector picks up a minus sign") {
    Twist tw = make(Series::A, 2, "flip");
    TwistSigns signs = build_twist_signs(tw);
    std::size_t theta = find_positive(tw.group, {1, 1});
    CHECK(sign_of(signs, theta) == -1);
    CHECK(sign_of(signs, find_positive(tw.group, {1, 0})) == 1);
    CHECK(sign_of(signs, find_positive(tw.group, {0, 1})) == 1);
  }
  SUBCASE("su(4) flip: swapped pair carries -1 each, fixed roots stay +1") {
    Twist tw = make(Series::A, 3, "flip");
    TwistSigns signs = build_twist_signs(tw);
    CHECK(sign_of(signs, find_positive(tw.group, {1, 1, 0})) == -1);
    CHECK(sign_of(signs, find_positive(tw.group, {0, 1, 1})) == -1);
    CHECK(sign_of(signs, find_positive(tw.group, {1, 1, 1})) == 1);
    CHECK(sign_of(signs, find_positive(tw.group, {0, 1, 0})) == 1);
  }
  SUBCASE("su(5) flip: both fixed positive roots carry -1") {
    Twist tw = make(Series::A, 4, "flip");
    TwistSigns signs = build_twist_signs(tw);
    CHECK(sign_of(signs, find_positive(tw.group, {0, 1, 1, 0})) == -1);
    CHECK(sign_of(signs, find_positive(tw.group, {1, 1, 1, 1})) == -1);
  }
}

TEST_CASE("fixed-subalgebra dimension counts match the classical tables") {
  // dim g^kappa = dim t^kappa + 2 * (#multi-orbits + #fixed roots with +1):
  // each orbit of root vectors contributes one invariant line, a fixed root
  // contributes one exactly when its vector is honestly fixed.
  struct Row {
    Series s;
    int rank;
    const char* twist;
    long fixed_alg_dim;
  };
  const Row rows[] = {
      {Series::A, 2, "flip", 3},    // so(3)
      {Series::A, 3, "flip", 10},   // sp(4)
      {Series::A, 4, "flip", 10},   // so(5)
      {Series::A, 5, "flip", 21},   // sp(6)
      {Series::A, 6, "flip", 21},   // so(7)
      {Series::D, 4, "flip", 21},   // so(7)
      {Series::D, 5, "flip", 36},   // so(9)
      {Series::D, 4, "triality", 14},  // g2
      {Series::E, 6, "flip", 52},   // f4
      {Series::A, 2, "identity", 8},
      {Series::D, 4, "identity", 28},
  };
  for (const Row& r : rows) {
    CAPTURE(series_name(r.s));
    CAPTURE(r.rank);
    CAPTURE(r.twist);
    Twist tw = make(r.s, r.rank, r.twist);
    TwistSigns signs = build_twist_signs(tw);
    long invariant_root_lines = 0;
    for (const RootOrbit& orbit : signs.orbits) {
      if (orbit.members.size() > 1) {
        CHECK(orbit.sign == 1);  // closed cycles always admit a fixed vector
        ++invariant_root_lines;
      } else if (orbit.sign == 1) {
        ++invariant_root_lines;
      }
    }
    CHECK(tw.fixed_dim() + 2 * invariant_root_lines == r.fixed_alg_dim);
  }
}

TEST_CASE("orbit bookkeeping: partition, cycle order, exponents") {
  for (auto [s, rank, name] :
       {std::tuple<Series, int, const char*>{Series::A, 5, "flip"},
        {Series::D, 4, "triality"},
        {Series::E, 6, "flip"},
        {Series::G, 2, "identity"},
        {Series::B, 3, "identity"}}) {
    Twist tw = make(s, rank, name);
    TwistSigns signs = build_twist_signs(tw);
    const RootSystem& rs = tw.group;
    std::vector<int> seen(rs.n_positive, 0);
    for (const RootOrbit& orbit : signs.orbits) {
      RVec total = rvec_zero(rs.ambient_dim);
      for (std::size_t p : orbit.members) {
        ++seen[p];
        total = rvec_add(total, rs.roots[p]);
      }
      CHECK(rvec_eq(total, orbit.exponent));
      // members follow the twist permutation cyclically
      auto next_of = [&](std::size_t p) {
        return static_cast<std::size_t>(tw.root_perm[p]);
      };
      for (std::size_t k = 0; k + 1 < orbit.members.size(); ++k)
        CHECK(next_of(orbit.members[k]) == orbit.members[k + 1]);
      CHECK(next_of(orbit.members.back()) == orbit.members.front());
    }
    for (int c : seen) CHECK(c == 1);
  }
}
