#include "doctest.h"
#include "twistdh/linalg.hpp"

#include <cmath>

using namespace twistdh;

TEST_CASE("exact determinant, inverse, solve") {
  RMat a = {{Rat(2), Rat(1)}, {Rat(1), Rat(3)}};
  CHECK(rmat_det(a) == Rat(5));
  RMat ainv = rmat_inverse(a);
  CHECK(rmat_mul(a, ainv) == rmat_identity(2));
  RVec x = rmat_solve(a, {Rat(1), Rat(0)});
  CHECK(x[0] == Rat(3, 5));
  CHECK(x[1] == Rat(-1, 5));

  RMat sing = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
  CHECK(rmat_det(sing) == 0);
  CHECK_THROWS(rmat_solve(sing, {Rat(1), Rat(1)}));
}

TEST_CASE("kernel and rank") {
  RMat a = {{Rat(1), Rat(2), Rat(3)}, {Rat(2), Rat(4), Rat(6)}};
  auto ker = rmat_kernel(a);
  CHECK(ker.size() == 2);
  for (const auto& k : ker) CHECK(rvec_is_zero(rmat_apply(a, k)));

  std::vector<RVec> vecs = {{Rat(1), Rat(0)}, {Rat(2), Rat(0)}, {Rat(0), Rat(1)}};
  CHECK(rank_of(vecs) == 2);
  auto ind = independent_subset(vecs);
  CHECK(ind.size() == 2);
}

TEST_CASE("coordinates in a basis") {
  std::vector<RVec> basis = {{Rat(1), Rat(1), Rat(0)}, {Rat(0), Rat(1), Rat(1)}};
  RVec v = {Rat(2), Rat(5), Rat(3)};
  RVec c = coords_in_basis(basis, v);
  CHECK(c[0] == 2);
  CHECK(c[1] == 3);
  CHECK_THROWS(coords_in_basis(basis, RVec{Rat(1), Rat(0), Rat(0)}));
}

TEST_CASE("lattice covolume from the Gram matrix") {
  // Z^2 with the standard form has covolume 1.
  RMat g = gram_matrix({{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}, Rat(1));
  CHECK(covolume_from_gram(g) == doctest::Approx(1.0).epsilon(1e-14));
  // One vector of squared length 2: covolume sqrt(2).
  RMat g2 = gram_matrix({{Rat(1), Rat(-1)}}, Rat(1));
  CHECK(covolume_from_gram(g2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}
