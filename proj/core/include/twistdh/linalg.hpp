#pragma once
// Small exact-rational linear algebra used by the lattice/root-system layers.
// Everything here is dense and tiny (dimensions <= 9), so plain Gaussian
// elimination over mpq_class is exact and fast enough.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistdh {

using Rat = mpq_class;
using RVec = std::vector<Rat>;
using RMat = std::vector<RVec>;  // row-major

using cplx = std::complex<double>;

inline double to_double(const Rat& q) { return q.get_d(); }

// Integer value of an exact rational that is known to be integral.
inline long to_long(const Rat& q) {
  if (q.get_den() != 1) throw std::runtime_error("to_long: rational is not an integer");
  return q.get_num().get_si();
}

// ---- vectors ----------------------------------------------------------
RVec rvec_zero(std::size_t n);
RVec rvec_add(const RVec& a, const RVec& b);
RVec rvec_sub(const RVec& a, const RVec& b);
RVec rvec_scale(const Rat& c, const RVec& a);
Rat rvec_dot(const RVec& a, const RVec& b);
bool rvec_is_zero(const RVec& a);
bool rvec_eq(const RVec& a, const RVec& b);
std::vector<double> rvec_to_doubles(const RVec& a);

// ---- matrices ---------------------------------------------------------
RMat rmat_zero(std::size_t r, std::size_t c);
RMat rmat_identity(std::size_t n);
RMat rmat_mul(const RMat& a, const RMat& b);
RVec rmat_apply(const RMat& a, const RVec& v);
RMat rmat_transpose(const RMat& a);
RMat rmat_add(const RMat& a, const RMat& b);
RMat rmat_scale(const Rat& c, const RMat& a);

// Exact determinant via fraction-preserving Gaussian elimination.
Rat rmat_det(const RMat& a);

// Solve A x = b for square invertible A; throws std::runtime_error if singular.
RVec rmat_solve(const RMat& a, const RVec& b);
RMat rmat_inverse(const RMat& a);

// Basis of the kernel {x : A x = 0} (columns as RVecs).
std::vector<RVec> rmat_kernel(const RMat& a);

// Row-reduce `vecs` and return a maximal linearly independent subset (in order).
std::vector<RVec> independent_subset(const std::vector<RVec>& vecs);
std::size_t rank_of(const std::vector<RVec>& vecs);

// Express v in the basis `basis` (all RVecs of equal length); throws if v is
// not in the span or the basis is dependent.
RVec coords_in_basis(const std::vector<RVec>& basis, const RVec& v);

// Gram matrix G_ij = scale * <basis_i, basis_j> (Euclidean dot).
RMat gram_matrix(const std::vector<RVec>& basis, const Rat& scale);

// sqrt(det(G)) for a positive-definite exact Gram matrix (double result).
double covolume_from_gram(const RMat& gram);

}  // namespace twistdh
