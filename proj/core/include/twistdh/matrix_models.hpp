#pragma once
// Concrete unitary matrix realizations of the series-A groups and their
// order-2 diagram automorphism, for Monte Carlo ground truth: Haar sampling
// of SU(n), the flip as an explicit map on matrices, and projection of
// (twisted) conjugacy classes onto the fundamental alcove through
// eigenphases.  Other series and the order-3 twist have no matrix model
// here; asking for one is an error that callers surface verbatim.

#include <Eigen/Dense>
#include <vector>

#include "twistdh/measures.hpp"
#include "twistdh/rng.hpp"

namespace twistdh {

class SuModel {
 public:
  // Requires a series-A root system of rank n-1.
  explicit SuModel(const RootSystem& rs);

  int n() const { return n_; }
  const RootSystem& group() const { return *rs_; }

  // Haar-distributed element of SU(n): complex Ginibre matrix, Householder
  // QR with the R-diagonal phase correction (making the unitary factor
  // Haar on U(n)), then division by the principal n-th root of the
  // determinant.  Left translation by a fixed special-unitary matrix
  // commutes with every step, so the result is Haar on SU(n).
  Eigen::MatrixXcd haar(PhiloxStream& rng) const;

  // exp(2 pi i diag(xi)) for ambient coordinates xi (length n).
  Eigen::MatrixXcd torus_element(const TorusPoint& xi) const;

  // The named twist as a map on matrices: identity, or the flip
  // g -> J conj(g) J^{-1} with J the alternating-sign antidiagonal matrix
  // (the longest-Weyl permutation correcting g -> transpose-inverse so the
  // standard Borel is preserved).  Throws std::invalid_argument for twists
  // without a matrix model.
  Eigen::MatrixXcd apply_twist(const Twist& tw,
                               const Eigen::MatrixXcd& g) const;
  const Eigen::MatrixXcd& flip_matrix() const { return J_; }
  bool has_model(const Twist& tw) const;

  // Ambient coordinates, reduced to the fundamental alcove of tw, of the
  // twisted conjugacy class of g.  For the identity twist these are the
  // branch-fixed eigenphases of g; for the flip they are half the
  // eigenphases of g * flip(g), which transforms by ordinary conjugation
  // when g is twisted-conjugated.  Throws for non-unitary input and for
  // twists without a matrix model.
  TorusPoint class_projection(const Twist& tw,
                              const Eigen::MatrixXcd& g) const;

 private:
  const RootSystem* rs_;
  int n_;
  Eigen::MatrixXcd J_;
  Eigen::MatrixXcd Jinv_;
  std::vector<int> flip_perm_;
};

// Coefficients of a point of the fundamental alcove in the vertex basis:
// reduces xi to the alcove and solves xi = sum_i u_i * vertex_i (least
// squares over the nonzero alcove vertices).  These are the coordinates all
// alcove grids and histograms are expressed in.
std::vector<double> alcove_coordinates(const Twist& tw,
                                       const TorusPoint& xi_ambient);

}  // namespace twistdh
