#pragma once
// Independent checks for the closed-form machinery.
//
//   * Sl3Oracle: the irreducible su(3) representation with highest weight
//     (a,a), a <= 3, realized concretely inside (C^3)^(x)a (x) (C^3*)^(x)a
//     by generating the cyclic span of the highest-weight vector under the
//     lowering operators.  Characters, twisted traces, and the flip lift are
//     read off from the explicit matrices, with no Weyl-formula input.
//   * An exact Haar-integral convolution identity checker built from the
//     invariant projector of a product representation.
//   * Monte Carlo samplers for the twisted moment-map words on SU(n),
//     compared against the Fourier series predictions bin by bin or through
//     a matched kernel-density smoothing.

#include "twistdh/matrix_models.hpp"
#include "twistdh/moduli.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace twistdh {

class Sl3Oracle {
 public:
  // Highest weight (a,a) in fundamental-weight coordinates; a in 0..3.
  explicit Sl3Oracle(long a);

  WeightCoords label() const { return {a_, a_}; }
  long dimension() const { return dim_; }

  // Ordinary character at exp(2 pi i diag(xi)), xi an ambient 3-vector.
  cplx character(const TorusPoint& xi) const;

  // Twisted trace tr(kappa~ rho(t)) at the same torus element, with the
  // lift normalized to fix the highest-weight vector.
  cplx twining_trace(const TorusPoint& xi) const;

  // Representation matrices in the orthonormal cyclic basis.
  Eigen::MatrixXcd rep(const Eigen::MatrixXcd& g) const;
  Eigen::MatrixXcd rep_algebra(const Eigen::Matrix3cd& x) const;

  // The normalized flip lift kappa~ in the same basis.
  const Eigen::MatrixXcd& twist_lift() const { return kappa_; }

 private:
  Eigen::VectorXcd apply_slotwise(const Eigen::Matrix3cd& cov,
                                  const Eigen::Matrix3cd& dual,
                                  const Eigen::VectorXcd& v, bool sum) const;

  long a_ = 0;
  long dim_ = 0;      // (a+1)^3
  long ambient_ = 0;  // 3^(2a)
  Eigen::MatrixXcd basis_;  // ambient x dim, orthonormal columns
  Eigen::MatrixXcd kappa_;  // dim x dim, highest-weight normalized
};

// Twisted character value of the flip-fixed weight (a,a) at an ambient torus
// point, straight from the explicit representation.
cplx sl3_twining_oracle(const WeightCoords& lambda, const TorusPoint& xi);

// Both sides of the twisted convolution identity
//   (chi~_left^kappa * chi~_right^tau)(x)
//     = delta_{left,right} / dim * chi~_left^{tau kappa}(x),
// with the left-hand side evaluated as an exact Haar integral through the
// invariant projector of conj(rho_left) (x) rho_right.  The flags choose
// between the identity twist and the diagram flip for each factor.
cplx sl3_convolution_lhs(const Sl3Oracle& left, bool kappa_flip,
                         const Sl3Oracle& right, bool tau_flip,
                         const Eigen::MatrixXcd& x);
cplx sl3_convolution_rhs(const Sl3Oracle& left, bool kappa_flip,
                         const Sl3Oracle& right, bool tau_flip,
                         const Eigen::MatrixXcd& x);

// Density of the twisted-class projection of Haar measure with respect to
// du on the alcove-coordinate simplex; integrates to one over the alcove.
double haar_class_density(const MeasureContext& mctx,
                          const std::vector<double>& u);

// ---------------------------------------------------------------------------
// Monte Carlo comparison of moment-map pushforwards against the series.

struct McBin {
  std::vector<double> center;  // alcove coordinates of the cell center
  double mc_mass = 0.0;        // sampled fraction landing in the cell
  double mc_stderr = 0.0;      // binomial standard error of mc_mass
  double series_mass = 0.0;    // cell integral of the predicted density
  double z = 0.0;              // (mc - series) / null standard error
};

struct McComparison {
  std::vector<McBin> bins;
  long n_samples = 0;
  int bins_per_axis = 0;
  int dim = 0;
};

// Sample the fused moment-map word of the assembly behind `ctx`, project to
// alcove coordinates of the composed target twist, and histogram against the
// heat-regularized series prediction.  Sampling is split over a fixed fan of
// 64 generator streams derived from `seed`, so results do not depend on the
// execution order.  Throws if some twist in the word has no matrix model.
McComparison mc_compare(const ModuliContext& ctx, long n_samples,
                        int bins_per_axis, double heat_t, long level_cutoff,
                        std::uint64_t seed);

struct KdeComparison {
  std::vector<double> u;               // evaluation points in [0,1]
  std::vector<double> mc_density;      // kernel-density estimate
  std::vector<double> mc_stderr;       // pointwise standard error
  std::vector<double> series_density;  // series convolved with the same kernel
  double bandwidth = 0.0;
  long n_samples = 0;
};

// Rank-1 alcoves only: smooth the samples with a reflected Gaussian kernel
// (Silverman bandwidth when `bandwidth` <= 0) and convolve the series
// prediction with the identical kernel so the two curves share the smoothing
// bias and differ only by sampling noise.
KdeComparison mc_kde_compare(const ModuliContext& ctx, long n_samples,
                             int n_eval, double bandwidth, double heat_t,
                             long level_cutoff, std::uint64_t seed);

}  // namespace twistdh
