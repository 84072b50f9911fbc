#pragma once

#include <complex>
#include <vector>

#include "twistdh/chevalley.hpp"
#include "twistdh/twist.hpp"

namespace twistdh {

// A point t = exp(xi) of the maximal torus, as ambient coordinates of xi.
// For twisted operations xi must lie in the fixed subspace t^kappa.
using TorusPoint = std::vector<double>;

// A value "coeff * volG^power" where volG, the Riemannian volume of the
// group, is kept symbolic.  Every closed-form volume in the artifact is a
// monomial in volG, so results are reported as (coefficient, power) pairs.
struct VolumeExpr {
  double coeff = 0.0;
  int volg_power = 0;
};

VolumeExpr vol_mul(const VolumeExpr& a, const VolumeExpr& b);
VolumeExpr vol_scale(double s, const VolumeExpr& a);
// Addition is only defined within one grading; throws on a power mismatch
// unless one operand has coefficient exactly zero.
VolumeExpr vol_add(const VolumeExpr& a, const VolumeExpr& b);

struct ClassVolume {
  VolumeExpr volume;        // carries volg_power 1
  bool degenerate = false;  // true when the class is lower-dimensional
};

// Per-twist evaluation context.  Holds the lift signs, the orbit blocks of
// the determinant factor, and the commutant-group images of the half-sum
// weight; immutable after construction.  The referenced Twist must outlive
// the context.
class MeasureContext {
 public:
  explicit MeasureContext(const Twist& tw);

  const Twist& twist() const { return *tw_; }
  const TwistSigns& signs() const { return signs_; }

  // |det(Ad_a kappa - 1)| on the B-orthocomplement of the fixed torus
  // algebra: the moving torus block contributes |det(kappa - 1)| and each
  // orbit of positive roots contributes |1 - sign * a^{exponent}|^2 (the
  // square accounts for the mirror block of negative roots).  Vanishes
  // exactly at non-regular points.
  double det_factor(const TorusPoint& a) const;

  // Sum over the commutant Weyl group of det-on-fixed-space signs times
  // a^{w(shift)}; shift must be fixed by the twist.
  cplx alternating_sum(const TorusPoint& a, const RVec& shift) const;

  // Riemannian volume of the twisted conjugacy class through exp(xi),
  //   det_factor^{1/2} * volG / (covolume of the unit lattice of T^kappa);
  // the point is reduced to the fundamental alcove first.  Returns a zero
  // VolumeExpr with the degenerate flag at non-regular points.
  ClassVolume class_volume(const TorusPoint& a) const;

  // Covolume of the lattice of the fixed torus (kernel of exp on t^kappa).
  double fixed_torus_covolume() const { return covol_fix_; }
  // Covolume of the finer reduction lattice (preimage of the intersection
  // subgroup); smaller by a factor of intersection_order.
  double reduction_lattice_covolume() const { return covol_proj_; }

  // Images of a twist-fixed weight under the commutant Weyl group, paired
  // with the det-on-fixed-space signs; used by character evaluation.
  struct AlternatingTerms {
    std::vector<RVec> images;          // w(shift), exact ambient vectors
    std::vector<int> dets;             // matching signs
  };
  AlternatingTerms expand_shift(const RVec& shift) const;

 private:
  const Twist* tw_;
  TwistSigns signs_;
  double covol_fix_ = 1.0;
  double covol_proj_ = 1.0;
  double moving_block_det_ = 1.0;
  AlternatingTerms rho_terms_;  // shift = half-sum of positive roots
};

// Operation-shaped wrappers; each builds a context on the fly, so prefer a
// MeasureContext when calling repeatedly.
double twisted_det_factor(const Twist& tw, const TorusPoint& a);
cplx weyl_alternating_sum(const Twist& tw, const TorusPoint& a,
                          const RVec& shift);
ClassVolume class_volume(const Twist& tw, const TorusPoint& a);

}  // namespace twistdh
