#pragma once

#include <map>
#include <vector>

#include "twistdh/measures.hpp"

namespace twistdh {

// Character evaluation for a fixed twist.  Twisted ("twining") characters of
// twist-fixed dominant weights are computed on the fixed torus by the
// quotient of alternating sums over the commutant Weyl group; ordinary
// characters use the full Weyl group.  Near points where the denominator
// vanishes the value is recovered by Richardson extrapolation along a
// regular direction, and at the identity by the exact dimension formula of
// the orbit system.  The referenced Twist must outlive the context.
class CharacterContext {
 public:
  explicit CharacterContext(const Twist& tw);

  const Twist& twist() const { return *tw_; }
  const MeasureContext& measures() const { return mctx_; }

  // whether the twist permutes the weight's fundamental coordinates into
  // themselves (the twining character is defined exactly for these weights)
  bool is_fixed_weight(const WeightCoords& lambda) const;

  // ordinary irreducible character at exp(xi), xi ambient
  cplx weyl_character(const WeightCoords& lambda, const TorusPoint& xi) const;

  // twining character at exp(xi), xi in the fixed subspace; throws
  // std::invalid_argument when lambda is not fixed by the twist
  cplx twining_character(const WeightCoords& lambda,
                         const TorusPoint& xi) const;

  // value of the twining character at the identity: the Weyl dimension of
  // the orbit-system representation attached to the restricted weight
  Rat orbit_dimension(const WeightCoords& lambda) const;

  // Casimir-normalized heat exponent |lambda + rho|^2 - |rho|^2
  Rat heat_eigenvalue(const WeightCoords& lambda) const;

  // L^2 pairing of two twining characters against the twisted-conjugation
  // push-forward measure, evaluated on the half-offset uniform grid with
  // grid_n points per lattice direction.  The grid sum collapses exactly to
  // integer frequency matching, so no floating-point quadrature is done.
  double inner_product(const WeightCoords& lambda, const WeightCoords& mu,
                       long grid_n) const;

  // the same quantity evaluated literally on the grid (reference path;
  // cost grows like grid_n^d)
  double inner_product_dense(const WeightCoords& lambda,
                             const WeightCoords& mu, long grid_n) const;

 private:
  struct FullTerms {
    std::vector<RVec> images;
    std::vector<int> dets;
  };

  const MeasureContext::AlternatingTerms& twined_terms(
      const WeightCoords& lambda) const;
  const FullTerms& full_terms(const WeightCoords& lambda) const;
  cplx twined_ratio(const WeightCoords& lambda, const TorusPoint& xi,
                    bool* regular) const;

  const Twist* tw_;
  MeasureContext mctx_;
  std::vector<double> reg_dir_fix_;   // regular direction inside t^kappa
  std::vector<double> reg_dir_full_;  // regular direction for the full system
  mutable std::map<WeightCoords, MeasureContext::AlternatingTerms>
      twined_cache_;
  mutable std::map<WeightCoords, FullTerms> full_cache_;
};

// All dominant weights fixed by the twist with level (pairing against the
// highest coroot) at most max_level, in lexicographic order.
std::vector<WeightCoords> fixed_dominant_weights(const Twist& tw,
                                                 long max_level);

}  // namespace twistdh
