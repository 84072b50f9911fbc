#pragma once
// Duistermaat-Heckman data for moduli of flat connections on decorated
// bordered surfaces.  A surface with h handles and b boundary classes over a
// compact simple group carries a group-valued moment map whose pushforward
// measure has an explicit Fourier expansion in twining characters; this
// module assembles those Fourier coefficients exactly (rational part times a
// numeric part times a power of the symbolic group volume), reconstructs the
// heat-regularized density on the twisted alcove, and converts densities to
// reduced-space volumes.

#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "twistdh/characters.hpp"

namespace twistdh {

// One handle contributes the twisted commutator of its two holonomies; the
// pair (tau, kappa) records the automorphisms twisting them.
struct HandleTwists {
  const Twist* tau = nullptr;
  const Twist* kappa = nullptr;
};

// One boundary carries a fixed twisted conjugacy class: the twist acting on
// that boundary and the ambient coordinates (in the twist's fixed subspace)
// of the class representative.
struct BoundaryClass {
  const Twist* twist = nullptr;
  TorusPoint xi;
};

// A decorated bordered surface over a common group.  All twists must be
// diagram automorphisms of the same root system, and — like the root system
// itself — must outlive the assembly and any context built on it.
struct SurfaceAssembly {
  const RootSystem* group = nullptr;
  std::vector<HandleTwists> handles;
  std::vector<BoundaryClass> boundaries;
};

// One Fourier coefficient of the Duistermaat-Heckman measure, kept as
//   rational * numeric * volG^volg_power.
// The rational part collects the inverse-dimension factors exactly; the
// numeric part collects the floating-point entries (class-volume
// coefficients and character values, which may be complex for boundary
// classes whose character is not real).  A weight that is not fixed by every
// decorating twist yields the structured "vanishes" result rather than a
// numeric zero; a measure-zero boundary class sets the degenerate flag and
// zeroes the numeric part.
struct DHCoefficient {
  Rat rational = 0;
  cplx numeric = 0.0;
  int volg_power = 0;
  bool vanishes = true;
  bool degenerate = false;

  // rational and numeric parts multiplied out
  cplx coefficient() const { return to_double(rational) * numeric; }
  // real part as a symbolic-volume value (imaginary parts cancel across
  // conjugate weight pairs in any full table)
  VolumeExpr value() const { return {std::real(coefficient()), volg_power}; }
};

// Coefficient of the fusion of two moment maps: c1*c2 / dim, volume powers
// adding.  dim must be the dimension of the common irreducible.
DHCoefficient fuse_coefficients(const DHCoefficient& c1,
                                const DHCoefficient& c2, const Rat& dim);
VolumeExpr fuse_coefficients(const VolumeExpr& c1, const VolumeExpr& c2,
                             long dim);

// A density or volume value together with an estimate of everything that was
// dropped: series truncation, imaginary residue, and (when extrapolating in
// heat time) the extrapolation defect.
struct DensityValue {
  VolumeExpr value;
  double residual = 0.0;
};

// Evaluation context for one surface assembly.  Owns the composed target
// twist (the product of all handle commutators and boundary twists, in
// listed order) and per-twist character/measure caches.  The assembly, its
// group, and its twists must outlive the context.
class ModuliContext {
 public:
  explicit ModuliContext(const SurfaceAssembly& spec);
  ModuliContext(const ModuliContext&) = delete;
  ModuliContext& operator=(const ModuliContext&) = delete;

  const SurfaceAssembly& assembly() const { return *spec_; }
  const Twist& target_twist() const { return target_; }
  const CharacterContext& target_characters() const { return *target_chars_; }
  const MeasureContext& target_measures() const {
    return target_chars_->measures();
  }
  // volG power carried by every coefficient of this assembly: 2h + b
  int coefficient_power() const;

  // whether the weight is fixed by every decorating twist
  bool admissible(const WeightCoords& lambda) const;
  // all admissible dominant weights of level at most max_level
  std::vector<WeightCoords> admissible_weights(long max_level) const;

  // Fourier coefficient of the DH measure against the twining character of
  // lambda: volG^{2h} / dim^{2h+b-1} * prod_j Vol(C_j) chi~_lambda(a_j),
  // assembled as the iterated fusion of the per-handle and per-boundary
  // coefficients.
  DHCoefficient dh_coefficient(const WeightCoords& lambda) const;

  // dh_coefficient divided by the total mass volG^{2h} * prod_j Vol(C_j):
  // the Fourier coefficient of the DH probability measure (what Monte Carlo
  // sampling of the moment-map word estimates).  Zero for inadmissible
  // weights and for assemblies with a degenerate boundary.
  cplx probability_coefficient(const WeightCoords& lambda) const;

  // Heat-regularized density of the DH measure with respect to the
  // Riemannian measure of the group at exp(xi), xi in the fixed subspace of
  // the target twist:
  //   (1/volG) sum_lambda e^{-heat_t p(lambda)} coeff(lambda)
  //            conj(chi~_lambda(xi)),
  // truncated at the level cutoff.  The residual bounds the dropped tail
  // (plus any numerically uncancelled imaginary part).
  DensityValue dh_density(const TorusPoint& xi, double heat_t,
                          long level_cutoff) const;
  // Richardson extrapolation of the density along heat times t, t/2, t/4;
  // the residual adds the extrapolation defect to the finest truncation
  // residual.
  DensityValue dh_density_extrapolated(const TorusPoint& xi, double heat_t,
                                       long level_cutoff) const;

  // smallest level cutoff whose dropped heat factor e^{-t p} is below eps
  long default_level_cutoff(double heat_t, double eps = 1e-8) const;

 private:
  const CharacterContext& boundary_context(const Twist& tw);
  double tail_bound(double heat_t, long level_cutoff) const;

  const SurfaceAssembly* spec_;
  Twist target_;
  std::unique_ptr<CharacterContext> target_chars_;
  std::map<std::vector<int>, std::unique_ptr<CharacterContext>> pool_;
  std::vector<const CharacterContext*> boundary_chars_;
  std::vector<TorusPoint> boundary_points_;  // alcove-reduced
  std::vector<ClassVolume> boundary_volumes_;
  std::vector<std::vector<int>> decorating_perms_;  // deduplicated
  std::vector<std::vector<int>> joint_orbits_;      // of simple nodes
};

struct ReducedVolume {
  VolumeExpr value;
  double residual = 0.0;
};

// Volume of the reduced space at the target-twist class through exp(xi):
//   gamma_order * (Vol(C) / volG) * density(xi),
// where gamma_order is the caller-supplied order of the principal
// stabilizer.  Throws std::invalid_argument at degenerate classes, where the
// underlying density-to-volume correspondence (which assumes the fiber meets
// the principal stratum) does not apply.
ReducedVolume reduced_volume(const ModuliContext& ctx, const TorusPoint& xi,
                             long gamma_order, double heat_t,
                             long level_cutoff, bool extrapolate = false);

}  // namespace twistdh
