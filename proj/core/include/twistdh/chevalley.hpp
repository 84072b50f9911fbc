#pragma once

#include <cstddef>
#include <vector>

#include "twistdh/twist.hpp"

namespace twistdh {

// Orbit of a positive root under the diagram automorphism acting on roots.
//
// The automorphism acts on the complexified algebra and maps the root space
// of beta to the root space of kappa(beta) with a sign; going once around the
// orbit multiplies a root vector by the product of those step signs.  That
// cyclic block of (Ad_a . kappa) has eigenvalue product
//     sign * a^{exponent},   exponent = sum of the roots in the orbit,
// which is what the twisted determinant factor consumes.
struct RootOrbit {
  std::vector<std::size_t> members;  // positive-root indices, in cycle order
  RVec exponent;                     // sum of member roots (ambient, exact)
  int sign = 1;                      // product of the step signs around the cycle
};

// Signs describing how the lifted automorphism acts on a Chevalley basis.
//
// The lift fixes the simple root vectors (it is defined on the Serre
// generators by the diagram permutation), so its sign on every other positive
// root vector is forced by the structure constants.  For simply laced systems
// the structure constants are N(q, r) = cocycle(q, r) with the standard
// bimultiplicative two-cocycle on the root lattice determined by
//     cocycle(a_i, a_i) = -1,
//     cocycle(a_i, a_j) = -1  when i < j and <a_i, a_j> = -1,
//     cocycle(a_i, a_j) = +1  otherwise,
// which satisfies cocycle(a,b)*cocycle(b,a) = (-1)^{(a,b)}.
struct TwistSigns {
  // cocycle_simple[i][j] = cocycle(alpha_i, alpha_j), entries +1/-1.
  std::vector<std::vector<int>> cocycle_simple;
  // root_sign[p]: the lift maps e_p to root_sign[p] * e_{kappa(p)}
  // (indices into the positive roots of the twisted group).
  std::vector<int> root_sign;
  std::vector<RootOrbit> orbits;
};

// Cocycle on arbitrary root-lattice vectors given by integer coordinates in
// the simple roots; bimultiplicative extension of cocycle_simple.
int cocycle_eval(const TwistSigns& signs, const std::vector<long>& a,
                 const std::vector<long>& b);

// Computes the lift signs and the positive-root orbit data for a twist.
//
// For the identity twist every positive root is its own orbit with sign +1
// (no cocycle needed, any series).  A nontrivial twist only exists on simply
// laced systems, where the sign of each positive root vector is obtained by
// writing the root as a sum q + r of lower positive roots and propagating
//     sign(q + r) = sign(q) * sign(r) * cocycle(kq, kr) * cocycle(q, r);
// every decomposition must agree (checked), the sign around a full orbit of
// maximal size must be +1 (the lift has the same order as the diagram
// automorphism; checked), and order-3 fixed roots must carry sign +1
// (a real cube root of unity; checked).
TwistSigns build_twist_signs(const Twist& tw);

}  // namespace twistdh
