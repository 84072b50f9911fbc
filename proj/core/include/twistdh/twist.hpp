#pragma once
// Diagram automorphisms acting on a root system, together with all the data
// attached to the fixed torus: the orbit root system and its label, the
// invariant/moving subspaces of the Cartan, the three relevant lattices,
// the commutant subgroup of the Weyl group, and the fundamental alcove of
// the orbit group with a numeric reduction algorithm.
//
// Conventions baked in here:
//   * the base group is the simply connected compact form, so the integral
//     lattice of T is the coroot lattice;
//   * T^kappa is taken connected (true for simply connected groups; the
//     sampled tiling test in the suite is the guard for this assumption);
//   * the orbit group's integral lattice is the projected coroot lattice,
//     with basis the orbit-averages of the simple coroots.

#include "twistdh/root_system.hpp"

#include <array>
#include <string>
#include <vector>

namespace twistdh {

struct OrbitSystem {
  // Reported label.  For D-series flips this is the conventional name of the
  // folded diagram (B_n); the embedded realization below is the dual of the
  // projected system, whose coroot lattice is exactly the integral lattice
  // of the fixed torus -- that is what every computation uses.
  Series series{};
  int rank = 0;
  bool from_nonreduced = false;  // projection was of BC type (even A ranks)
  // Embedded realization inside the fixed subspace (base ambient coordinates).
  std::vector<RVec> simple_roots;
  std::vector<RVec> positive_roots;
  RVec highest_root;
  std::vector<std::vector<long>> positive_simple_coords;  // w.r.t. orbit simple roots
};

struct Twist {
  RootSystem group;              // value copy; Weyl storage is shared
  std::vector<int> simple_perm;  // pi: images of simple-root indices
  int order = 1;                 // |kappa| in {1,2,3}
  std::string name;              // "identity", "flip", "triality", or "perm:..."

  std::vector<std::vector<int>> simple_orbits;  // pi-cycles on simple indices
  std::vector<int> root_perm;  // kappa as a permutation of root indices
  RMat kappa_matrix;           // exact ambient matrix (identity off the root span)

  // Cartan decomposition t = t^kappa (+) t_kappa (orthogonal w.r.t. B).
  std::vector<RVec> tfix_basis;  // basis of t^kappa = orbit sums of simple coroots
  std::vector<RVec> tmov_basis;  // basis of t_kappa
  RMat proj_fix;                 // exact projector p onto t^kappa (ambient)
  RMat proj_mov;                 // complementary projector onto t_kappa

  // Lattices in t^kappa (ambient rational vectors).
  std::vector<RVec> fix_lattice;     // Lambda ^ t^kappa  (orbit sums of simple coroots)
  std::vector<RVec> proj_lattice;    // p(Lambda)          (orbit averages)
  std::vector<RVec> fixweight_lattice;  // (Lambda*)^kappa  (orbit sums of fundamental weights)
  long intersection_order = 1;       // |T^kappa ^ T_kappa| = [p(Lambda) : Lambda^t^kappa]

  // W^kappa = centralizer of kappa in W; elements act through the shared
  // image tables of group.weyl() (see weyl_apply).
  std::vector<std::size_t> wk_indices;   // into group.weyl()
  std::vector<std::int8_t> wk_det_full;  // det on t
  std::vector<std::int8_t> wk_det_fix;   // det on t^kappa

  OrbitSystem orbit;

  // Fundamental alcove of the orbit group in t^kappa: vertices[0] = 0 and one
  // vertex per orbit simple root (exact ambient coordinates).
  std::vector<RVec> alcove_vertices;

  // ---- queries ----------------------------------------------------------
  int fixed_dim() const { return static_cast<int>(tfix_basis.size()); }
  int moving_dim() const { return static_cast<int>(tmov_basis.size()); }
  long extended_weyl_order() const {
    return intersection_order * static_cast<long>(wk_indices.size());
  }
  bool is_identity() const { return order == 1; }

  std::string orbit_label() const {
    return series_name(orbit.series) + std::to_string(orbit.rank);
  }

  // p(v), exact.
  RVec project_fix(const RVec& v) const { return rmat_apply(proj_fix, v); }

  // Point in t^kappa from alcove-vertex coefficients: xi = sum c_i v_i over
  // the nonzero vertices (c_i >= 0, sum <= 1 for interior points).
  std::vector<double> alcove_point(const std::vector<double>& coeffs) const;

  // Reduce an ambient point of t^kappa into the fundamental alcove under the
  // affine action of p(Lambda) semidirect W^kappa.  Throws if the iteration
  // fails to settle (should not happen for finite inputs).
  std::vector<double> reduce_to_alcove(std::vector<double> xi_ambient) const;

  bool in_alcove(const std::vector<double>& xi_ambient, double tol = 1e-9) const;

  // B-pairing of a rational covector with a double point (both ambient).
  double pair_d(const RVec& w, const std::vector<double>& xi) const;
};

// simple_perm[i] = image index of simple root i; must preserve the Cartan matrix.
Twist make_twist(const RootSystem& rs, const std::vector<int>& simple_perm);

Twist identity_twist(const RootSystem& rs);

// The standard order-2 diagram flip: A_n (n>=2), D_n (swap of the two fork
// nodes), E6.  Throws for types without one.
Twist flip_twist(const RootSystem& rs);

// The order-3 rotation of the D4 diagram.
Twist triality_twist(const RootSystem& rs);

// Named lookup used by the CLI: "identity" | "flip" | "triality".
Twist twist_by_name(const RootSystem& rs, const std::string& name);

}  // namespace twistdh
