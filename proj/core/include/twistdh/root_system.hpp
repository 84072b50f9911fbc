#pragma once
// Root systems of the simple series A..G (rank <= 8) in an orthonormal
// rational ambient space, with the invariant form normalized so that the
// highest root theta satisfies B(theta, theta) = 2.  Weyl groups are fully
// enumerated (stored as images of the simple roots, one byte per image);
// the only refusal is W(E8), whose 6.97e8 elements do not fit in memory.

#include "twistdh/linalg.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace twistdh {

enum class Series : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E', F = 'F', G = 'G' };

std::string series_name(Series s);
Series series_from_char(char c);

// Dominant weights are handled in fundamental-weight coordinates.
using WeightCoords = std::vector<long>;

struct WeylGroup {
  int rank = 0;
  std::size_t count = 0;
  // images[i*rank + j] = root index of w_i(alpha_j)
  std::vector<std::uint8_t> images;
  // dets[i] = det of w_i on the Cartan subalgebra, i.e. (-1)^{length}
  std::vector<std::int8_t> dets;

  std::size_t size() const { return count; }
  const std::uint8_t* img(std::size_t i) const { return images.data() + i * static_cast<std::size_t>(rank); }
};

struct RootSystem {
  Series series{};
  int rank = 0;

  std::size_t ambient_dim = 0;
  Rat form_scale;  // B(x,y) = form_scale * (x . y) on the ambient space

  std::vector<RVec> simple_roots;   // ambient coordinates
  std::vector<RVec> simple_coroots;  // 2a/B(a,a)
  std::vector<RVec> roots;          // positive first, then the negatives in the
                                    // same order: roots[i + n_positive] = -roots[i]
  std::size_t n_positive = 0;
  std::vector<std::vector<long>> root_simple_coords;  // integer coords of each root
  std::vector<int> root_heights;                      // sum of simple coords

  RMat cartan;  // cartan[i][j] = <alpha_j, alpha_i^vee> = 2(a_i,a_j)/(a_i,a_i)
  std::vector<RVec> fundamental_weights;
  RVec rho;          // half-sum of positive roots = sum of fundamental weights
  std::size_t highest_root_index = 0;

  // Root-span projection helpers (exact).
  RMat simple_coord_extractor;  // (rank x ambient): coefficients in simple basis
  RMat span_complement_proj;    // ambient projector onto the orthocomplement of the span

  // n x |roots| table: refl_table[i][r] = index of s_i(roots[r])
  std::vector<std::vector<std::uint8_t>> refl_table;

  std::uint64_t weyl_order = 0;  // classical order, always known
  bool weyl_enumerated = false;

  // ---- queries ---------------------------------------------------------
  Rat form(const RVec& x, const RVec& y) const { return form_scale * rvec_dot(x, y); }
  int root_index(const RVec& v) const;  // -1 if not a root
  bool is_root(const RVec& v) const { return root_index(v) >= 0; }
  RVec coroot(std::size_t root_idx) const;

  RVec weight_ambient(const WeightCoords& w) const;
  // B(v, alpha_i^vee) for all i; integral on the weight lattice.
  RVec fundamental_coords(const RVec& v) const;

  const WeylGroup& weyl() const;

  // Dense rational matrix of Weyl element i acting on the ambient space
  // (identity on the orthocomplement of the root span).
  RMat weyl_matrix(std::size_t i) const;

  std::uint64_t positive_count() const { return n_positive; }
  const RVec& highest_root() const { return roots[highest_root_index]; }

 private:
  friend RootSystem build_root_system(Series, int);
  mutable std::shared_ptr<WeylGroup> weyl_;  // built at construction unless refused
};

// Throws std::invalid_argument for unsupported (series, rank) combinations.
RootSystem build_root_system(Series s, int rank);

std::uint64_t classical_weyl_order(Series s, int rank);

// Exact action of Weyl element `index` on an ambient vector, computed from
// the stored simple-root images (no per-element matrix is materialized).
// The component of v orthogonal to the root span is left untouched.
RVec weyl_apply(const RootSystem& rs, std::size_t index, const RVec& v);

// Weyl dimension formula; exact, returned as a rational that is asserted integral.
Rat weyl_dimension(const RootSystem& rs, const WeightCoords& lambda);

// <lambda, theta^vee>: the level used for series cutoffs.
long weight_level(const RootSystem& rs, const WeightCoords& lambda);

// Covolume of the lattice spanned by `basis` (ambient rational vectors)
// within its own span, with respect to the invariant form.
double lattice_covolume(const RootSystem& rs, const std::vector<RVec>& basis);

}  // namespace twistdh
