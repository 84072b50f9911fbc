#include "twistdh/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace twistdh {

RVec rvec_zero(std::size_t n) { return RVec(n, Rat(0)); }

RVec rvec_add(const RVec& a, const RVec& b) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RVec rvec_sub(const RVec& a, const RVec& b) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RVec rvec_scale(const Rat& c, const RVec& a) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

Rat rvec_dot(const RVec& a, const RVec& b) {
  Rat s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool rvec_is_zero(const RVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

bool rvec_eq(const RVec& a, const RVec& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::vector<double> rvec_to_doubles(const RVec& a) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = to_double(a[i]);
  return r;
}

RMat rmat_zero(std::size_t r, std::size_t c) { return RMat(r, rvec_zero(c)); }

RMat rmat_identity(std::size_t n) {
  RMat m = rmat_zero(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RMat rmat_mul(const RMat& a, const RMat& b) {
  std::size_t r = a.size(), k = b.size(), c = b[0].size();
  RMat m = rmat_zero(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < c; ++j) m[i][j] += a[i][l] * b[l][j];
    }
  return m;
}

RVec rmat_apply(const RMat& a, const RVec& v) {
  RVec r(a.size(), Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = rvec_dot(a[i], v);
  return r;
}

RMat rmat_transpose(const RMat& a) {
  RMat m = rmat_zero(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) m[j][i] = a[i][j];
  return m;
}

RMat rmat_add(const RMat& a, const RMat& b) {
  RMat m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = rvec_add(a[i], b[i]);
  return m;
}

RMat rmat_scale(const Rat& c, const RMat& a) {
  RMat m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = rvec_scale(c, a[i]);
  return m;
}

namespace {

// Returns (reduced matrix, pivot columns, det-sign-and-product for square).
struct Elim {
  RMat m;
  std::vector<std::size_t> pivot_cols;
  Rat det;  // valid only for square input
};

Elim eliminate(RMat m) {
  Elim e;
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  Rat det(1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t piv = row;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != row) {
      std::swap(m[piv], m[row]);
      det = -det;
    }
    det *= m[row][col];
    Rat inv = 1 / m[row][col];
    for (std::size_t j = col; j < cols; ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || m[i][col] == 0) continue;
      Rat f = m[i][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
    }
    e.pivot_cols.push_back(col);
    ++row;
  }
  if (row < rows) det = 0;
  e.m = std::move(m);
  e.det = det;
  return e;
}

}  // namespace

Rat rmat_det(const RMat& a) {
  if (a.empty()) return Rat(1);
  if (a.size() != a[0].size()) throw std::runtime_error("rmat_det: not square");
  return eliminate(a).det;
}

RVec rmat_solve(const RMat& a, const RVec& b) {
  std::size_t n = a.size();
  if (n == 0) return {};
  if (a[0].size() != n || b.size() != n)
    throw std::runtime_error("rmat_solve: shape mismatch");
  RMat aug = a;
  for (std::size_t i = 0; i < n; ++i) aug[i].push_back(b[i]);
  Elim e = eliminate(std::move(aug));
  if (e.pivot_cols.size() != n || e.pivot_cols.back() >= n)
    throw std::runtime_error("rmat_solve: singular matrix");
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = e.m[i][n];
  return x;
}

RMat rmat_inverse(const RMat& a) {
  std::size_t n = a.size();
  RMat aug = a;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? Rat(1) : Rat(0));
  }
  Elim e = eliminate(std::move(aug));
  if (e.pivot_cols.size() != n || (n && e.pivot_cols.back() >= n))
    throw std::runtime_error("rmat_inverse: singular matrix");
  RMat inv = rmat_zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.m[i][n + j];
  return inv;
}

std::vector<RVec> rmat_kernel(const RMat& a) {
  std::size_t cols = a.empty() ? 0 : a[0].size();
  Elim e = eliminate(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<RVec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RVec v = rvec_zero(cols);
    v[free] = 1;
    // back-substitute pivots
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
      v[e.pivot_cols[r]] = -e.m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<RVec> independent_subset(const std::vector<RVec>& vecs) {
  std::vector<RVec> out;
  std::vector<RVec> rows;  // running row-echelon rows
  for (const auto& v : vecs) {
    RVec w = v;
    for (const auto& r : rows) {
      // find r's leading index
      std::size_t lead = 0;
      while (lead < r.size() && r[lead] == 0) ++lead;
      if (lead < r.size() && w[lead] != 0) {
        Rat f = w[lead] / r[lead];
        for (std::size_t j = 0; j < w.size(); ++j) w[j] -= f * r[j];
      }
    }
    if (!rvec_is_zero(w)) {
      rows.push_back(w);
      out.push_back(v);
      // keep rows sorted by leading index for the simple reduction above
      std::sort(rows.begin(), rows.end(), [](const RVec& a, const RVec& b) {
        std::size_t la = 0, lb = 0;
        while (la < a.size() && a[la] == 0) ++la;
        while (lb < b.size() && b[lb] == 0) ++lb;
        return la < lb;
      });
    }
  }
  return out;
}

std::size_t rank_of(const std::vector<RVec>& vecs) {
  return independent_subset(vecs).size();
}

RVec coords_in_basis(const std::vector<RVec>& basis, const RVec& v) {
  // Solve sum_j c_j basis_j = v via normal equations with exact arithmetic:
  // G c = d, G_jk = <b_j, b_k>, d_j = <b_j, v>; then verify the residual.
  std::size_t k = basis.size();
  RMat g = rmat_zero(k, k);
  RVec d(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) g[i][j] = rvec_dot(basis[i], basis[j]);
    d[i] = rvec_dot(basis[i], v);
  }
  RVec c = rmat_solve(g, d);
  RVec rec = rvec_zero(v.size());
  for (std::size_t j = 0; j < k; ++j) rec = rvec_add(rec, rvec_scale(c[j], basis[j]));
  if (!rvec_eq(rec, v))
    throw std::runtime_error("coords_in_basis: vector not in span");
  return c;
}

RMat gram_matrix(const std::vector<RVec>& basis, const Rat& scale) {
  RMat g = rmat_zero(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      g[i][j] = scale * rvec_dot(basis[i], basis[j]);
  return g;
}

double covolume_from_gram(const RMat& gram) {
  Rat d = rmat_det(gram);
  if (d <= 0) throw std::runtime_error("covolume_from_gram: Gram not positive");
  return std::sqrt(to_double(d));
}

}  // namespace twistdh
