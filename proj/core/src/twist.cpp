#include "twistdh/twist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace twistdh {
namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("twist construction invariant failed: " + what);
}

std::string vec_key(const RVec& v) {
  std::string k;
  for (const auto& q : v) {
    k += q.get_str();
    k += ',';
  }
  return k;
}

// Exact coordinate solver for a fixed independent basis: coords(v) = P v,
// valid for v in the span of the basis (callers re-check the residual when
// membership is not guaranteed a priori).
RMat make_coord_solver(const std::vector<RVec>& basis) {
  const std::size_t d = basis.size();
  const std::size_t m = basis.empty() ? 0 : basis[0].size();
  RMat g = rmat_zero(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g[i][j] = rvec_dot(basis[i], basis[j]);
  RMat ginv = rmat_inverse(g);
  RMat p = rmat_zero(d, m);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t a = 0; a < m; ++a) {
      Rat acc(0);
      for (std::size_t k = 0; k < d; ++k) acc += ginv[i][k] * basis[k][a];
      p[i][a] = acc;
    }
  return p;
}

RVec coords_exact(const RMat& solver, const std::vector<RVec>& basis, const RVec& v) {
  RVec c = rmat_apply(solver, v);
  RVec rec = rvec_zero(v.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    rec = rvec_add(rec, rvec_scale(c[k], basis[k]));
  check(rvec_eq(rec, v), "vector lies in the claimed subspace");
  return c;
}

struct Label {
  Series series;
  int rank;
};

// Abstract type of an irreducible positive system from rank, root count and
// the two-length statistics.  Exact arithmetic throughout.
Label classify_positive_system(const std::vector<RVec>& positives, int rank,
                               bool from_nonreduced) {
  std::map<Rat, long> by_norm;
  for (const auto& b : positives) by_norm[rvec_dot(b, b)] += 1;
  check(!by_norm.empty() && by_norm.size() <= 2, "at most two root lengths");
  const long count = 2 * static_cast<long>(positives.size());
  const long r = rank;
  if (by_norm.size() == 1) {
    if (count == r * (r + 1)) return {Series::A, rank};
    if (count == 2 * r * (r - 1)) return {Series::D, rank};
    if ((r == 6 && count == 72) || (r == 7 && count == 126) || (r == 8 && count == 240))
      return {Series::E, rank};
    check(false, "simply laced type recognized");
  }
  Rat short2 = by_norm.begin()->first;
  Rat long2 = by_norm.rbegin()->first;
  long n_short = by_norm.begin()->second;
  long n_long = by_norm.rbegin()->second;
  Rat ratio = long2 / short2;
  if (ratio == 3) {
    check(r == 2 && count == 12, "G2 shape");
    return {Series::G, 2};
  }
  check(ratio == 2, "two-length ratio is 2 or 3");
  if (r == 4 && count == 48) return {Series::F, 4};
  check(count == 2 * r * r, "B/C root count");
  if (n_long == n_short) {
    // rank 2: B2 and C2 differ only by which length is called long; the
    // reduced part of a nonreduced projection is conventionally C.
    return {from_nonreduced ? Series::C : Series::B, 2};
  }
  return {n_long > n_short ? Series::B : Series::C, rank};
}

// Check that `got` equals the Cartan matrix of (s, rank) up to a simultaneous
// permutation of the nodes.
void assert_cartan_matches(const RMat& got, Series s, int rank, const std::string& ctx) {
  RootSystem cand = build_root_system(s, rank);
  std::vector<int> sigma(rank);
  std::iota(sigma.begin(), sigma.end(), 0);
  bool found = false;
  do {
    bool ok = true;
    for (int i = 0; i < rank && ok; ++i)
      for (int j = 0; j < rank && ok; ++j)
        ok = (cand.cartan[sigma[i]][sigma[j]] == got[i][j]);
    if (ok) {
      found = true;
      break;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  check(found, "orbit Cartan matrix matches its label (" + ctx + ")");
}

}  // namespace

std::vector<double> Twist::alcove_point(const std::vector<double>& coeffs) const {
  if (coeffs.size() != static_cast<std::size_t>(fixed_dim()))
    throw std::invalid_argument("alcove_point: expected one coefficient per nonzero vertex");
  std::vector<double> xi(group.ambient_dim, 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::vector<double> v = rvec_to_doubles(alcove_vertices[i + 1]);
    for (std::size_t a = 0; a < xi.size(); ++a) xi[a] += coeffs[i] * v[a];
  }
  return xi;
}

double Twist::pair_d(const RVec& w, const std::vector<double>& xi) const {
  double acc = 0.0;
  for (std::size_t a = 0; a < xi.size(); ++a) acc += to_double(w[a]) * xi[a];
  return to_double(group.form_scale) * acc;
}

bool Twist::in_alcove(const std::vector<double>& xi, double tol) const {
  for (const auto& b : orbit.simple_roots)
    if (pair_d(b, xi) < -tol) return false;
  return pair_d(orbit.highest_root, xi) <= 1.0 + tol;
}

std::vector<double> Twist::reduce_to_alcove(std::vector<double> xi) const {
  const double tol = 1e-12;
  const int d = fixed_dim();
  // Reflection data: beta and 2 beta / B(beta,beta) as doubles.
  auto refl_dir = [&](const RVec& beta) {
    Rat n2 = group.form(beta, beta);
    std::vector<double> dir = rvec_to_doubles(beta);
    double scale = 2.0 / to_double(n2);
    for (auto& x : dir) x *= scale;
    return dir;
  };
  std::vector<std::vector<double>> simple_d, simple_refl;
  for (const auto& b : orbit.simple_roots) {
    simple_d.push_back(rvec_to_doubles(b));
    simple_refl.push_back(refl_dir(b));
  }
  std::vector<double> theta_d = rvec_to_doubles(orbit.highest_root);
  std::vector<double> theta_refl = refl_dir(orbit.highest_root);
  double fs = to_double(group.form_scale);
  auto pair = [&](const std::vector<double>& w, const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) acc += w[a] * x[a];
    return fs * acc;
  };
  for (long iter = 0; iter < 200000; ++iter) {
    int worst = -1;
    double worst_val = -tol;
    for (int i = 0; i < d; ++i) {
      double v = pair(simple_d[i], xi);
      if (v < worst_val) {
        worst_val = v;
        worst = i;
      }
    }
    if (worst >= 0) {
      for (std::size_t a = 0; a < xi.size(); ++a) xi[a] -= worst_val * simple_refl[worst][a];
      continue;
    }
    double h = pair(theta_d, xi);
    if (h > 1.0 + tol) {
      for (std::size_t a = 0; a < xi.size(); ++a) xi[a] -= (h - 1.0) * theta_refl[a];
      continue;
    }
    return xi;
  }
  throw std::runtime_error("reduce_to_alcove: affine reduction did not settle");
}

Twist make_twist(const RootSystem& rs, const std::vector<int>& simple_perm) {
  const int n = rs.rank;
  const std::size_t m = rs.ambient_dim;
  if (simple_perm.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("twist permutation size != rank");
  {
    std::vector<bool> hit(n, false);
    for (int v : simple_perm) {
      if (v < 0 || v >= n || hit[v])
        throw std::invalid_argument("twist permutation is not a bijection");
      hit[v] = true;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rs.cartan[simple_perm[i]][simple_perm[j]] != rs.cartan[i][j])
        throw std::invalid_argument("permutation does not preserve the Cartan matrix");

  Twist tw;
  tw.group = rs;
  tw.simple_perm = simple_perm;

  // ---- order and orbits on simple nodes ----------------------------------
  {
    std::vector<int> q(n);
    std::iota(q.begin(), q.end(), 0);
    int ord = 0;
    for (int k = 1; k <= 3; ++k) {
      for (int i = 0; i < n; ++i) q[i] = simple_perm[q[i]];
      bool ident = true;
      for (int i = 0; i < n; ++i) ident = ident && q[i] == i;
      if (ident) {
        ord = k;
        break;
      }
    }
    if (ord == 0)
      throw std::invalid_argument("diagram automorphism order must be 1, 2 or 3");
    tw.order = ord;
  }
  tw.name = tw.order == 1 ? "identity" : [&] {
    std::ostringstream os;
    os << "perm:";
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << simple_perm[i];
    return os.str();
  }();
  {
    std::vector<bool> seen(n, false);
    for (int i = 0; i < n; ++i) {
      if (seen[i]) continue;
      std::vector<int> orb;
      int j = i;
      while (!seen[j]) {
        seen[j] = true;
        orb.push_back(j);
        j = simple_perm[j];
      }
      tw.simple_orbits.push_back(orb);
    }
  }

  // ---- ambient matrix and action on roots --------------------------------
  tw.kappa_matrix = rs.span_complement_proj;
  for (int j = 0; j < n; ++j) {
    const RVec& target = rs.simple_roots[simple_perm[j]];
    for (std::size_t r = 0; r < m; ++r) {
      if (target[r] == 0) continue;
      for (std::size_t c = 0; c < m; ++c)
        tw.kappa_matrix[r][c] += target[r] * rs.simple_coord_extractor[j][c];
    }
  }
  for (int j = 0; j < n; ++j)
    check(rvec_eq(rmat_apply(tw.kappa_matrix, rs.simple_roots[j]),
                  rs.simple_roots[simple_perm[j]]),
          "kappa maps simple roots as prescribed");
  {
    RMat pow = tw.kappa_matrix;
    for (int k = 1; k < tw.order; ++k) pow = rmat_mul(tw.kappa_matrix, pow);
    check(pow == rmat_identity(m), "kappa^order = 1");
  }
  {
    std::map<std::string, int> root_at;
    for (std::size_t r = 0; r < rs.roots.size(); ++r) root_at[vec_key(rs.roots[r])] = static_cast<int>(r);
    tw.root_perm.resize(rs.roots.size());
    for (std::size_t r = 0; r < rs.roots.size(); ++r) {
      RVec img = rvec_zero(m);
      for (int j = 0; j < n; ++j) {
        long cj = rs.root_simple_coords[r][j];
        if (cj != 0)
          img = rvec_add(img, rvec_scale(Rat(cj), rs.simple_roots[simple_perm[j]]));
      }
      auto it = root_at.find(vec_key(img));
      check(it != root_at.end(), "kappa permutes the roots");
      tw.root_perm[r] = it->second;
      check((r < rs.n_positive) == (static_cast<std::size_t>(it->second) < rs.n_positive),
            "kappa preserves positivity");
    }
  }

  // ---- fixed / moving decomposition ---------------------------------------
  {
    RMat acc = rmat_identity(m);
    RMat pw = rmat_identity(m);
    for (int k = 1; k < tw.order; ++k) {
      pw = rmat_mul(tw.kappa_matrix, pw);
      acc = rmat_add(acc, pw);
    }
    tw.proj_fix = rmat_scale(Rat(1, tw.order), acc);
    check(rmat_mul(tw.proj_fix, tw.proj_fix) == tw.proj_fix, "p is a projector");
    check(rmat_mul(tw.kappa_matrix, tw.proj_fix) == tw.proj_fix, "kappa p = p");
    RMat ident = rmat_identity(m);
    tw.proj_mov = rmat_zero(m, m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) tw.proj_mov[r][c] = ident[r][c] - tw.proj_fix[r][c];
  }
  for (const auto& orb : tw.simple_orbits) {
    RVec sum_cr = rvec_zero(m);
    RVec sum_fw = rvec_zero(m);
    for (int i : orb) {
      sum_cr = rvec_add(sum_cr, rs.simple_coroots[i]);
      sum_fw = rvec_add(sum_fw, rs.fundamental_weights[i]);
    }
    tw.tfix_basis.push_back(sum_cr);
    tw.fix_lattice.push_back(sum_cr);
    tw.proj_lattice.push_back(rvec_scale(Rat(1, static_cast<long>(orb.size())), sum_cr));
    tw.fixweight_lattice.push_back(sum_fw);
  }
  {
    std::vector<RVec> mov_gen;
    for (int i = 0; i < n; ++i) {
      RVec d = rvec_sub(rs.simple_coroots[i], rmat_apply(tw.proj_fix, rs.simple_coroots[i]));
      if (!rvec_is_zero(d)) mov_gen.push_back(d);
    }
    tw.tmov_basis = independent_subset(mov_gen);
  }
  check(tw.fixed_dim() + tw.moving_dim() == n, "dim t^kappa + dim t_kappa = rank");
  for (const auto& b : tw.tfix_basis)
    check(rvec_eq(rmat_apply(tw.proj_fix, b), b), "t^kappa basis is p-fixed");

  // ---- |T^kappa ^ T_kappa| -------------------------------------------------
  tw.intersection_order = 1;
  for (const auto& orb : tw.simple_orbits)
    tw.intersection_order *= static_cast<long>(orb.size());
  if (tw.order > 1) {
    // Cross-check: the index equals |det(kappa - 1)| on the moving subspace.
    const std::size_t dm = tw.tmov_basis.size();
    RMat solver = make_coord_solver(tw.tmov_basis);
    RMat k1 = rmat_zero(dm, dm);
    for (std::size_t j = 0; j < dm; ++j) {
      RVec img = rvec_sub(rmat_apply(tw.kappa_matrix, tw.tmov_basis[j]), tw.tmov_basis[j]);
      RVec c = coords_exact(solver, tw.tmov_basis, img);
      for (std::size_t i = 0; i < dm; ++i) k1[i][j] = c[i];
    }
    Rat det = rmat_det(k1);
    if (det < 0) det = -det;
    check(det == tw.intersection_order, "|T^k ^ T_k| = |det(kappa-1)| on t_kappa");
    if (tw.order == 2)
      check(tw.intersection_order == (1L << tw.moving_dim()), "order-2 intersection is (Z_2)^dim");
    else
      check(tw.intersection_order == 3, "order-3 intersection is Z_3");
  }

  // ---- W^kappa --------------------------------------------------------------
  {
    const WeylGroup& wg = rs.weyl();
    for (std::size_t w = 0; w < wg.size(); ++w) {
      const std::uint8_t* img = wg.img(w);
      bool commutes = true;
      for (int j = 0; j < n && commutes; ++j)
        commutes = tw.root_perm[img[j]] == img[simple_perm[j]];
      if (commutes) {
        tw.wk_indices.push_back(w);
        tw.wk_det_full.push_back(wg.dets[w]);
      }
    }
    const std::size_t d = tw.tfix_basis.size();
    RMat solver = make_coord_solver(tw.tfix_basis);
    tw.wk_det_fix.reserve(tw.wk_indices.size());
    for (std::size_t w : tw.wk_indices) {
      RMat rest = rmat_zero(d, d);
      for (std::size_t j = 0; j < d; ++j) {
        RVec img = weyl_apply(rs, w, tw.tfix_basis[j]);
        RVec c = coords_exact(solver, tw.tfix_basis, img);
        for (std::size_t i = 0; i < d; ++i) rest[i][j] = c[i];
      }
      Rat det = rmat_det(rest);
      check(det == 1 || det == -1, "restricted Weyl determinant is a sign");
      tw.wk_det_fix.push_back(static_cast<std::int8_t>(det == 1 ? 1 : -1));
    }
  }

  // ---- orbit root system -----------------------------------------------------
  OrbitSystem& ob = tw.orbit;
  if (tw.order == 1) {
    ob.series = rs.series;
    ob.rank = n;
    ob.from_nonreduced = false;
    ob.simple_roots = rs.simple_roots;
    ob.positive_roots.assign(rs.roots.begin(), rs.roots.begin() + rs.n_positive);
    ob.highest_root = rs.highest_root();
    ob.positive_simple_coords.assign(rs.root_simple_coords.begin(),
                                     rs.root_simple_coords.begin() + rs.n_positive);
  } else {
    std::map<std::string, RVec> projected;
    for (std::size_t r = 0; r < rs.n_positive; ++r) {
      RVec pr = rmat_apply(tw.proj_fix, rs.roots[r]);
      projected.emplace(vec_key(pr), pr);
    }
    std::vector<RVec> kept;
    for (const auto& entry : projected) {
      const RVec& beta = entry.second;
      RVec half = rvec_scale(Rat(1, 2), beta);
      if (!projected.count(vec_key(half))) kept.push_back(beta);
    }
    ob.from_nonreduced = kept.size() != projected.size();
    for (const auto& beta : kept) {
      Rat n2 = rs.form(beta, beta);
      ob.positive_roots.push_back(rvec_scale(Rat(2) / n2, beta));
    }
    // Simple = not a sum of two positives.
    std::set<std::string> pos_keys;
    for (const auto& b : ob.positive_roots) pos_keys.insert(vec_key(b));
    for (const auto& b : ob.positive_roots) {
      bool decomposable = false;
      for (const auto& c : ob.positive_roots) {
        RVec diff = rvec_sub(b, c);
        if (rvec_is_zero(diff)) continue;
        if (pos_keys.count(vec_key(diff))) {
          decomposable = true;
          break;
        }
      }
      if (!decomposable) ob.simple_roots.push_back(b);
    }
    std::sort(ob.simple_roots.begin(), ob.simple_roots.end(),
              [](const RVec& a, const RVec& b) {
                for (std::size_t i = 0; i < a.size(); ++i) {
                  if (a[i] != b[i]) return a[i] < b[i];
                }
                return false;
              });
    ob.rank = static_cast<int>(ob.simple_roots.size());
    check(ob.rank == tw.fixed_dim(), "orbit rank equals dim t^kappa");

    Label honest = classify_positive_system(ob.positive_roots, ob.rank, ob.from_nonreduced);
    {
      RMat oc = rmat_zero(ob.rank, ob.rank);
      for (int i = 0; i < ob.rank; ++i)
        for (int j = 0; j < ob.rank; ++j)
          oc[i][j] = 2 * rvec_dot(ob.simple_roots[i], ob.simple_roots[j]) /
                     rvec_dot(ob.simple_roots[i], ob.simple_roots[i]);
      assert_cartan_matches(oc, honest.series, honest.rank, "classified type");
    }
    ob.series = honest.series;
    ob.rank = honest.rank;
    // Reported label: the folded D-series diagram is conventionally named by
    // its B-form even though the embedded dual realization is C-shaped.
    if (rs.series == Series::D && ob.series == Series::C) ob.series = Series::B;

    check(classical_weyl_order(honest.series, honest.rank) == tw.wk_indices.size(),
          "orbit Weyl order equals |W^kappa|");

    // Heights w.r.t. the orbit simple roots; the unique maximum is theta.
    RMat solver = make_coord_solver(ob.simple_roots);
    long best_h = -1;
    std::size_t best_i = 0;
    bool unique = true;
    for (std::size_t r = 0; r < ob.positive_roots.size(); ++r) {
      RVec c = coords_exact(solver, ob.simple_roots, ob.positive_roots[r]);
      std::vector<long> ic(ob.rank);
      long h = 0;
      for (int i = 0; i < ob.rank; ++i) {
        check(c[i].get_den() == 1 && c[i] >= 0, "orbit positives have nonneg integer coords");
        ic[i] = to_long(c[i]);
        h += ic[i];
      }
      ob.positive_simple_coords.push_back(ic);
      if (h > best_h) {
        best_h = h;
        best_i = r;
        unique = true;
      } else if (h == best_h) {
        unique = false;
      }
    }
    check(unique, "unique orbit highest root");
    ob.highest_root = ob.positive_roots[best_i];
  }

  // ---- lattice identities ----------------------------------------------------
  {
    // Coroot lattice of the orbit system == p(Lambda), via a unimodular
    // integral change of basis between the orbit simple coroots and the
    // orbit-average generators.
    std::vector<RVec> orbit_cr;
    for (const auto& b : ob.simple_roots)
      orbit_cr.push_back(rvec_scale(Rat(2) / rs.form(b, b), b));
    RMat solver = make_coord_solver(tw.proj_lattice);
    RMat change = rmat_zero(orbit_cr.size(), orbit_cr.size());
    for (std::size_t j = 0; j < orbit_cr.size(); ++j) {
      RVec c = coords_exact(solver, tw.proj_lattice, orbit_cr[j]);
      for (std::size_t i = 0; i < c.size(); ++i) {
        check(c[i].get_den() == 1, "orbit coroots lie in the projected lattice");
        change[i][j] = c[i];
      }
    }
    Rat det = rmat_det(change);
    check(det == 1 || det == -1, "orbit coroot lattice equals the projected lattice");
  }
  {
    // Weight lattice of the orbit system == kappa-fixed weights of the base.
    const std::size_t d = tw.tfix_basis.size();
    std::vector<RVec> orbit_cr;
    for (const auto& b : ob.simple_roots)
      orbit_cr.push_back(rvec_scale(Rat(2) / rs.form(b, b), b));
    std::vector<RVec> orbit_fw;
    RMat sys = rmat_zero(d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        sys[j][k] = tw.group.form(orbit_cr[j], tw.tfix_basis[k]);
    for (std::size_t i = 0; i < d; ++i) {
      RVec rhs = rvec_zero(d);
      rhs[i] = 1;
      RVec x = rmat_solve(sys, rhs);
      RVec w = rvec_zero(m);
      for (std::size_t k = 0; k < d; ++k) w = rvec_add(w, rvec_scale(x[k], tw.tfix_basis[k]));
      orbit_fw.push_back(w);
    }
    RMat solver = make_coord_solver(orbit_fw);
    RMat change = rmat_zero(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      RVec c = coords_exact(solver, orbit_fw, tw.fixweight_lattice[j]);
      for (std::size_t i = 0; i < d; ++i) {
        check(c[i].get_den() == 1, "fixed base weights are orbit weights");
        change[i][j] = c[i];
      }
    }
    Rat det = rmat_det(change);
    check(det == 1 || det == -1, "orbit weight lattice equals the fixed weight lattice");
  }

  // ---- fundamental alcove ------------------------------------------------------
  {
    const std::size_t d = tw.tfix_basis.size();
    tw.alcove_vertices.push_back(rvec_zero(m));
    for (std::size_t i = 0; i < d; ++i) {
      RMat sys = rmat_zero(d, d);
      RVec rhs = rvec_zero(d);
      for (std::size_t j = 0; j < d; ++j) {
        const RVec& row = (j == i) ? ob.highest_root : ob.simple_roots[j];
        for (std::size_t k = 0; k < d; ++k) sys[j][k] = tw.group.form(row, tw.tfix_basis[k]);
        rhs[j] = (j == i) ? 1 : 0;
      }
      RVec x = rmat_solve(sys, rhs);
      RVec v = rvec_zero(m);
      for (std::size_t k = 0; k < d; ++k) v = rvec_add(v, rvec_scale(x[k], tw.tfix_basis[k]));
      check(tw.group.form(ob.simple_roots[i], v) > 0, "vertex clears its own wall");
      tw.alcove_vertices.push_back(v);
    }
  }

  return tw;
}

Twist identity_twist(const RootSystem& rs) {
  std::vector<int> p(rs.rank);
  std::iota(p.begin(), p.end(), 0);
  return make_twist(rs, p);
}

Twist flip_twist(const RootSystem& rs) {
  std::vector<int> p(rs.rank);
  std::iota(p.begin(), p.end(), 0);
  switch (rs.series) {
    case Series::A:
      if (rs.rank < 2) throw std::invalid_argument("A1 has no diagram flip");
      for (int i = 0; i < rs.rank; ++i) p[i] = rs.rank - 1 - i;
      break;
    case Series::D:
      std::swap(p[rs.rank - 2], p[rs.rank - 1]);
      break;
    case Series::E:
      if (rs.rank != 6) throw std::invalid_argument("only E6 has a diagram flip");
      std::swap(p[0], p[5]);
      std::swap(p[2], p[4]);
      break;
    default:
      throw std::invalid_argument("series " + series_name(rs.series) + " has no diagram flip");
  }
  Twist tw = make_twist(rs, p);
  tw.name = "flip";
  return tw;
}

Twist triality_twist(const RootSystem& rs) {
  if (rs.series != Series::D || rs.rank != 4)
    throw std::invalid_argument("triality requires D4");
  // Rotate the three outer nodes around the center node (index 1).
  std::vector<int> p = {2, 1, 3, 0};
  Twist tw = make_twist(rs, p);
  tw.name = "triality";
  return tw;
}

Twist twist_by_name(const RootSystem& rs, const std::string& name) {
  if (name == "identity") return identity_twist(rs);
  if (name == "flip") return flip_twist(rs);
  if (name == "triality") return triality_twist(rs);
  throw std::invalid_argument("unknown twist name '" + name + "' (identity|flip|triality)");
}

}  // namespace twistdh
