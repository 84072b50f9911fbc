#include "twistdh/root_system.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

namespace twistdh {

std::string series_name(Series s) { return std::string(1, static_cast<char>(s)); }

Series series_from_char(char c) {
  switch (c) {
    case 'A': case 'B': case 'C': case 'D': case 'E': case 'F': case 'G':
      return static_cast<Series>(c);
    default:
      throw std::invalid_argument("unknown series letter");
  }
}

namespace {

RVec unit(std::size_t dim, std::size_t i, const Rat& c = Rat(1)) {
  RVec v(dim, Rat(0));
  v[i] = c;
  return v;
}

void check(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("root system construction invariant failed: " + what);
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t classical_root_count(Series s, int n) {
  switch (s) {
    case Series::A: return static_cast<std::uint64_t>(n) * (n + 1);
    case Series::B:
    case Series::C: return 2ull * n * n;
    case Series::D: return 2ull * n * (n - 1);
    case Series::E: return n == 6 ? 72 : (n == 7 ? 126 : 240);
    case Series::F: return 48;
    case Series::G: return 12;
  }
  return 0;
}

// Exact key for a root vector: twice the coordinates are integers in every
// realization used here.
std::vector<long> root_key(const RVec& v) {
  std::vector<long> k;
  k.reserve(v.size());
  for (const auto& q : v) {
    Rat t = 2 * q;
    if (t.get_den() != 1) throw std::runtime_error("root coordinates not half-integral");
    k.push_back(to_long(t));
  }
  return k;
}

constexpr std::uint64_t kWeylEnumerationCap = 13'000'000;

std::uint64_t pack_images(const std::uint8_t* img, int rank) {
  std::uint64_t key = 0;
  for (int j = 0; j < rank; ++j) key |= static_cast<std::uint64_t>(img[j]) << (8 * j);
  return key;
}

}  // namespace

std::uint64_t classical_weyl_order(Series s, int n) {
  switch (s) {
    case Series::A: return factorial(n + 1);
    case Series::B:
    case Series::C: return (1ull << n) * factorial(n);
    case Series::D: return (1ull << (n - 1)) * factorial(n);
    case Series::E: return n == 6 ? 51840ull : (n == 7 ? 2903040ull : 696729600ull);
    case Series::F: return 1152;
    case Series::G: return 12;
  }
  return 0;
}

int RootSystem::root_index(const RVec& v) const {
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (rvec_eq(roots[i], v)) return static_cast<int>(i);
  return -1;
}

RVec RootSystem::coroot(std::size_t idx) const {
  const RVec& a = roots[idx];
  Rat n2 = form(a, a);
  return rvec_scale(Rat(2) / n2, a);
}

RVec RootSystem::weight_ambient(const WeightCoords& w) const {
  if (w.size() != static_cast<std::size_t>(rank))
    throw std::invalid_argument("weight coordinate count != rank");
  RVec v = rvec_zero(ambient_dim);
  for (int i = 0; i < rank; ++i)
    v = rvec_add(v, rvec_scale(Rat(w[i]), fundamental_weights[i]));
  return v;
}

RVec RootSystem::fundamental_coords(const RVec& v) const {
  RVec c(rank);
  for (int i = 0; i < rank; ++i) c[i] = form(v, simple_coroots[i]);
  return c;
}

const WeylGroup& RootSystem::weyl() const {
  if (!weyl_enumerated || !weyl_)
    throw std::runtime_error(
        "Weyl group of " + series_name(series) + std::to_string(rank) +
        " is not enumerated (order " + std::to_string(weyl_order) +
        " exceeds the in-memory cap)");
  return *weyl_;
}

RMat RootSystem::weyl_matrix(std::size_t i) const {
  const WeylGroup& w = weyl();
  const std::uint8_t* img = w.img(i);
  // M = S_w * extractor + P_perp, with S_w columns the images of the simple roots.
  RMat m = span_complement_proj;
  for (int j = 0; j < rank; ++j) {
    const RVec& target = roots[img[j]];
    for (std::size_t r = 0; r < ambient_dim; ++r) {
      if (target[r] == 0) continue;
      for (std::size_t c = 0; c < ambient_dim; ++c)
        m[r][c] += target[r] * simple_coord_extractor[j][c];
    }
  }
  return m;
}

RootSystem build_root_system(Series s, int rank) {
  auto bad = [&](const std::string& why) {
    throw std::invalid_argument("unsupported root system " + series_name(s) +
                                std::to_string(rank) + ": " + why);
  };
  RootSystem rs;
  rs.series = s;
  rs.rank = rank;
  if (rank < 1 || rank > 8) bad("rank must be between 1 and 8");

  std::size_t m = 0;
  switch (s) {
    case Series::A: {
      m = rank + 1;
      rs.form_scale = 1;
      for (int i = 0; i < rank; ++i) {
        RVec a = rvec_zero(m);
        a[i] = 1; a[i + 1] = -1;
        rs.simple_roots.push_back(a);
      }
      break;
    }
    case Series::B: {
      if (rank < 2) bad("B requires rank >= 2");
      m = rank;
      rs.form_scale = 1;
      for (int i = 0; i + 1 < rank; ++i) {
        RVec a = rvec_zero(m);
        a[i] = 1; a[i + 1] = -1;
        rs.simple_roots.push_back(a);
      }
      rs.simple_roots.push_back(unit(m, rank - 1));
      break;
    }
    case Series::C: {
      if (rank < 2) bad("C requires rank >= 2");
      m = rank;
      rs.form_scale = Rat(1, 2);
      for (int i = 0; i + 1 < rank; ++i) {
        RVec a = rvec_zero(m);
        a[i] = 1; a[i + 1] = -1;
        rs.simple_roots.push_back(a);
      }
      rs.simple_roots.push_back(unit(m, rank - 1, Rat(2)));
      break;
    }
    case Series::D: {
      if (rank < 3) bad("D requires rank >= 3");
      m = rank;
      rs.form_scale = 1;
      for (int i = 0; i + 1 < rank; ++i) {
        RVec a = rvec_zero(m);
        a[i] = 1; a[i + 1] = -1;
        rs.simple_roots.push_back(a);
      }
      RVec a = rvec_zero(m);
      a[rank - 2] = 1; a[rank - 1] = 1;
      rs.simple_roots.push_back(a);
      break;
    }
    case Series::E: {
      if (rank < 6) bad("E requires rank 6, 7 or 8");
      m = 8;
      rs.form_scale = 1;
      RVec a1 = rvec_zero(m);
      a1[0] = Rat(1, 2); a1[7] = Rat(1, 2);
      for (int j = 1; j <= 6; ++j) a1[j] = Rat(-1, 2);
      rs.simple_roots.push_back(a1);
      RVec a2 = rvec_zero(m);
      a2[0] = 1; a2[1] = 1;
      rs.simple_roots.push_back(a2);
      for (int k = 3; k <= rank; ++k) {
        RVec a = rvec_zero(m);
        a[k - 3] = -1; a[k - 2] = 1;  // alpha_k = e_{k-2} - e_{k-3}
        rs.simple_roots.push_back(a);
      }
      break;
    }
    case Series::F: {
      if (rank != 4) bad("F requires rank 4");
      m = 4;
      rs.form_scale = 1;
      RVec a1 = rvec_zero(m); a1[1] = 1; a1[2] = -1;
      RVec a2 = rvec_zero(m); a2[2] = 1; a2[3] = -1;
      RVec a3 = unit(m, 3);
      RVec a4 = rvec_zero(m);
      a4[0] = Rat(1, 2); a4[1] = Rat(-1, 2); a4[2] = Rat(-1, 2); a4[3] = Rat(-1, 2);
      rs.simple_roots = {a1, a2, a3, a4};
      break;
    }
    case Series::G: {
      if (rank != 2) bad("G requires rank 2");
      m = 3;
      rs.form_scale = Rat(1, 3);
      RVec a1 = rvec_zero(m); a1[0] = 1; a1[1] = -1;
      RVec a2 = rvec_zero(m); a2[0] = -2; a2[1] = 1; a2[2] = 1;
      rs.simple_roots = {a1, a2};
      break;
    }
  }
  rs.ambient_dim = m;

  // ---- Cartan matrix and simple coroots ---------------------------------
  rs.cartan = rmat_zero(rank, rank);
  for (int i = 0; i < rank; ++i) {
    const RVec& ai = rs.simple_roots[i];
    rs.simple_coroots.push_back(rvec_scale(Rat(2) / rs.form(ai, ai), ai));
    for (int j = 0; j < rank; ++j)
      rs.cartan[i][j] = 2 * rvec_dot(ai, rs.simple_roots[j]) / rvec_dot(ai, ai);
  }
  for (int i = 0; i < rank; ++i) {
    check(rs.cartan[i][i] == 2, "Cartan diagonal");
    for (int j = 0; j < rank; ++j) {
      if (i == j) continue;
      check(rs.cartan[i][j] <= 0 && rs.cartan[i][j] >= -3, "Cartan off-diagonal range");
      check(rs.cartan[i][j].get_den() == 1, "Cartan integrality");
    }
  }

  // ---- span extractor / complement projector ----------------------------
  {
    RMat g = rmat_zero(rank, rank);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) g[i][j] = rvec_dot(rs.simple_roots[i], rs.simple_roots[j]);
    RMat ginv = rmat_inverse(g);
    rs.simple_coord_extractor = rmat_zero(rank, m);
    for (int i = 0; i < rank; ++i)
      for (std::size_t c = 0; c < m; ++c) {
        Rat acc(0);
        for (int k = 0; k < rank; ++k) acc += ginv[i][k] * rs.simple_roots[k][c];
        rs.simple_coord_extractor[i][c] = acc;
      }
    RMat proj = rmat_zero(m, m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) {
        Rat acc(0);
        for (int k = 0; k < rank; ++k)
          acc += rs.simple_roots[k][r] * rs.simple_coord_extractor[k][c];
        proj[r][c] = acc;
      }
    rs.span_complement_proj = rmat_zero(m, m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c)
        rs.span_complement_proj[r][c] = (r == c ? Rat(1) : Rat(0)) - proj[r][c];
  }

  // ---- reflection closure ------------------------------------------------
  std::map<std::vector<long>, int> index_of;
  std::vector<RVec> all;
  std::deque<RVec> todo;
  auto add_root = [&](const RVec& v) {
    auto key = root_key(v);
    if (index_of.count(key)) return;
    index_of[key] = static_cast<int>(all.size());
    all.push_back(v);
    todo.push_back(v);
  };
  for (const auto& a : rs.simple_roots) {
    add_root(a);
    add_root(rvec_scale(Rat(-1), a));
  }
  while (!todo.empty()) {
    RVec v = todo.front();
    todo.pop_front();
    for (int i = 0; i < rank; ++i) {
      const RVec& ai = rs.simple_roots[i];
      Rat c = 2 * rvec_dot(v, ai) / rvec_dot(ai, ai);
      add_root(rvec_sub(v, rvec_scale(c, ai)));
    }
  }
  check(all.size() == classical_root_count(s, rank), "root count");

  // ---- positivity, integer coords, canonical order ----------------------
  struct PosRoot {
    RVec v;
    std::vector<long> coords;
    int height;
  };
  std::vector<PosRoot> pos;
  for (const auto& v : all) {
    RVec c = rmat_apply(rs.simple_coord_extractor, v);
    std::vector<long> ic(rank);
    int sign = 0;
    long h = 0;
    for (int i = 0; i < rank; ++i) {
      check(c[i].get_den() == 1, "integral simple-root coordinates");
      ic[i] = to_long(c[i]);
      h += ic[i];
      if (ic[i] > 0) sign |= 1;
      if (ic[i] < 0) sign |= 2;
    }
    check(sign == 1 || sign == 2, "roots have uniform coordinate sign");
    if (sign == 1) pos.push_back({v, ic, static_cast<int>(h)});
  }
  check(pos.size() * 2 == all.size(), "positive/negative split");
  std::sort(pos.begin(), pos.end(), [](const PosRoot& a, const PosRoot& b) {
    if (a.height != b.height) return a.height < b.height;
    return a.coords < b.coords;
  });
  rs.n_positive = pos.size();
  rs.roots.clear();
  rs.root_simple_coords.clear();
  rs.root_heights.clear();
  for (const auto& p : pos) {
    rs.roots.push_back(p.v);
    rs.root_simple_coords.push_back(p.coords);
    rs.root_heights.push_back(p.height);
  }
  for (const auto& p : pos) {
    rs.roots.push_back(rvec_scale(Rat(-1), p.v));
    std::vector<long> nc(rank);
    for (int i = 0; i < rank; ++i) nc[i] = -p.coords[i];
    rs.root_simple_coords.push_back(nc);
    rs.root_heights.push_back(-p.height);
  }
  rs.highest_root_index = rs.n_positive - 1;  // unique maximal height after sort
  check(rs.root_heights[rs.n_positive - 1] > rs.root_heights[rs.n_positive - 2] ||
            rs.n_positive == 1,
        "unique highest root");
  check(rs.form(rs.highest_root(), rs.highest_root()) == 2, "B(theta,theta) = 2");

  // ---- fundamental weights, rho -----------------------------------------
  {
    RMat cinv = rmat_inverse(rs.cartan);
    for (int i = 0; i < rank; ++i) {
      RVec w = rvec_zero(m);
      for (int k = 0; k < rank; ++k)
        w = rvec_add(w, rvec_scale(cinv[k][i], rs.simple_roots[k]));
      rs.fundamental_weights.push_back(w);
    }
    rs.rho = rvec_zero(m);
    for (const auto& w : rs.fundamental_weights) rs.rho = rvec_add(rs.rho, w);
    // cross-check against the half-sum of positive roots
    RVec half = rvec_zero(m);
    for (std::size_t i = 0; i < rs.n_positive; ++i) half = rvec_add(half, rs.roots[i]);
    half = rvec_scale(Rat(1, 2), half);
    check(rvec_eq(half, rs.rho), "rho = half-sum of positive roots");
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        check(rs.form(rs.fundamental_weights[i], rs.simple_coroots[j]) ==
                  (i == j ? 1 : 0),
              "fundamental weight duality");
  }

  // ---- simple reflection table on root indices ---------------------------
  std::map<std::vector<long>, int> sorted_index;
  for (std::size_t q = 0; q < rs.roots.size(); ++q) sorted_index[root_key(rs.roots[q])] = static_cast<int>(q);
  rs.refl_table.assign(rank, std::vector<std::uint8_t>(rs.roots.size()));
  for (int i = 0; i < rank; ++i) {
    const RVec& ai = rs.simple_roots[i];
    for (std::size_t r = 0; r < rs.roots.size(); ++r) {
      Rat c = 2 * rvec_dot(rs.roots[r], ai) / rvec_dot(ai, ai);
      RVec w = rvec_sub(rs.roots[r], rvec_scale(c, ai));
      auto it = sorted_index.find(root_key(w));
      check(it != sorted_index.end(), "reflection closure under s_i");
      rs.refl_table[i][r] = static_cast<std::uint8_t>(it->second);
    }
  }

  // ---- Weyl enumeration ---------------------------------------------------
  rs.weyl_order = classical_weyl_order(s, rank);
  if (rs.weyl_order <= kWeylEnumerationCap) {
    auto wg = std::make_shared<WeylGroup>();
    wg->rank = rank;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(rs.weyl_order * 2);
    std::uint8_t ident[8] = {0};
    for (int j = 0; j < rank; ++j) {
      int idx = rs.root_index(rs.simple_roots[j]);
      check(idx >= 0, "simple root index");
      ident[j] = static_cast<std::uint8_t>(idx);
    }
    wg->images.insert(wg->images.end(), ident, ident + rank);
    wg->dets.push_back(1);
    seen.insert(pack_images(ident, rank));
    std::size_t head = 0;
    while (head * rank < wg->images.size()) {
      std::uint8_t cur[8];
      std::copy(wg->images.begin() + head * rank, wg->images.begin() + (head + 1) * rank, cur);
      std::int8_t d = wg->dets[head];
      for (int i = 0; i < rank; ++i) {
        std::uint8_t nxt[8];
        for (int j = 0; j < rank; ++j) nxt[j] = rs.refl_table[i][cur[j]];
        std::uint64_t key = pack_images(nxt, rank);
        if (seen.insert(key).second) {
          wg->images.insert(wg->images.end(), nxt, nxt + rank);
          wg->dets.push_back(static_cast<std::int8_t>(-d));
        }
      }
      ++head;
    }
    wg->count = wg->dets.size();
    check(wg->count == rs.weyl_order, "enumerated Weyl order matches the classical order");
    rs.weyl_ = std::move(wg);
    rs.weyl_enumerated = true;
  }

  return rs;
}

RVec weyl_apply(const RootSystem& rs, std::size_t index, const RVec& v) {
  const WeylGroup& wg = rs.weyl();
  const std::uint8_t* img = wg.img(index);
  RVec c = rmat_apply(rs.simple_coord_extractor, v);
  RVec out = v;
  for (int j = 0; j < rs.rank; ++j) {
    if (c[j] == 0) continue;
    out = rvec_sub(out, rvec_scale(c[j], rs.simple_roots[j]));   // strip span part
    out = rvec_add(out, rvec_scale(c[j], rs.roots[img[j]]));     // re-add mapped
  }
  return out;
}

Rat weyl_dimension(const RootSystem& rs, const WeightCoords& lambda) {
  for (long c : lambda)
    if (c < 0) throw std::invalid_argument("weyl_dimension: weight not dominant");
  RVec lam = rs.weight_ambient(lambda);
  RVec lam_rho = rvec_add(lam, rs.rho);
  Rat dim(1);
  for (std::size_t i = 0; i < rs.n_positive; ++i) {
    RVec cr = rs.coroot(i);
    dim *= rs.form(lam_rho, cr) / rs.form(rs.rho, cr);
  }
  if (dim.get_den() != 1)
    throw std::runtime_error("weyl_dimension: non-integral result");
  return dim;
}

long weight_level(const RootSystem& rs, const WeightCoords& lambda) {
  RVec lam = rs.weight_ambient(lambda);
  Rat lv = rs.form(lam, rs.coroot(rs.highest_root_index));
  if (lv.get_den() != 1) throw std::runtime_error("weight_level: non-integral level");
  return to_long(lv);
}

double lattice_covolume(const RootSystem& rs, const std::vector<RVec>& basis) {
  if (basis.empty()) return 1.0;
  if (rank_of(basis) != basis.size())
    throw std::invalid_argument("lattice_covolume: basis is linearly dependent");
  return covolume_from_gram(gram_matrix(basis, rs.form_scale));
}

}  // namespace twistdh
