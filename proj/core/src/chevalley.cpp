#include "twistdh/chevalley.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace twistdh {

namespace {

void check(bool cond, const std::string& what) {
  if (!cond) throw std::logic_error("chevalley: " + what);
}

}  // namespace

int cocycle_eval(const TwistSigns& signs, const std::vector<long>& a,
                 const std::vector<long>& b) {
  long parity = 0;
  const std::size_t n = signs.cocycle_simple.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (signs.cocycle_simple[i][j] < 0) parity += a[i] * b[j];
    }
  }
  return (parity % 2 == 0) ? 1 : -1;
}

TwistSigns build_twist_signs(const Twist& tw) {
  const RootSystem& rs = tw.group;
  const std::size_t npos = rs.n_positive;
  TwistSigns out;
  out.root_sign.assign(npos, 1);

  if (tw.order == 1) {
    out.orbits.reserve(npos);
    for (std::size_t p = 0; p < npos; ++p) {
      RootOrbit o;
      o.members = {p};
      o.exponent = rs.roots[p];
      o.sign = 1;
      out.orbits.push_back(std::move(o));
    }
    return out;
  }

  // Nontrivial twists exist only on simply laced systems.
  for (std::size_t p = 0; p < npos; ++p)
    check(rs.form(rs.roots[p], rs.roots[p]) == Rat(2),
          "twist on a system that is not simply laced");

  const int n = rs.rank;
  out.cocycle_simple.assign(n, std::vector<int>(n, 1));
  for (int i = 0; i < n; ++i) {
    out.cocycle_simple[i][i] = -1;
    for (int j = i + 1; j < n; ++j)
      if (rs.cartan[i][j] != 0) out.cocycle_simple[i][j] = -1;
  }

  std::map<std::vector<long>, std::size_t> index_of;
  const std::vector<std::vector<long>>& coords = rs.root_simple_coords;
  for (std::size_t p = 0; p < npos; ++p) index_of[coords[p]] = p;

  // Positive roots are stored sorted by height, so every decomposition of a
  // root uses signs that are already settled.
  for (std::size_t p = 0; p < npos; ++p) {
    if (rs.root_heights[p] == 1) continue;
    bool found = false;
    for (std::size_t q = 0; q < p; ++q) {
      if (rs.root_heights[q] >= rs.root_heights[p]) break;
      std::vector<long> rest(coords[p].size());
      bool nonneg = true;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        rest[i] = coords[p][i] - coords[q][i];
        if (rest[i] < 0) nonneg = false;
      }
      if (!nonneg) continue;
      auto it = index_of.find(rest);
      if (it == index_of.end()) continue;
      const std::size_t r = it->second;
      const std::size_t kq = tw.root_perm[q];
      const std::size_t kr = tw.root_perm[r];
      const int cand = out.root_sign[q] * out.root_sign[r] *
                       cocycle_eval(out, coords[kq], coords[kr]) *
                       cocycle_eval(out, coords[q], coords[r]);
      if (!found) {
        out.root_sign[p] = cand;
        found = true;
      } else {
        check(cand == out.root_sign[p],
              "inconsistent sign across decompositions");
      }
    }
    check(found, "positive root with no decomposition");
  }

  std::vector<char> seen(npos, 0);
  std::size_t covered = 0;
  for (std::size_t p = 0; p < npos; ++p) {
    if (seen[p]) continue;
    RootOrbit o;
    o.exponent = rvec_zero(rs.ambient_dim);
    std::size_t q = p;
    do {
      seen[q] = 1;
      o.members.push_back(q);
      o.exponent = rvec_add(o.exponent, rs.roots[q]);
      o.sign *= out.root_sign[q];
      q = tw.root_perm[q];
    } while (q != p);
    covered += o.members.size();
    if (o.members.size() == static_cast<std::size_t>(tw.order))
      check(o.sign == 1, "full orbit must close with sign +1");
    if (o.members.size() == 1 && tw.order == 3)
      check(o.sign == 1, "order-3 fixed root must carry sign +1");
    check(o.members.size() == 1 ||
              o.members.size() == static_cast<std::size_t>(tw.order),
          "orbit size must be 1 or the twist order");
    out.orbits.push_back(std::move(o));
  }
  check(covered == npos, "orbits must partition the positive roots");
  return out;
}

}  // namespace twistdh
