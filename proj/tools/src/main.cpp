// twistdh command-line frontend.  Subcommands are wired up as the library
// grows; see README for the scenario format.
#include "CLI11.hpp"
#include "json.hpp"
#include "scenario.hpp"
#include "twistdh/characters.hpp"
#include "twistdh/measures.hpp"
#include "twistdh/moduli.hpp"
#include "twistdh/oracles.hpp"
#include "twistdh/rng.hpp"
#include "twistdh/twist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace twistdh;

namespace {

// 17 significant digits: enough to round-trip an IEEE double exactly.
std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json twist_report(const Twist& tw) {
  json j;
  j["group"] = series_name(tw.group.series) + std::to_string(tw.group.rank);
  j["twist"] = tw.name;
  j["order"] = tw.order;
  j["dim_t_fixed"] = tw.fixed_dim();
  j["dim_t_moving"] = tw.moving_dim();
  j["orbit_system"] = tw.orbit_label();
  j["intersection_order"] = tw.intersection_order;
  j["commutant_weyl_order"] = tw.wk_indices.size();
  j["extended_weyl_order"] = tw.extended_weyl_order();
  json verts = json::array();
  for (const auto& v : tw.alcove_vertices) {
    json row = json::array();
    for (const auto& q : v) row.push_back(fmt17(to_double(q)));
    verts.push_back(row);
  }
  j["alcove_vertices"] = verts;
  return j;
}

// Caches one Twist per name so evaluation contexts can hold references.
class TwistPool {
 public:
  explicit TwistPool(const RootSystem& rs) : rs_(rs) {}
  const Twist& get(const std::string& name) {
    auto it = pool_.find(name);
    if (it == pool_.end())
      it = pool_.emplace(name, twist_by_name(rs_, name)).first;
    return it->second;
  }

 private:
  const RootSystem& rs_;
  std::map<std::string, Twist> pool_;
};

std::string join_longs(const std::vector<long>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt17(v[i]);
  }
  return out;
}

json doubles_as_strings(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(fmt17(x));
  return arr;
}

// Validates the coefficient count and returns the ambient point.
TorusPoint boundary_point(const Twist& tw, const BoundarySpec& b,
                          std::size_t index) {
  if (b.alcove_point.size() != static_cast<std::size_t>(tw.fixed_dim()))
    throw ScenarioValidationError(
        "/surface/boundaries/" + std::to_string(index) + "/alcove_point",
        "expected " + std::to_string(tw.fixed_dim()) +
            " coefficients for twist '" + b.twist + "'");
  return tw.alcove_point(b.alcove_point);
}

void require_boundaries(const Scenario& sc) {
  if (sc.surface.boundaries.empty())
    throw ScenarioValidationError("/surface/boundaries",
                                  "this command needs at least one boundary");
}

// The scenario's group, the twists it names, and the assembled surface.
// The assembly holds pointers into `twists`, whose map nodes are stable, so
// the struct must stay put (no copies) while contexts built on it live.
struct AssembledSurface {
  explicit AssembledSurface(const Scenario& sc)
      : rs(build_root_system(sc.series, sc.rank)) {
    assembly.group = &rs;
    for (const HandleTwistNames& h : sc.surface.handle_twists)
      assembly.handles.push_back({&get(h.tau), &get(h.kappa)});
    for (std::size_t i = 0; i < sc.surface.boundaries.size(); ++i) {
      const BoundarySpec& b = sc.surface.boundaries[i];
      const Twist& tw = get(b.twist);
      assembly.boundaries.push_back({&tw, boundary_point(tw, b, i)});
    }
  }
  AssembledSurface(const AssembledSurface&) = delete;
  AssembledSurface& operator=(const AssembledSurface&) = delete;

  const Twist& get(const std::string& name) {
    auto it = twists.find(name);
    if (it == twists.end())
      it = twists.emplace(name, twist_by_name(rs, name)).first;
    return it->second;
  }

  RootSystem rs;
  std::map<std::string, Twist> twists;
  SurfaceAssembly assembly;
};

struct OutputPlan {
  bool csv = false;
  bool js = false;
};

OutputPlan plan_outputs(const Scenario& sc) {
  OutputPlan p;
  for (const std::string& kind : sc.outputs) {
    if (kind == "csv") p.csv = true;
    if (kind == "json") p.js = true;
  }
  if (!p.csv && !p.js) p.csv = true;
  return p;
}

std::string sibling_with_extension(const std::string& path,
                                   const std::string& ext) {
  std::size_t slash = path.find_last_of('/');
  std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return path + ext;
  return path.substr(0, dot) + ext;
}

int write_file(const std::string& path, const std::string& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file " << path << "\n";
    return 1;
  }
  out << payload;
  return 0;
}

// The scenario's outputs list picks the formats.  With an output path the
// CSV lands at the path itself and the JSON at the sibling ".json" path;
// without one, stdout carries whichever format the scenario lists first,
// since a single stream holds a single table.
int emit_table(const std::string& out_path, const Scenario& sc,
               const std::string& csv, const json& artifact) {
  OutputPlan plan = plan_outputs(sc);
  std::string js = artifact.dump(2) + "\n";
  if (out_path.empty()) {
    std::string first = sc.outputs.empty() ? "csv" : sc.outputs.front();
    std::cout << (first == "json" ? js : csv);
    return 0;
  }
  if (plan.csv && plan.js) {
    int rc = write_file(out_path, csv);
    if (rc) return rc;
    return write_file(sibling_with_extension(out_path, ".json"), js);
  }
  return write_file(out_path, plan.js ? js : csv);
}

json artifact_header(const char* kind, const Scenario& sc,
                     const ModuliContext& ctx) {
  json j;
  j["artifact"] = kind;
  j["group"] = series_name(sc.series) + std::to_string(sc.rank);
  j["target_twist"] = ctx.target_twist().name;
  j["handles"] = sc.surface.handles;
  j["boundaries"] = sc.surface.boundary_count;
  return j;
}

// Midpoint sweep of the open coefficient simplex {c_i > 0, sum c_i < 1}.
std::vector<std::vector<double>> simplex_grid(int dim, long n) {
  std::vector<std::vector<double>> out;
  std::vector<long> idx(dim, 0);
  std::vector<double> coeffs(dim);
  while (true) {
    double total = 0.0;
    for (int i = 0; i < dim; ++i) {
      coeffs[i] = (idx[i] + 0.5) / static_cast<double>(n);
      total += coeffs[i];
    }
    if (total < 1.0) out.push_back(coeffs);
    int k = 0;
    while (k < dim && ++idx[k] == n) {
      idx[k] = 0;
      ++k;
    }
    if (k == dim) return out;
  }
}

// Both table commands build the complete output before emitting anything, so
// a failing row never leaves a partial table behind.
int run_twining(const Scenario& sc, std::ostream& os) {
  RootSystem rs = build_root_system(sc.series, sc.rank);
  TwistPool pool(rs);
  require_boundaries(sc);
  std::ostringstream table;
  table << "twist,lambda_coords,alcove_point,chi_re,chi_im,volg_power\n";
  std::map<std::string, CharacterContext> contexts;
  for (std::size_t i = 0; i < sc.surface.boundaries.size(); ++i) {
    const BoundarySpec& b = sc.surface.boundaries[i];
    const Twist& tw = pool.get(b.twist);
    auto ctx = contexts.find(b.twist);
    if (ctx == contexts.end())
      ctx = contexts.emplace(b.twist, CharacterContext(tw)).first;
    TorusPoint xi = boundary_point(tw, b, i);
    for (const WeightCoords& lam :
         fixed_dominant_weights(tw, sc.numerics.level_cutoff)) {
      cplx value = ctx->second.twining_character(lam, xi);
      table << b.twist << ',' << join_longs(lam) << ','
            << join_doubles(b.alcove_point) << ',' << fmt17(value.real())
            << ',' << fmt17(value.imag()) << ",0\n";
    }
  }
  os << table.str();
  return 0;
}

int run_class_volume(const Scenario& sc, std::ostream& os) {
  RootSystem rs = build_root_system(sc.series, sc.rank);
  TwistPool pool(rs);
  require_boundaries(sc);
  std::ostringstream table;
  table << "twist,alcove_point,volume_coeff,volg_power,degenerate\n";
  std::map<std::string, MeasureContext> contexts;
  for (std::size_t i = 0; i < sc.surface.boundaries.size(); ++i) {
    const BoundarySpec& b = sc.surface.boundaries[i];
    const Twist& tw = pool.get(b.twist);
    auto ctx = contexts.find(b.twist);
    if (ctx == contexts.end())
      ctx = contexts.emplace(b.twist, MeasureContext(tw)).first;
    TorusPoint xi = boundary_point(tw, b, i);
    ClassVolume cv = ctx->second.class_volume(xi);
    table << b.twist << ',' << join_doubles(b.alcove_point) << ','
          << fmt17(cv.volume.coeff) << ',' << cv.volume.volg_power << ','
          << (cv.degenerate ? 1 : 0) << "\n";
  }
  os << table.str();
  return 0;
}

int run_dh_coeffs(const Scenario& sc, long cutoff_flag,
                  const std::string& out_path) {
  AssembledSurface srf(sc);
  ModuliContext ctx(srf.assembly);
  const long cutoff = cutoff_flag >= 0 ? cutoff_flag : sc.numerics.level_cutoff;
  // Error model: the rational part costs one rounding on conversion and each
  // boundary contributes one floating-point factor (class volume times
  // character value), bounded by a few ulps per factor.
  const double err_rate =
      1.2e-16 + 1e-15 * static_cast<double>(srf.assembly.boundaries.size());
  std::ostringstream csv;
  csv << "lambda_coords,coeff,volg_power,abs_err_estimate\n";
  json rows = json::array();
  for (const WeightCoords& lam : ctx.admissible_weights(cutoff)) {
    DHCoefficient c = ctx.dh_coefficient(lam);
    cplx val = c.coefficient();
    double err = (c.vanishes || c.degenerate) ? 0.0 : std::abs(val) * err_rate;
    csv << join_longs(lam) << ',' << fmt17(val.real()) << ',' << c.volg_power
        << ',' << fmt17(err) << "\n";
    json r;
    r["lambda"] = lam;
    r["rational"] = c.rational.get_str();
    r["numeric_re"] = fmt17(c.numeric.real());
    r["numeric_im"] = fmt17(c.numeric.imag());
    r["coeff_re"] = fmt17(val.real());
    r["coeff_im"] = fmt17(val.imag());
    r["volg_power"] = c.volg_power;
    r["vanishes"] = c.vanishes;
    r["degenerate"] = c.degenerate;
    r["abs_err_estimate"] = fmt17(err);
    rows.push_back(r);
  }
  json artifact = artifact_header("dh_coefficient_table", sc, ctx);
  artifact["level_cutoff"] = cutoff;
  artifact["coefficient_power"] = ctx.coefficient_power();
  artifact["rows"] = rows;
  return emit_table(out_path, sc, csv.str(), artifact);
}

// Default series cutoff for density-style sums: whatever the scenario asks
// for, but never less than the level at which the heat tail bound drops
// below 1e-8 (at the smallest heat time the evaluation will visit).
long series_cutoff(const Scenario& sc, const ModuliContext& ctx,
                   bool extrapolate) {
  const double t = extrapolate ? sc.numerics.heat_t / 4 : sc.numerics.heat_t;
  return std::max(sc.numerics.level_cutoff, ctx.default_level_cutoff(t));
}

int run_density(const Scenario& sc, long grid_flag, long cutoff_flag,
                bool extrapolate, const std::string& out_path) {
  AssembledSurface srf(sc);
  ModuliContext ctx(srf.assembly);
  const Twist& tw = ctx.target_twist();
  const int d = tw.fixed_dim();
  const long n = grid_flag > 0 ? grid_flag : (d == 1 ? 64 : 16);
  const long cutoff =
      cutoff_flag >= 0 ? cutoff_flag : series_cutoff(sc, ctx, extrapolate);
  std::ostringstream csv;
  csv << "alcove_coords,density_coeff,volg_power,trunc_residual\n";
  json rows = json::array();
  for (const std::vector<double>& coeffs : simplex_grid(d, n)) {
    TorusPoint xi = tw.alcove_point(coeffs);
    DensityValue dv =
        extrapolate
            ? ctx.dh_density_extrapolated(xi, sc.numerics.heat_t, cutoff)
            : ctx.dh_density(xi, sc.numerics.heat_t, cutoff);
    csv << join_doubles(coeffs) << ',' << fmt17(dv.value.coeff) << ','
        << dv.value.volg_power << ',' << fmt17(dv.residual) << "\n";
    json r;
    r["alcove_coords"] = doubles_as_strings(coeffs);
    r["density_coeff"] = fmt17(dv.value.coeff);
    r["volg_power"] = dv.value.volg_power;
    r["trunc_residual"] = fmt17(dv.residual);
    rows.push_back(r);
  }
  json artifact = artifact_header("density_table", sc, ctx);
  artifact["heat_t"] = fmt17(sc.numerics.heat_t);
  artifact["level_cutoff"] = cutoff;
  artifact["extrapolated"] = extrapolate;
  artifact["grid_n"] = n;
  artifact["rows"] = rows;
  return emit_table(out_path, sc, csv.str(), artifact);
}

std::vector<double> parse_coeff_list(const std::string& text, int dim) {
  std::vector<double> out;
  std::string cleaned = text;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  double x = 0.0;
  while (in >> x) out.push_back(x);
  if (out.size() != static_cast<std::size_t>(dim))
    throw std::runtime_error("--at expects " + std::to_string(dim) +
                             " alcove coefficients for this target twist");
  return out;
}

int run_reduced_volume(const Scenario& sc, long gamma_order,
                       const std::string& at_str, long grid_flag,
                       long cutoff_flag, bool extrapolate,
                       const std::string& out_path) {
  AssembledSurface srf(sc);
  ModuliContext ctx(srf.assembly);
  const Twist& tw = ctx.target_twist();
  const int d = tw.fixed_dim();
  const long cutoff =
      cutoff_flag >= 0 ? cutoff_flag : series_cutoff(sc, ctx, extrapolate);
  std::vector<std::vector<double>> points;
  if (!at_str.empty())
    points.push_back(parse_coeff_list(at_str, d));
  else
    points = simplex_grid(d, grid_flag > 0 ? grid_flag : (d == 1 ? 16 : 8));
  std::ostringstream csv;
  csv << "alcove_coords,volume_coeff,volg_power,residual\n";
  json rows = json::array();
  for (const std::vector<double>& coeffs : points) {
    TorusPoint xi = tw.alcove_point(coeffs);
    ReducedVolume rv;
    try {
      rv = reduced_volume(ctx, xi, gamma_order, sc.numerics.heat_t, cutoff,
                          extrapolate);
    } catch (const std::invalid_argument& e) {
      if (at_str.empty()) continue;  // sweep mode: skip degenerate cells
      throw std::runtime_error(e.what());
    }
    csv << join_doubles(coeffs) << ',' << fmt17(rv.value.coeff) << ','
        << rv.value.volg_power << ',' << fmt17(rv.residual) << "\n";
    json r;
    r["alcove_coords"] = doubles_as_strings(coeffs);
    r["volume_coeff"] = fmt17(rv.value.coeff);
    r["volg_power"] = rv.value.volg_power;
    r["residual"] = fmt17(rv.residual);
    rows.push_back(r);
  }
  json artifact = artifact_header("reduced_volume_table", sc, ctx);
  artifact["gamma_order"] = gamma_order;
  artifact["heat_t"] = fmt17(sc.numerics.heat_t);
  artifact["level_cutoff"] = cutoff;
  artifact["extrapolated"] = extrapolate;
  artifact["rows"] = rows;
  return emit_table(out_path, sc, csv.str(), artifact);
}

int run_mc_check(const Scenario& sc, long bins, const std::string& out_path) {
  if (!sc.numerics.seed_given)
    throw ScenarioValidationError("/numerics/seed",
                                  "monte-carlo commands require an explicit "
                                  "seed in the scenario");
  AssembledSurface srf(sc);
  ModuliContext ctx(srf.assembly);
  McComparison mc =
      mc_compare(ctx, sc.numerics.mc_samples, static_cast<int>(bins),
                 sc.numerics.heat_t, sc.numerics.level_cutoff,
                 sc.numerics.seed);
  std::ostringstream csv;
  csv << "bin_center,mc_estimate,mc_stderr,series_value,z_score\n";
  json rows = json::array();
  for (const McBin& b : mc.bins) {
    csv << join_doubles(b.center) << ',' << fmt17(b.mc_mass) << ','
        << fmt17(b.mc_stderr) << ',' << fmt17(b.series_mass) << ','
        << fmt17(b.z) << "\n";
    json r;
    r["bin_center"] = doubles_as_strings(b.center);
    r["mc_estimate"] = fmt17(b.mc_mass);
    r["mc_stderr"] = fmt17(b.mc_stderr);
    r["series_value"] = fmt17(b.series_mass);
    r["z_score"] = fmt17(b.z);
    rows.push_back(r);
  }
  json artifact = artifact_header("mc_check_table", sc, ctx);
  artifact["n_samples"] = mc.n_samples;
  artifact["bins_per_axis"] = mc.bins_per_axis;
  artifact["dim"] = mc.dim;
  artifact["seed"] = sc.numerics.seed;
  artifact["heat_t"] = fmt17(sc.numerics.heat_t);
  artifact["level_cutoff"] = sc.numerics.level_cutoff;
  artifact["rows"] = rows;
  return emit_table(out_path, sc, csv.str(), artifact);
}

// ---------------------------------------------------------------------------
// verify: the cross-module invariant battery.

struct CheckResult {
  std::string name;
  bool skipped = false;
  std::string skip_reason;
  bool passed = true;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

const std::map<std::string, double>& verify_defaults() {
  static const std::map<std::string, double> kDefaults = {
      {"twist_structure", 0.0},
      {"weyl_denominator", 1e-9},
      {"orthonormality", 1e-8},
      {"identity_character_value", 1e-8},
      {"untwisted_collapse", 1e-12},
      {"haar_mass", 5e-3},
      {"fusion_exactness", 1e-12},
      {"sl3_oracle", 1e-9},
      {"mc_reproducibility", 0.0},
      {"mc_total_mass", 1e-12},
  };
  return kDefaults;
}

class VerifyRunner {
 public:
  explicit VerifyRunner(const Scenario& sc) : sc_(sc), srf_(sc) {
    for (const auto& [key, value] : sc.tolerances)
      if (verify_defaults().find(key) == verify_defaults().end())
        throw ScenarioValidationError("/tolerances/" + key,
                                      "unknown check name");
    for (const std::string& name : sc.twists) names_.insert(name);
    for (const HandleTwistNames& h : sc.surface.handle_twists) {
      names_.insert(h.tau);
      names_.insert(h.kappa);
    }
    for (const BoundarySpec& b : sc.surface.boundaries)
      names_.insert(b.twist);
    if (names_.empty()) names_.insert("identity");
    has_surface_ =
        sc.surface.handles > 0 || sc.surface.boundary_count > 0;
    if (has_surface_) ctx_ = std::make_unique<ModuliContext>(srf_.assembly);
  }

  std::vector<CheckResult> run() {
    std::vector<CheckResult> out;
    out.push_back(twist_structure());
    out.push_back(weyl_denominator());
    out.push_back(orthonormality());
    out.push_back(identity_character_value());
    out.push_back(untwisted_collapse());
    out.push_back(haar_mass());
    out.push_back(fusion_exactness());
    out.push_back(sl3_oracle());
    mc_checks(out);
    return out;
  }

 private:
  double tol(const std::string& name) const {
    auto it = sc_.tolerances.find(name);
    return it != sc_.tolerances.end() ? it->second
                                      : verify_defaults().at(name);
  }

  CheckResult base(const std::string& name) const {
    CheckResult r;
    r.name = name;
    r.tolerance = tol(name);
    return r;
  }

  static void finish(CheckResult& r) {
    r.passed = r.skipped || r.measured <= r.tolerance;
  }

  static void skip(CheckResult& r, const std::string& reason) {
    r.skipped = true;
    r.skip_reason = reason;
    r.passed = true;
  }

  long weight_cap() const { return std::min<long>(sc_.numerics.level_cutoff, 3); }

  std::vector<double> regular_coeffs(const Twist& tw,
                                     const MeasureContext& mctx,
                                     PhiloxStream& rng) const {
    const int d = tw.fixed_dim();
    std::vector<double> coeffs(d);
    for (int attempt = 0; attempt < 256; ++attempt) {
      for (double& c : coeffs) c = (0.1 + 0.9 * rng.uniform()) * 0.9 / d;
      if (mctx.det_factor(tw.alcove_point(coeffs)) > 1e-6) return coeffs;
    }
    throw std::runtime_error("could not draw a regular point for twist '" +
                             tw.name + "'");
  }

  CheckResult twist_structure() {
    CheckResult r = base("twist_structure");
    long bad = 0;
    for (const std::string& name : names_) {
      const Twist& tw = srf_.get(name);
      if (tw.extended_weyl_order() !=
          tw.intersection_order * static_cast<long>(tw.wk_indices.size()))
        ++bad;
      if (static_cast<long>(tw.alcove_vertices.size()) != tw.fixed_dim() + 1)
        ++bad;
      if (tw.order < 1 || tw.order > 3) ++bad;
      if (tw.fixed_dim() + tw.moving_dim() != tw.group.rank) ++bad;
    }
    r.measured = static_cast<double>(bad);
    r.detail = "structural identities over " +
               std::to_string(names_.size()) + " twist(s)";
    finish(r);
    return r;
  }

  CheckResult weyl_denominator() {
    CheckResult r = base("weyl_denominator");
    double worst = 0.0;
    int stream = 11;
    for (const std::string& name : names_) {
      const Twist& tw = srf_.get(name);
      MeasureContext mctx(tw);
      PhiloxStream rng(sc_.numerics.seed, static_cast<std::uint64_t>(stream++));
      for (int trial = 0; trial < 20; ++trial) {
        TorusPoint xi = tw.alcove_point(regular_coeffs(tw, mctx, rng));
        double det = mctx.det_factor(xi);
        double lhs = static_cast<double>(tw.intersection_order) *
                     std::norm(mctx.alternating_sum(xi, tw.group.rho));
        worst = std::max(worst, std::abs(lhs - det) / det);
      }
    }
    r.measured = worst;
    r.detail = "alternating-sum identity at 20 regular points per twist";
    finish(r);
    return r;
  }

  CheckResult orthonormality() {
    CheckResult r = base("orthonormality");
    double worst = 0.0;
    long pairs = 0;
    for (const std::string& name : names_) {
      const Twist& tw = srf_.get(name);
      CharacterContext cc(tw);
      std::vector<WeightCoords> ws = fixed_dominant_weights(tw, weight_cap());
      for (std::size_t i = 0; i < ws.size(); ++i)
        for (std::size_t j = i; j < ws.size(); ++j) {
          double g = cc.inner_product(ws[i], ws[j], sc_.numerics.grid_n);
          worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
          ++pairs;
        }
    }
    r.measured = worst;
    r.detail = "twining-character Gram matrix, " + std::to_string(pairs) +
               " pair(s)";
    finish(r);
    return r;
  }

  CheckResult identity_character_value() {
    CheckResult r = base("identity_character_value");
    double worst = 0.0;
    for (const std::string& name : names_) {
      const Twist& tw = srf_.get(name);
      CharacterContext cc(tw);
      TorusPoint zero(tw.group.rho.size(), 0.0);
      for (const WeightCoords& lam : fixed_dominant_weights(tw, weight_cap())) {
        double dim = to_double(cc.orbit_dimension(lam));
        cplx v = cc.twining_character(lam, zero);
        worst = std::max(worst,
                         std::abs(v - cplx(dim)) / std::max(1.0, dim));
      }
    }
    r.measured = worst;
    r.detail = "value at the identity against the orbit-system dimension";
    finish(r);
    return r;
  }

  CheckResult untwisted_collapse() {
    CheckResult r = base("untwisted_collapse");
    if (names_.find("identity") == names_.end()) {
      skip(r, "the scenario names no identity twist");
      return r;
    }
    const Twist& tw = srf_.get("identity");
    CharacterContext cc(tw);
    MeasureContext mctx(tw);
    PhiloxStream rng(sc_.numerics.seed, 31);
    double worst = 0.0;
    for (const WeightCoords& lam : fixed_dominant_weights(tw, weight_cap()))
      for (int trial = 0; trial < 5; ++trial) {
        TorusPoint xi = tw.alcove_point(regular_coeffs(tw, mctx, rng));
        cplx a = cc.twining_character(lam, xi);
        cplx b = cc.weyl_character(lam, xi);
        worst = std::max(worst,
                         std::abs(a - b) / std::max(1.0, std::abs(b)));
      }
    r.measured = worst;
    r.detail = "twining equals the plain character for the identity twist";
    finish(r);
    return r;
  }

  CheckResult haar_mass() {
    CheckResult r = base("haar_mass");
    if (!has_surface_) {
      skip(r, "the scenario defines no surface");
      return r;
    }
    const Twist& tw = ctx_->target_twist();
    const int d = tw.fixed_dim();
    if (d > 2) {
      skip(r, "grid integration is implemented for fixed-torus rank <= 2");
      return r;
    }
    MeasureContext mctx(tw);
    const long n = d == 1 ? 2000 : 220;
    double cell = std::pow(1.0 / static_cast<double>(n), d);
    double total = 0.0;
    for (const std::vector<double>& coeffs : simplex_grid(d, n))
      total += haar_class_density(mctx, coeffs) * cell;
    r.measured = std::abs(total - 1.0);
    r.detail = "class-projected Haar mass over the target alcove";
    finish(r);
    return r;
  }

  CheckResult fusion_exactness() {
    CheckResult r = base("fusion_exactness");
    if (!has_surface_) {
      skip(r, "the scenario defines no surface");
      return r;
    }
    std::deque<SurfaceAssembly> pieces;
    for (const HandleTwists& h : srf_.assembly.handles)
      pieces.push_back({srf_.assembly.group, {h}, {}});
    for (const BoundaryClass& b : srf_.assembly.boundaries)
      pieces.push_back({srf_.assembly.group, {}, {b}});
    std::deque<ModuliContext> piece_ctx;
    for (const SurfaceAssembly& p : pieces) piece_ctx.emplace_back(p);
    std::vector<WeightCoords> adm =
        ctx_->admissible_weights(std::min<long>(sc_.numerics.level_cutoff, 4));
    if (adm.size() > 12) adm.resize(12);
    double worst = 0.0;
    for (const WeightCoords& lam : adm) {
      Rat dim = weyl_dimension(srf_.rs, lam);
      DHCoefficient acc;
      bool first = true;
      for (ModuliContext& pc : piece_ctx) {
        DHCoefficient c = pc.dh_coefficient(lam);
        acc = first ? c : fuse_coefficients(acc, c, dim);
        first = false;
      }
      DHCoefficient full = ctx_->dh_coefficient(lam);
      double m = std::abs(to_double(full.rational - acc.rational)) +
                 std::abs(full.numeric - acc.numeric) +
                 std::abs(full.volg_power - acc.volg_power) +
                 (full.vanishes != acc.vanishes ? 1.0 : 0.0) +
                 (full.degenerate != acc.degenerate ? 1.0 : 0.0);
      worst = std::max(worst, m);
    }
    r.measured = worst;
    r.detail = "piecewise fusion against the assembled table, " +
               std::to_string(adm.size()) + " weight(s)";
    finish(r);
    return r;
  }

  CheckResult sl3_oracle() {
    CheckResult r = base("sl3_oracle");
    if (!(sc_.series == Series::A && sc_.rank == 2 &&
          names_.find("flip") != names_.end())) {
      skip(r, "needs the A2 flip twist");
      return r;
    }
    const Twist& tw = srf_.get("flip");
    CharacterContext cc(tw);
    double worst = 0.0;
    for (long a = 0; a <= 2; ++a) {
      Sl3Oracle oracle(a);
      for (double u : {0.15, 0.35, 0.55, 0.75}) {
        TorusPoint xi = tw.alcove_point({u});
        cplx lhs = oracle.twining_trace(xi);
        cplx rhs = cc.twining_character(oracle.label(), xi);
        worst = std::max(worst,
                         std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
    }
    r.measured = worst;
    r.detail = "explicit tensor-space twining traces, weights (a,a), a<=2";
    finish(r);
    return r;
  }

  void mc_checks(std::vector<CheckResult>& out) {
    CheckResult repro = base("mc_reproducibility");
    CheckResult mass = base("mc_total_mass");
    std::string reason;
    if (!has_surface_)
      reason = "the scenario defines no surface";
    else if (!sc_.numerics.seed_given)
      reason = "the scenario gives no explicit seed";
    if (reason.empty()) {
      try {
        const long n = std::min<long>(sc_.numerics.mc_samples, 20000);
        const long cutoff = std::min<long>(sc_.numerics.level_cutoff, 24);
        McComparison a = mc_compare(*ctx_, n, 4, sc_.numerics.heat_t, cutoff,
                                    sc_.numerics.seed);
        McComparison b = mc_compare(*ctx_, n, 4, sc_.numerics.heat_t, cutoff,
                                    sc_.numerics.seed);
        double dmax = 0.0;
        if (a.bins.size() != b.bins.size()) {
          dmax = 1.0;
        } else {
          for (std::size_t i = 0; i < a.bins.size(); ++i) {
            dmax = std::max(dmax, std::abs(a.bins[i].mc_mass - b.bins[i].mc_mass));
            dmax = std::max(dmax, std::abs(a.bins[i].mc_stderr - b.bins[i].mc_stderr));
            dmax = std::max(dmax, std::abs(a.bins[i].series_mass - b.bins[i].series_mass));
            dmax = std::max(dmax, std::abs(a.bins[i].z - b.bins[i].z));
          }
        }
        double total = 0.0;
        for (const McBin& bin : a.bins) total += bin.mc_mass;
        repro.measured = dmax;
        repro.detail = "two identically seeded runs, " + std::to_string(n) +
                       " samples";
        mass.measured = std::abs(total - 1.0);
        mass.detail = "sampled masses sum to one";
      } catch (const std::invalid_argument& e) {
        reason = e.what();
      }
    }
    if (!reason.empty()) {
      skip(repro, reason);
      skip(mass, reason);
    }
    finish(repro);
    finish(mass);
    out.push_back(repro);
    out.push_back(mass);
  }

  const Scenario& sc_;
  AssembledSurface srf_;
  std::set<std::string> names_;
  bool has_surface_ = false;
  std::unique_ptr<ModuliContext> ctx_;
};

int run_verify(const Scenario& sc, const std::string& out_path) {
  VerifyRunner runner(sc);
  std::vector<CheckResult> checks = runner.run();
  bool all = true;
  json jchecks = json::array();
  for (const CheckResult& c : checks) {
    json j;
    j["name"] = c.name;
    j["skipped"] = c.skipped;
    if (c.skipped) {
      j["skip_reason"] = c.skip_reason;
    } else {
      j["passed"] = c.passed;
      j["measured"] = fmt17(c.measured);
      j["tolerance"] = fmt17(c.tolerance);
      j["detail"] = c.detail;
    }
    if (!c.skipped && !c.passed) all = false;
    jchecks.push_back(j);
  }
  json report;
  report["artifact"] = "verify_report";
  report["group"] = series_name(sc.series) + std::to_string(sc.rank);
  report["passed"] = all;
  report["checks"] = jchecks;
  std::string payload = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    int rc = write_file(out_path, payload);
    if (rc) return rc;
  }
  return all ? 0 : 1;
}

int dispatch_with_output(const std::string& out_path,
                         const std::function<int(std::ostream&)>& body) {
  if (out_path.empty()) return body(std::cout);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file " << out_path << "\n";
    return 1;
  }
  return body(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted-conjugation invariants and Duistermaat-Heckman data"};
  app.require_subcommand(1);

  std::string series_str = "A";
  int rank = 2;
  std::string twist_name = "identity";

  CLI::App* info = app.add_subcommand("info", "root system and twist report");
  info->add_option("--series", series_str, "series letter A..G")->required();
  info->add_option("--rank", rank, "rank 1..8")->required();
  info->add_option("--twist", twist_name, "identity|flip|triality");

  std::string scenario_path;
  std::string out_path;
  long cutoff_flag = -1;
  long grid_flag = 0;
  bool extrapolate = false;
  long gamma_order = 1;
  std::string at_str;
  long mc_bins = 8;

  CLI::App* twining = app.add_subcommand(
      "twining", "twining character table at the scenario boundary points");
  twining->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  twining->add_option("-o,--output", out_path, "write CSV here (default stdout)");

  CLI::App* classvol = app.add_subcommand(
      "class-volume", "Riemannian volumes of twisted conjugacy classes");
  classvol->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  classvol->add_option("-o,--output", out_path,
                       "write CSV here (default stdout)");

  CLI::App* dhc = app.add_subcommand(
      "dh-coeffs", "Fourier coefficients of the moment-map pushforward");
  dhc->add_option("scenario", scenario_path, "scenario JSON file")->required();
  dhc->add_option("-o,--output", out_path,
                  "output path (formats from the scenario's outputs list)");
  dhc->add_option("--cutoff", cutoff_flag,
                  "weight-level cutoff (default: numerics.level_cutoff)");

  CLI::App* density = app.add_subcommand(
      "density", "pushforward density on the target-twist alcove");
  density->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  density->add_option("-o,--output", out_path,
                      "output path (formats from the scenario's outputs list)");
  density->add_option("--grid", grid_flag, "grid points per alcove axis");
  density->add_option("--cutoff", cutoff_flag,
                      "weight-level cutoff (default: numerics.level_cutoff)");
  density->add_flag("--extrapolate", extrapolate,
                    "Richardson-extrapolate the heat time to zero");

  CLI::App* redvol = app.add_subcommand(
      "reduced-volume", "volumes of reduced spaces at target classes");
  redvol->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  redvol->add_option("-o,--output", out_path,
                     "output path (formats from the scenario's outputs list)");
  redvol
      ->add_option("--gamma-order", gamma_order,
                   "order of the principal stabilizer")
      ->required()
      ->check(CLI::PositiveNumber);
  redvol->add_option("--at", at_str,
                     "alcove coefficients of one evaluation class");
  redvol->add_option("--grid", grid_flag, "grid points per alcove axis");
  redvol->add_option("--cutoff", cutoff_flag,
                     "weight-level cutoff (default: numerics.level_cutoff)");
  redvol->add_flag("--extrapolate", extrapolate,
                   "Richardson-extrapolate the heat time to zero");

  CLI::App* mccheck = app.add_subcommand(
      "mc-check", "Monte Carlo histogram against the coefficient series");
  mccheck->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  mccheck->add_option("-o,--output", out_path,
                      "output path (formats from the scenario's outputs list)");
  mccheck->add_option("--bins", mc_bins, "bins per alcove axis")
      ->check(CLI::Range(1L, 1024L));

  CLI::App* verify = app.add_subcommand(
      "verify", "run the cross-module invariant battery for a scenario");
  verify->add_option("scenario", scenario_path, "scenario JSON file")
      ->required();
  verify->add_option("-o,--output", out_path,
                     "write the JSON report here (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (info->parsed()) {
      RootSystem rs =
          build_root_system(series_from_char(series_str.at(0)), rank);
      Twist tw = twist_by_name(rs, twist_name);
      std::cout << twist_report(tw).dump(2) << "\n";
      return 0;
    }
    if (twining->parsed()) {
      Scenario sc = load_scenario_file(scenario_path);
      return dispatch_with_output(
          out_path, [&](std::ostream& os) { return run_twining(sc, os); });
    }
    if (classvol->parsed()) {
      Scenario sc = load_scenario_file(scenario_path);
      return dispatch_with_output(
          out_path, [&](std::ostream& os) { return run_class_volume(sc, os); });
    }
    if (dhc->parsed()) {
      Scenario sc = load_scenario_file(scenario_path);
      return run_dh_coeffs(sc, cutoff_flag, out_path);
    }
    if (density->parsed()) {
      Scenario sc = load_scenario_file(scenario_path);
      return run_density(sc, grid_flag, cutoff_flag, extrapolate, out_path);
    }
    if (redvol->parsed()) {
      Scenario sc = load_scenario_file(scenario_path);
      return run_reduced_volume(sc, gamma_order, at_str, grid_flag,
                                cutoff_flag, extrapolate, out_path);
    }
    if (mccheck->parsed()) {
      Scenario sc = load_scenario_file(scenario_path);
      return run_mc_check(sc, mc_bins, out_path);
    }
    if (verify->parsed()) {
      Scenario sc = load_scenario_file(scenario_path);
      return run_verify(sc, out_path);
    }
  } catch (const ScenarioValidationError& e) {
    // what() already carries "<pointer>: <message>".
    std::cerr << "schema violation: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "unsupported combination: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
