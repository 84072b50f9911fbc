#include "scenario.hpp"

#include <fstream>
#include <set>

namespace twistdh {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
  throw ScenarioValidationError(ptr, msg);
}

void expect_keys(const json& obj, const std::string& ptr,
                 const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(ptr + "/" + it.key(), "unknown field");
}

const json& field(const json& obj, const std::string& ptr,
                  const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ptr + "/" + key, "required field is missing");
  return *it;
}

long integer_in(const json& v, const std::string& ptr, long lo, long hi) {
  if (!v.is_number_integer())
    fail(ptr, "expected an integer");
  long x = v.get<long>();
  if (x < lo || x > hi)
    fail(ptr, "value " + std::to_string(x) + " outside [" +
                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

double number_in(const json& v, const std::string& ptr, double lo,
                 double hi) {
  if (!v.is_number()) fail(ptr, "expected a number");
  double x = v.get<double>();
  if (!(x >= lo && x <= hi))
    fail(ptr, "value outside [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
  return x;
}

std::string twist_name_at(const json& v, const std::string& ptr) {
  if (!v.is_string()) fail(ptr, "expected a twist name string");
  std::string s = v.get<std::string>();
  if (s != "identity" && s != "flip" && s != "triality")
    fail(ptr, "unknown twist name '" + s +
                  "' (expected identity, flip, or triality)");
  return s;
}

SurfaceSpec parse_surface(const json& v, const std::string& ptr) {
  if (!v.is_object()) fail(ptr, "expected an object");
  expect_keys(v, ptr, {"h", "b", "handle_twists", "boundaries"});
  SurfaceSpec out;
  out.handles = integer_in(field(v, ptr, "h"), ptr + "/h", 0, 64);
  out.boundary_count = integer_in(field(v, ptr, "b"), ptr + "/b", 0, 64);
  if (out.handles > 0 || v.contains("handle_twists")) {
    const json& ht = field(v, ptr, "handle_twists");
    if (!ht.is_array()) fail(ptr + "/handle_twists", "expected an array");
    if (static_cast<long>(ht.size()) != out.handles)
      fail(ptr + "/handle_twists",
           "expected exactly h = " + std::to_string(out.handles) +
               " entries");
    for (std::size_t i = 0; i < ht.size(); ++i) {
      std::string hptr = ptr + "/handle_twists/" + std::to_string(i);
      const json& entry = ht[i];
      if (!entry.is_object())
        fail(hptr, "expected an object with fields tau and kappa");
      expect_keys(entry, hptr, {"tau", "kappa"});
      HandleTwistNames pair;
      pair.tau = twist_name_at(field(entry, hptr, "tau"), hptr + "/tau");
      pair.kappa = twist_name_at(field(entry, hptr, "kappa"), hptr + "/kappa");
      out.handle_twists.push_back(std::move(pair));
    }
  }
  if (out.boundary_count > 0 || v.contains("boundaries")) {
    const json& bs = field(v, ptr, "boundaries");
    if (!bs.is_array()) fail(ptr + "/boundaries", "expected an array");
    if (static_cast<long>(bs.size()) != out.boundary_count)
      fail(ptr + "/boundaries",
           "expected exactly b = " + std::to_string(out.boundary_count) +
               " entries");
    for (std::size_t i = 0; i < bs.size(); ++i) {
      std::string bptr = ptr + "/boundaries/" + std::to_string(i);
      const json& entry = bs[i];
      if (!entry.is_object()) fail(bptr, "expected an object");
      expect_keys(entry, bptr, {"twist", "alcove_point"});
      BoundarySpec spec;
      spec.twist = twist_name_at(field(entry, bptr, "twist"), bptr + "/twist");
      const json& pt = field(entry, bptr, "alcove_point");
      if (!pt.is_array() || pt.empty())
        fail(bptr + "/alcove_point", "expected a non-empty array of numbers");
      for (std::size_t k = 0; k < pt.size(); ++k)
        spec.alcove_point.push_back(number_in(
            pt[k], bptr + "/alcove_point/" + std::to_string(k), -64.0, 64.0));
      out.boundaries.push_back(std::move(spec));
    }
  }
  return out;
}

NumericsSpec parse_numerics(const json& v, const std::string& ptr) {
  if (!v.is_object()) fail(ptr, "expected an object");
  expect_keys(v, ptr,
              {"grid_n", "heat_t", "level_cutoff", "mc_samples", "seed",
               "bandwidth"});
  NumericsSpec out;
  if (v.contains("grid_n"))
    out.grid_n = integer_in(v["grid_n"], ptr + "/grid_n", 2, 1 << 20);
  if (v.contains("heat_t"))
    out.heat_t = number_in(v["heat_t"], ptr + "/heat_t", 1e-12, 1e6);
  if (v.contains("level_cutoff"))
    out.level_cutoff =
        integer_in(v["level_cutoff"], ptr + "/level_cutoff", 0, 64);
  if (v.contains("mc_samples"))
    out.mc_samples =
        integer_in(v["mc_samples"], ptr + "/mc_samples", 1, 1L << 40);
  if (v.contains("seed")) {
    const json& s = v["seed"];
    if (!s.is_number_unsigned() && !s.is_number_integer())
      fail(ptr + "/seed", "expected a non-negative integer");
    if (s.is_number_integer() && s.get<long long>() < 0)
      fail(ptr + "/seed", "expected a non-negative integer");
    out.seed = s.get<std::uint64_t>();
    out.seed_given = true;
  }
  if (v.contains("bandwidth"))
    out.bandwidth = number_in(v["bandwidth"], ptr + "/bandwidth", 0.0, 1e6);
  return out;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) fail("", "scenario document must be a JSON object");
  expect_keys(doc, "",
              {"group", "twists", "surface", "numerics", "outputs",
               "tolerances"});
  Scenario sc;

  const json& group = field(doc, "", "group");
  if (!group.is_object()) fail("/group", "expected an object");
  expect_keys(group, "/group", {"series", "rank"});
  const json& series = field(group, "/group", "series");
  if (!series.is_string() || series.get<std::string>().size() != 1)
    fail("/group/series", "expected a single letter A..G");
  try {
    sc.series = series_from_char(series.get<std::string>()[0]);
  } catch (const std::exception&) {
    fail("/group/series", "expected a single letter A..G");
  }
  sc.rank =
      static_cast<int>(integer_in(field(group, "/group", "rank"),
                                  "/group/rank", 1, 8));

  if (doc.contains("twists")) {
    const json& tw = doc["twists"];
    if (!tw.is_array()) fail("/twists", "expected an array of twist names");
    for (std::size_t i = 0; i < tw.size(); ++i)
      sc.twists.push_back(
          twist_name_at(tw[i], "/twists/" + std::to_string(i)));
  }
  if (doc.contains("surface"))
    sc.surface = parse_surface(doc["surface"], "/surface");
  if (doc.contains("numerics"))
    sc.numerics = parse_numerics(doc["numerics"], "/numerics");
  if (doc.contains("outputs")) {
    const json& out = doc["outputs"];
    if (!out.is_array()) fail("/outputs", "expected an array");
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::string ptr = "/outputs/" + std::to_string(i);
      if (!out[i].is_string()) fail(ptr, "expected a string");
      std::string kind = out[i].get<std::string>();
      if (kind != "csv" && kind != "json")
        fail(ptr, "unknown output kind '" + kind + "'");
      sc.outputs.push_back(kind);
    }
  }
  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    if (!tol.is_object()) fail("/tolerances", "expected an object");
    for (auto it = tol.begin(); it != tol.end(); ++it)
      sc.tolerances[it.key()] = number_in(
          *it, "/tolerances/" + it.key(), 0.0, 1e9);
  }

  // Whether a named twist exists for the chosen group is checked when the
  // twist is constructed, not here: that mismatch is an unsupported
  // combination, not a malformed document.
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("", "cannot open scenario file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    fail("", std::string("JSON parse error: ") + e.what());
  }
  return parse_scenario(doc);
}

}  // namespace twistdh
