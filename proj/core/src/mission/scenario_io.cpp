#include "ergoplan/mission/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ergoplan/error.hpp"

namespace ergoplan::mission {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& what) { throw InvalidScenario(key + ": " + what); }

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) bad(path.empty() ? key : path + "." + key, "missing required key");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  return v.get<double>();
}

Vec3 point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) bad(path, "expected an array of 3 numbers");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]"), number(v[2], path + "[2]")};
}

Box3 box(const json& v, const std::string& path) {
  const Vec3 lo = point(require(v, "lower", path), path + ".lower");
  const Vec3 hi = point(require(v, "upper", path), path + ".upper");
  for (int j = 0; j < 3; ++j) {
    if (!(lo[j] < hi[j])) bad(path, "lower must be below upper on every axis");
  }
  return Box3{lo, hi};
}

Vec3 per_axis(const json& v, const std::string& path) {
  if (v.is_number()) {
    const double x = v.get<double>();
    return {x, x, x};
  }
  return point(v, path);
}

std::string string_value(const json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

double optional_number(const json& obj, const char* key, double fallback, const std::string& path) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, path + "." + key);
}

Operator parse_operator(const json& v, std::size_t index, PrefCombinator default_combinator) {
  const std::string path = "operators[" + std::to_string(index) + "]";
  if (!v.is_object()) bad(path, "expected an object");
  std::string id = v.contains("id") ? string_value(v["id"], path + ".id") : "HO" + std::to_string(index + 1);
  const Vec3 position = point(require(v, "position", path), path + ".position");
  const double heading = number(require(v, "heading_rad", path), path + ".heading_rad");

  const json& prefs = require(v, "preferences", path);
  if (!prefs.is_array() || prefs.empty()) bad(path + ".preferences", "expected a non-empty array");
  std::vector<Direction> dirs;
  for (std::size_t i = 0; i < prefs.size(); ++i) {
    const std::string s = string_value(prefs[i], path + ".preferences[" + std::to_string(i) + "]");
    try {
      dirs.push_back(direction_from_string(s));
    } catch (const InvalidScenario& e) {
      bad(path + ".preferences[" + std::to_string(i) + "]", e.what());
    }
  }
  PrefCombinator comb = default_combinator;
  if (v.contains("pref_combinator")) {
    try {
      comb = combinator_from_string(string_value(v["pref_combinator"], path + ".pref_combinator"));
    } catch (const InvalidScenario& e) {
      bad(path + ".pref_combinator", e.what());
    }
  }

  OperatorGeometry geom;
  geom.reach = optional_number(v, "reach", geom.reach, path);
  geom.handover_size = optional_number(v, "handover_size", geom.handover_size, path);
  if (v.contains("behind")) {
    const json& b = v["behind"];
    if (!b.is_object()) bad(path + ".behind", "expected an object");
    geom.behind_depth = optional_number(b, "depth", geom.behind_depth, path + ".behind");
    geom.behind_width = optional_number(b, "width", geom.behind_width, path + ".behind");
    geom.behind_height = optional_number(b, "height", geom.behind_height, path + ".behind");
  }

  Operator op;
  try {
    op = make_operator(id, position, heading, dirs, comb, geom);
  } catch (const HeadingNotAxisAligned& e) {
    throw HeadingNotAxisAligned(path + ".heading_rad: " + e.what());
  } catch (const InvalidScenario& e) {
    bad(path, e.what());
  }
  if (v.contains("handover_box")) op.handover_box = box(v["handover_box"], path + ".handover_box");
  if (v.contains("behind_box")) op.behind_box = box(v["behind_box"], path + ".behind_box");
  if (v.contains("preference_boxes")) {
    const json& pb = v["preference_boxes"];
    if (!pb.is_object()) bad(path + ".preference_boxes", "expected an object keyed by direction");
    for (auto it = pb.begin(); it != pb.end(); ++it) {
      const std::string ppath = path + ".preference_boxes." + it.key();
      Direction d{};
      try {
        d = direction_from_string(it.key());
      } catch (const InvalidScenario& e) {
        bad(ppath, e.what());
      }
      bool found = false;
      for (auto& p : op.preferences) {
        if (p.direction == d) {
          p.box = box(it.value(), ppath);
          found = true;
        }
      }
      if (!found) bad(ppath, "direction is not listed in preferences");
    }
  }
  return op;
}

Scenario from_json(const json& doc) {
  if (!doc.is_object()) bad("(root)", "expected an object");
  Scenario s;
  s.workspace = box(require(doc, "workspace", ""), "workspace");

  if (doc.contains("obstacles")) {
    const json& obs = doc["obstacles"];
    if (!obs.is_array()) bad("obstacles", "expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) s.obstacles.push_back(box(obs[i], "obstacles[" + std::to_string(i) + "]"));
  }

  PrefCombinator default_comb = PrefCombinator::kAny;
  if (doc.contains("pref_combinator")) {
    try {
      default_comb = combinator_from_string(string_value(doc["pref_combinator"], "pref_combinator"));
    } catch (const InvalidScenario& e) {
      bad("pref_combinator", e.what());
    }
  }

  const json& ops = require(doc, "operators", "");
  if (!ops.is_array()) bad("operators", "expected an array");
  for (std::size_t i = 0; i < ops.size(); ++i) s.operators.push_back(parse_operator(ops[i], i, default_comb));

  if (doc.contains("refill_stations")) {
    const json& rss = doc["refill_stations"];
    if (!rss.is_array()) bad("refill_stations", "expected an array");
    for (std::size_t i = 0; i < rss.size(); ++i) {
      const std::string path = "refill_stations[" + std::to_string(i) + "]";
      const json& r = rss[i];
      RefillStation rs;
      rs.id = r.contains("id") ? string_value(r["id"], path + ".id") : "RS" + std::to_string(i + 1);
      rs.box = box(r, path);
      rs.home = r.contains("home") ? box(r["home"], path + ".home") : rs.box;
      s.refill_stations.push_back(std::move(rs));
    }
  }

  s.depot = point(require(doc, "depot", ""), "depot");
  const json& cap = require(doc, "capacity", "");
  if (!cap.is_number_integer() || cap.get<long long>() < 1) bad("capacity", "expected a positive integer");
  s.capacity = static_cast<int>(cap.get<long long>());

  const json& times = require(doc, "times", "");
  s.mission_time = number(require(times, "T_N", "times"), "times.T_N");
  s.handover_time = number(require(times, "T_han", "times"), "times.T_han");
  s.refill_time = number(require(times, "T_rs", "times"), "times.T_rs");
  const double ts = number(require(times, "T_s", "times"), "times.T_s");
  try {
    s.grid = stl::TimeGrid::from_horizon(ts, s.mission_time);
  } catch (const std::invalid_argument& e) {
    bad("times", e.what());
  }

  const json& limits = require(doc, "limits", "");
  s.limits.v_max = per_axis(require(limits, "v_max", "limits"), "limits.v_max");
  s.limits.a_max = per_axis(require(limits, "a_max", "limits"), "limits.a_max");

  s.energy_weight = doc.contains("energy_weight") ? number(doc["energy_weight"], "energy_weight") : 0.1;
  s.validate();
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  return from_json(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace ergoplan::mission
