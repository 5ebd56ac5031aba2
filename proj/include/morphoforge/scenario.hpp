#pragma once

// Scenario files: a root pose, a list of target poses and optional IK
// settings. Files are JSON with // comments allowed:
//
//   {
//     "name": "target-arm",
//     "n_modules": 6,
//     "root": {"xyz": [0, 0, 0], "rpy": [3.14159, 0, 0]},
//     "targets": [{"xyz": [0.1, 0.2, -0.4], "quat": [1, 0, 0, 0]}],
//     "ik": {"restarts": 10, "damping": 0.1}
//   }
//
// Orientations are either "rpy" (radians, R = Rz*Ry*Rx) or "quat" (w, x, y, z).

#include <cstddef>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "morphoforge/builtin_scenario_data.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/ik_solver.hpp"
#include "morphoforge/kinematics.hpp"

namespace morphoforge {

/// IK fields a scenario may pin; unset fields fall through to the caller's config.
struct IkOverrides {
  std::optional<double> damping;
  std::optional<int> max_iterations;
  std::optional<double> step_tolerance;
  std::optional<double> residual_tolerance;
  std::optional<int> restarts;

  IkConfig apply(IkConfig cfg) const {
    if (damping) cfg.damping = *damping;
    if (max_iterations) cfg.max_iterations = *max_iterations;
    if (step_tolerance) cfg.step_tolerance = *step_tolerance;
    if (residual_tolerance) cfg.residual_tolerance = *residual_tolerance;
    if (restarts) cfg.restarts = *restarts;
    return cfg;
  }

  bool empty() const {
    return !damping && !max_iterations && !step_tolerance && !residual_tolerance && !restarts;
  }

  friend bool operator==(const IkOverrides&, const IkOverrides&) = default;
};

struct Scenario {
  std::string name;
  Pose root;
  std::vector<Pose> targets;
  std::size_t n_modules = kDefaultModuleCount;
  IkOverrides ik;

  void validate() const {
    if (name.empty()) throw ValidationError("scenario name must be non-empty");
    if (targets.empty()) throw ValidationError("targets must be non-empty");
    if (n_modules == 0) throw ValidationError("n_modules must be positive");
    ik.apply(IkConfig{}).validate();
  }
};

inline bool poses_equal(const Pose& a, const Pose& b) {
  return a.position == b.position && a.orientation.coeffs() == b.orientation.coeffs();
}

inline bool operator==(const Scenario& a, const Scenario& b) {
  if (a.name != b.name || a.n_modules != b.n_modules || !(a.ik == b.ik)) return false;
  if (!poses_equal(a.root, b.root) || a.targets.size() != b.targets.size()) return false;
  for (std::size_t i = 0; i < a.targets.size(); ++i) {
    if (!poses_equal(a.targets[i], b.targets[i])) return false;
  }
  return true;
}

namespace detail {

using nlohmann::json;

inline std::vector<double> numbers(const json& j, std::size_t count, const std::string& field) {
  if (!j.is_array() || j.size() != count) {
    throw ValidationError(field + ": expected array of " + std::to_string(count) + " numbers");
  }
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ValidationError(field + ": expected array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline Pose pose_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field + ": expected object with xyz and rpy|quat");
  for (const auto& [key, value] : j.items()) {
    if (key != "xyz" && key != "rpy" && key != "quat") {
      throw ValidationError(field + "." + key + ": unknown field");
    }
  }
  Pose p;
  if (!j.contains("xyz")) throw ValidationError(field + ".xyz: missing");
  const auto xyz = numbers(j["xyz"], 3, field + ".xyz");
  p.position = Eigen::Vector3d(xyz[0], xyz[1], xyz[2]);
  const bool has_rpy = j.contains("rpy");
  const bool has_quat = j.contains("quat");
  if (has_rpy && has_quat) throw ValidationError(field + ": give either rpy or quat, not both");
  if (has_rpy) {
    const auto rpy = numbers(j["rpy"], 3, field + ".rpy");
    p.orientation = quat_from_rpy(rpy[0], rpy[1], rpy[2]);
  } else if (has_quat) {
    const auto q = numbers(j["quat"], 4, field + ".quat");
    Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
    if (!(quat.norm() > 1e-12)) throw ValidationError(field + ".quat: zero-norm quaternion");
    // Already-unit input is kept bit for bit so save/load is the identity.
    p.orientation = std::abs(quat.squaredNorm() - 1.0) > 1e-15 ? quat.normalized() : quat;
  }
  return p;
}

inline json pose_to_json(const Pose& p) {
  const auto& q = p.orientation;
  return json{{"xyz", {p.position.x(), p.position.y(), p.position.z()}},
              {"quat", {q.w(), q.x(), q.y(), q.z()}}};
}

template <class T>
T get_field(const json& j, const std::string& key, const std::string& field) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(field + "." + key + ": wrong type");
  }
}

}  // namespace detail

/// Parses scenario text; `origin` prefixes every error message.
inline Scenario parse_scenario(std::string_view text, const std::string& origin = "scenario") {
  using detail::json;
  json root;
  try {
    root = json::parse(text, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  if (!root.is_object()) throw ValidationError(origin + ": top level must be an object");

  Scenario s;
  for (const auto& [key, value] : root.items()) {
    if (key != "name" && key != "root" && key != "targets" && key != "n_modules" && key != "ik" &&
        key != "description") {
      throw ValidationError(origin + ": " + key + ": unknown field");
    }
  }
  try {
    if (!root.contains("name") || !root["name"].is_string()) {
      throw ValidationError("name: expected string");
    }
    s.name = root["name"].get<std::string>();
    if (root.contains("n_modules")) {
      const auto& n = root["n_modules"];
      if (!n.is_number_integer() || n.get<long long>() < 1) {
        throw ValidationError("n_modules: expected positive integer");
      }
      s.n_modules = n.get<std::size_t>();
    }
    if (root.contains("root")) s.root = detail::pose_from_json(root["root"], "root");
    if (!root.contains("targets") || !root["targets"].is_array()) {
      throw ValidationError("targets: expected array");
    }
    const auto& targets = root["targets"];
    for (std::size_t i = 0; i < targets.size(); ++i) {
      s.targets.push_back(
          detail::pose_from_json(targets[i], "targets[" + std::to_string(i) + "]"));
    }
    if (root.contains("ik")) {
      const auto& ik = root["ik"];
      if (!ik.is_object()) throw ValidationError("ik: expected object");
      for (const auto& [key, value] : ik.items()) {
        if (key == "damping") {
          s.ik.damping = detail::get_field<double>(ik, key, "ik");
        } else if (key == "max_iterations") {
          s.ik.max_iterations = detail::get_field<int>(ik, key, "ik");
        } else if (key == "step_tolerance") {
          s.ik.step_tolerance = detail::get_field<double>(ik, key, "ik");
        } else if (key == "residual_tolerance") {
          s.ik.residual_tolerance = detail::get_field<double>(ik, key, "ik");
        } else if (key == "restarts") {
          s.ik.restarts = detail::get_field<int>(ik, key, "ik");
        } else {
          throw ValidationError("ik." + key + ": unknown field");
        }
      }
    }
    s.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return s;
}

inline std::string scenario_to_json(const Scenario& s) {
  using detail::json;
  json j;
  j["name"] = s.name;
  j["n_modules"] = s.n_modules;
  j["root"] = detail::pose_to_json(s.root);
  j["targets"] = json::array();
  for (const auto& t : s.targets) j["targets"].push_back(detail::pose_to_json(t));
  if (!s.ik.empty()) {
    json ik = json::object();
    if (s.ik.damping) ik["damping"] = *s.ik.damping;
    if (s.ik.max_iterations) ik["max_iterations"] = *s.ik.max_iterations;
    if (s.ik.step_tolerance) ik["step_tolerance"] = *s.ik.step_tolerance;
    if (s.ik.residual_tolerance) ik["residual_tolerance"] = *s.ik.residual_tolerance;
    if (s.ik.restarts) ik["restarts"] = *s.ik.restarts;
    j["ik"] = ik;
  }
  return j.dump(2) + "\n";
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << scenario_to_json(s);
  if (!out) throw IoError(path, "write failed");
}

/// Hand-authored approximations of the ARM, LEG and WIDE target sets. The
/// numeric poses live in data/scenarios/*.json and are compiled in.
inline std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  for (const auto& [name, text] : kBuiltinScenarioSources) {
    out.push_back(parse_scenario(text, std::string("builtin:") + std::string(name)));
  }
  return out;
}

inline std::optional<Scenario> find_builtin_scenario(std::string_view name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

/// Builtin name or path to a scenario file.
inline Scenario resolve_scenario(const std::string& name_or_path) {
  if (auto s = find_builtin_scenario(name_or_path)) return *s;
  return load_scenario(name_or_path);
}

}  // namespace morphoforge
