#pragma once

// Joint module catalogue, design genome and genome decoding.
//
// A robot is a serial chain of N joint modules, proximal to distal. Every
// module has a length L measured along the chain axis (local +z) in the
// all-zeros configuration, so the zero configuration is a straight line.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morphoforge/errors.hpp"

namespace morphoforge {

inline constexpr std::size_t kDefaultModuleCount = 6;
inline constexpr std::size_t kJointKindCount = 6;

enum class JointKind : std::uint8_t {
  Roll = 0,        // R: rotation about local +x
  Pitch = 1,       // P: rotation about local +y
  Yaw = 2,         // Y: rotation about local +z (twist)
  Orthogonal = 3,  // O: roll then pitch, co-located
  Prismatic = 4,   // S: translation along local +z
  Fixed = 5,       // F: rigid link
};

inline constexpr std::array<JointKind, kJointKindCount> kAllJointKinds = {
    JointKind::Roll,       JointKind::Pitch,     JointKind::Yaw,
    JointKind::Orthogonal, JointKind::Prismatic, JointKind::Fixed};

constexpr char kind_letter(JointKind kind) {
  constexpr std::array<char, kJointKindCount> letters = {'R', 'P', 'Y', 'O', 'S', 'F'};
  return letters[static_cast<std::size_t>(kind)];
}

constexpr std::optional<JointKind> kind_from_letter(char c) {
  for (JointKind k : kAllJointKinds) {
    if (kind_letter(k) == c) return k;
  }
  return std::nullopt;
}

struct LengthRange {
  double min;
  double max;
};

/// Admissible module length in meters.
constexpr LengthRange length_range(JointKind kind) {
  switch (kind) {
    case JointKind::Yaw:
    case JointKind::Fixed:
      return {0.01, 0.5};
    default:
      return {0.1, 0.5};
  }
}

inline constexpr double kRollPitchLimit = 0.75 * std::numbers::pi;
inline constexpr double kYawLimit = 2.0 * std::numbers::pi;

enum class AxisType : std::uint8_t { Roll, Pitch, Yaw, Prismatic };

constexpr bool is_rotational(AxisType t) { return t != AxisType::Prismatic; }

/// One actuated degree of freedom. Radians for rotational axes, meters for prismatic.
struct Axis {
  AxisType type;
  double lower;
  double upper;
};

class JointModule {
 public:
  /// Throws ValidationError if the length is outside the kind's range.
  JointModule(JointKind kind, double length) : kind_(kind), length_(length) {
    const auto r = length_range(kind);
    // Tolerate the last ulp of the affine decode map.
    constexpr double slack = 1e-12;
    if (!(length >= r.min - slack && length <= r.max + slack)) {
      throw ValidationError(std::string("length ") + std::to_string(length) + " for module " +
                            kind_letter(kind) + " outside [" + std::to_string(r.min) + ", " +
                            std::to_string(r.max) + "]");
    }
  }

  JointKind kind() const noexcept { return kind_; }
  double length() const noexcept { return length_; }

  std::size_t dof() const noexcept {
    switch (kind_) {
      case JointKind::Fixed:
        return 0;
      case JointKind::Orthogonal:
        return 2;
      default:
        return 1;
    }
  }

  /// Axes in the order their coordinates appear in a joint state.
  std::vector<Axis> axes() const {
    switch (kind_) {
      case JointKind::Roll:
        return {{AxisType::Roll, -kRollPitchLimit, kRollPitchLimit}};
      case JointKind::Pitch:
        return {{AxisType::Pitch, -kRollPitchLimit, kRollPitchLimit}};
      case JointKind::Yaw:
        return {{AxisType::Yaw, -kYawLimit, kYawLimit}};
      case JointKind::Orthogonal:
        return {{AxisType::Roll, -kRollPitchLimit, kRollPitchLimit},
                {AxisType::Pitch, -kRollPitchLimit, kRollPitchLimit}};
      case JointKind::Prismatic:
        return {{AxisType::Prismatic, 0.0, length_}};
      case JointKind::Fixed:
        return {};
    }
    return {};
  }

  /// Fixed modules report the degenerate range [0, 0].
  std::pair<double, double> limits() const {
    const auto a = axes();
    if (a.empty()) return {0.0, 0.0};
    return {a.front().lower, a.front().upper};
  }

  /// Largest distance this module can span, used as a reach bound.
  double max_extent() const noexcept {
    return kind_ == JointKind::Prismatic ? 2.0 * length_ : length_;
  }

  friend bool operator==(const JointModule&, const JointModule&) = default;

 private:
  JointKind kind_;
  double length_;
};

/// Mixed categorical/continuous search representation.
struct Genome {
  std::vector<JointKind> joints;
  std::vector<double> length_genes;  // each in [0, 1]

  std::size_t size() const noexcept { return joints.size(); }

  friend bool operator==(const Genome&, const Genome&) = default;
};

/// Ordered modules, proximal to distal.
class RobotDesign {
 public:
  RobotDesign() = default;
  explicit RobotDesign(std::vector<JointModule> modules) : modules_(std::move(modules)) {}

  std::span<const JointModule> modules() const noexcept { return modules_; }
  std::size_t size() const noexcept { return modules_.size(); }
  const JointModule& operator[](std::size_t i) const { return modules_[i]; }

  std::size_t dof() const noexcept {
    std::size_t n = 0;
    for (const auto& m : modules_) n += m.dof();
    return n;
  }

  double total_length() const noexcept {
    double s = 0.0;
    for (const auto& m : modules_) s += m.length();
    return s;
  }

  /// All actuated axes flattened in joint-state order.
  std::vector<Axis> axes() const {
    std::vector<Axis> out;
    out.reserve(dof());
    for (const auto& m : modules_) {
      for (const auto& a : m.axes()) out.push_back(a);
    }
    return out;
  }

  /// Kind letters concatenated, e.g. "YPSFFF".
  std::string joint_string() const {
    std::string s;
    s.reserve(modules_.size());
    for (const auto& m : modules_) s.push_back(kind_letter(m.kind()));
    return s;
  }

  void push_back(const JointModule& m) { modules_.push_back(m); }

  friend bool operator==(const RobotDesign&, const RobotDesign&) = default;

 private:
  std::vector<JointModule> modules_;
};

inline std::size_t design_dof(const RobotDesign& d) { return d.dof(); }

inline double decode_length(JointKind kind, double gene) {
  const auto r = length_range(kind);
  return (r.max - r.min) * gene + r.min;
}

/// Inverse of decode_length; the result is clamped into [0, 1].
inline double encode_length(JointKind kind, double length) {
  const auto r = length_range(kind);
  const double c = (length - r.min) / (r.max - r.min);
  return c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c);
}

inline void validate_genome(const Genome& g) {
  if (g.joints.size() != g.length_genes.size()) {
    throw ValidationError("genome has " + std::to_string(g.joints.size()) + " joint genes but " +
                          std::to_string(g.length_genes.size()) + " length genes");
  }
  if (g.joints.empty()) throw ValidationError("genome must contain at least one module");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double c = g.length_genes[i];
    if (!(c >= 0.0 && c <= 1.0)) {
      throw ValidationError("length gene " + std::to_string(i) + " = " + std::to_string(c) +
                            " outside [0, 1]");
    }
    if (static_cast<std::size_t>(g.joints[i]) >= kJointKindCount) {
      throw ValidationError("joint gene " + std::to_string(i) + " is not a valid kind");
    }
  }
}

inline RobotDesign decode_genome(const Genome& g) {
  validate_genome(g);
  std::vector<JointModule> modules;
  modules.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    modules.emplace_back(g.joints[i], decode_length(g.joints[i], g.length_genes[i]));
  }
  return RobotDesign(std::move(modules));
}

inline Genome encode_design(const RobotDesign& d) {
  Genome g;
  for (const auto& m : d.modules()) {
    g.joints.push_back(m.kind());
    g.length_genes.push_back(encode_length(m.kind(), m.length()));
  }
  return g;
}

template <class Rng>
Genome random_genome(Rng& rng, std::size_t n_modules = kDefaultModuleCount) {
  std::uniform_int_distribution<int> kind(0, static_cast<int>(kJointKindCount) - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Genome g;
  g.joints.reserve(n_modules);
  g.length_genes.reserve(n_modules);
  for (std::size_t i = 0; i < n_modules; ++i) {
    g.joints.push_back(static_cast<JointKind>(kind(rng)));
    g.length_genes.push_back(unit(rng));
  }
  return g;
}

inline Genome random_genome(std::uint64_t seed, std::size_t n_modules = kDefaultModuleCount) {
  std::mt19937_64 rng(seed);
  return random_genome(rng, n_modules);
}

/// Parses "KIND:LENGTH,..." such as "Y:0.3,P:0.25,S:0.2". Lengths are meters
/// and must lie in the kind's range; errors name the offending entry.
inline RobotDesign parse_design(std::string_view text) {
  RobotDesign d;
  std::size_t pos = 0;
  std::size_t index = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item(text.substr(pos, comma - pos));
    const std::string where = "design entry " + std::to_string(index) + " ('" + item + "')";
    const auto colon = item.find(':');
    if (colon != 1) throw ValidationError(where + ": expected KIND:LENGTH");
    const auto kind = kind_from_letter(item[0]);
    if (!kind) throw ValidationError(where + ": unknown joint kind (use R, P, Y, O, S or F)");
    double length = 0.0;
    try {
      std::size_t used = 0;
      length = std::stod(item.substr(2), &used);
      if (used != item.size() - 2) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ValidationError(where + ": length is not a number");
    }
    try {
      d.push_back(JointModule(*kind, length));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    pos = comma + 1;
    ++index;
  }
  return d;
}

}  // namespace morphoforge
