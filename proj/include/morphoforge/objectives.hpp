#pragma once

// The two minimization objectives of a design:
//   task    sum over targets of the L2 norm of the IK residual
//   design  weighted joint count (orthogonal modules count twice) + total length

#include <bit>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "morphoforge/ik_solver.hpp"
#include "morphoforge/joint_module.hpp"
#include "morphoforge/kinematics.hpp"
#include "morphoforge/scenario.hpp"

namespace morphoforge {

struct DesignCost {
  double e_design = 0.0;
  int joint = 0;
  double length = 0.0;
};

struct EvaluationResult {
  double e_task = 0.0;
  double e_design = 0.0;
  std::vector<double> per_target;
  int e_design_joint = 0;
  double e_design_length = 0.0;
};

struct TaskEvaluation {
  double e_task = 0.0;
  std::vector<double> per_target;
  std::vector<IkResult> solutions;
};

inline TaskEvaluation eval_task(const RobotDesign& d, const Scenario& scenario,
                                const IkConfig& ik) {
  TaskEvaluation out;
  out.per_target.reserve(scenario.targets.size());
  out.solutions.reserve(scenario.targets.size());
  for (const auto& target : scenario.targets) {
    auto r = solve_ik(d, scenario.root, target, ik);
    out.per_target.push_back(r.residual_norm);
    out.solutions.push_back(std::move(r));
  }
  for (double e : out.per_target) out.e_task += e;
  return out;
}

inline DesignCost eval_design(const RobotDesign& d) {
  DesignCost c;
  for (const auto& m : d.modules()) {
    c.joint += static_cast<int>(m.dof());
    c.length += m.length();
  }
  c.e_design = c.joint + c.length;
  return c;
}

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Canonical byte string of a genome: kind bytes then IEEE-754 gene bits.
inline std::string genome_bytes(const Genome& g) {
  std::string out;
  out.reserve(g.size() * 9);
  for (JointKind k : g.joints) out.push_back(static_cast<char>(k));
  for (double c : g.length_genes) {
    const auto bits = std::bit_cast<std::uint64_t>(c);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
  return out;
}

inline std::uint64_t genome_hash(const Genome& g) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : genome_bytes(g)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// IK seed for one genome in one run; independent of evaluation order.
inline std::uint64_t ik_seed_for(std::uint64_t run_seed, const Genome& g) {
  return mix64(mix64(run_seed) ^ genome_hash(g));
}

/// Evaluates genomes against one scenario. Safe to call concurrently; the
/// optional memo cache only changes speed, never results.
class Evaluator {
 public:
  Evaluator(Scenario scenario, IkConfig ik, std::uint64_t run_seed, bool memoize = false)
      : scenario_(std::move(scenario)), ik_(ik), run_seed_(run_seed), memoize_(memoize) {
    scenario_.validate();
    ik_.validate();
  }

  const Scenario& scenario() const noexcept { return scenario_; }
  const IkConfig& ik_config() const noexcept { return ik_; }
  std::uint64_t run_seed() const noexcept { return run_seed_; }

  EvaluationResult operator()(const Genome& g) const {
    std::string key;
    if (memoize_) {
      key = genome_bytes(g);
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto result = evaluate_uncached(g);
    if (memoize_) {
      std::lock_guard lock(mutex_);
      cache_.emplace(std::move(key), result);
    }
    return result;
  }

  std::size_t cache_size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
  }

 private:
  EvaluationResult evaluate_uncached(const Genome& g) const {
    const RobotDesign d = decode_genome(g);
    IkConfig ik = ik_;
    ik.seed = ik_seed_for(run_seed_, g);
    auto task = eval_task(d, scenario_, ik);
    const auto cost = eval_design(d);
    EvaluationResult r;
    r.e_task = task.e_task;
    r.per_target = std::move(task.per_target);
    r.e_design = cost.e_design;
    r.e_design_joint = cost.joint;
    r.e_design_length = cost.length;
    return r;
  }

  Scenario scenario_;
  IkConfig ik_;
  std::uint64_t run_seed_;
  bool memoize_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, EvaluationResult> cache_;
};

inline EvaluationResult evaluate(const Genome& g, const Scenario& scenario, const IkConfig& ik,
                                 std::uint64_t run_seed) {
  return Evaluator(scenario, ik, run_seed)(g);
}

}  // namespace morphoforge
