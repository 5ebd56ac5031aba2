#pragma once

// NSGA-II over the mixed genome: categorical joint genes and continuous
// length genes in [0, 1].
//
// Generational (mu + lambda) loop with lambda = mu. Offspring of one
// generation may be evaluated on several threads; results are merged by
// evaluation index so the run depends only on the seed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "morphoforge/archive.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/joint_module.hpp"
#include "morphoforge/objectives.hpp"
#include "morphoforge/pareto.hpp"

namespace morphoforge {

struct Individual {
  Genome genome;
  ObjectivePair objectives;
  std::size_t eval_index = 0;
  int rank = -1;
  double crowding = 0.0;
};

struct OptimizerConfig {
  std::size_t population_size = 100;
  std::size_t total_evaluations = 10000;
  double crossover_probability = 0.9;
  double mutation_probability_categorical = 1.0 / 6.0;
  double mutation_probability_continuous = 1.0 / 6.0;
  double sbx_eta = 15.0;
  double pm_eta = 20.0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  void validate() const {
    if (population_size == 0 || population_size % 2 != 0) {
      throw ValidationError("population size must be a positive even integer");
    }
    if (total_evaluations < population_size) {
      throw ValidationError("evaluations (" + std::to_string(total_evaluations) +
                            ") must be >= population size (" + std::to_string(population_size) +
                            ")");
    }
    auto prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(name) + " must be in [0, 1]");
    };
    prob(crossover_probability, "crossover probability");
    prob(mutation_probability_categorical, "categorical mutation probability");
    prob(mutation_probability_continuous, "continuous mutation probability");
    if (!(sbx_eta > 0.0)) throw ValidationError("sbx eta must be > 0");
    if (!(pm_eta > 0.0)) throw ValidationError("polynomial mutation eta must be > 0");
    if (workers == 0) throw ValidationError("workers must be >= 1");
  }

  nlohmann::json to_json() const {
    return {{"population_size", population_size},
            {"total_evaluations", total_evaluations},
            {"crossover_probability", crossover_probability},
            {"mutation_probability_categorical", mutation_probability_categorical},
            {"mutation_probability_continuous", mutation_probability_continuous},
            {"sbx_eta", sbx_eta},
            {"pm_eta", pm_eta},
            {"seed", seed}};
  }
};

struct ProgressEvent {
  std::size_t evaluations = 0;
  double best_task = 0.0;
  std::size_t front_size = 0;
};

using ProgressSink = std::function<void(const ProgressEvent&)>;
using Rng = std::mt19937_64;

/// Recomputes rank and crowding for every member of `pop`.
inline void assign_rank_and_crowding(std::vector<Individual>& pop) {
  std::vector<ObjectivePair> obj;
  obj.reserve(pop.size());
  for (const auto& ind : pop) obj.push_back(ind.objectives);
  const auto fronts = non_dominated_sort(obj);
  for (std::size_t k = 0; k < fronts.size(); ++k) {
    std::vector<ObjectivePair> pts;
    for (std::size_t i : fronts[k]) pts.push_back(obj[i]);
    const auto cd = crowding_distance(pts);
    for (std::size_t j = 0; j < fronts[k].size(); ++j) {
      pop[fronts[k][j]].rank = static_cast<int>(k);
      pop[fronts[k][j]].crowding = cd[j];
    }
  }
}

/// Lower rank wins, then larger crowding, then the first candidate.
inline const Individual& tournament(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank ? a : b;
  if (b.crowding > a.crowding) return b;
  return a;
}

/// Binary tournament over two uniform picks (with replacement).
inline const Individual& select_parent(const std::vector<Individual>& pop, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  const auto& a = pop[pick(rng)];
  const auto& b = pop[pick(rng)];
  return tournament(a, b);
}

inline double clip01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

/// Uniform exchange of joint genes, simulated binary crossover of length genes.
inline std::pair<Genome, Genome> crossover(const Genome& pa, const Genome& pb,
                                           const OptimizerConfig& cfg, Rng& rng) {
  if (pa.size() != pb.size()) throw ValidationError("crossover parents differ in length");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Genome ca = pa;
  Genome cb = pb;
  if (unit(rng) >= cfg.crossover_probability) return {ca, cb};

  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (unit(rng) < 0.5) std::swap(ca.joints[i], cb.joints[i]);
  }
  const double exponent = 1.0 / (cfg.sbx_eta + 1.0);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double x1 = pa.length_genes[i];
    const double x2 = pb.length_genes[i];
    const double u = unit(rng);
    const bool swap_children = unit(rng) < 0.5;
    if (std::abs(x1 - x2) < 1e-14) continue;
    const double beta =
        u <= 0.5 ? std::pow(2.0 * u, exponent) : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
    double c1 = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
    double c2 = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
    if (swap_children) std::swap(c1, c2);
    ca.length_genes[i] = clip01(c1);
    cb.length_genes[i] = clip01(c2);
  }
  return {ca, cb};
}

/// Categorical resampling and bounded polynomial mutation.
inline Genome mutate(const Genome& g, const OptimizerConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, static_cast<int>(kJointKindCount) - 1);
  Genome out = g;
  for (auto& j : out.joints) {
    if (unit(rng) < cfg.mutation_probability_categorical) j = static_cast<JointKind>(kind(rng));
  }
  const double exponent = 1.0 / (cfg.pm_eta + 1.0);
  for (auto& y : out.length_genes) {
    if (!(unit(rng) < cfg.mutation_probability_continuous)) continue;
    const double r = unit(rng);
    double dq;
    if (r < 0.5) {
      const double v = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - y, cfg.pm_eta + 1.0);
      dq = std::pow(v, exponent) - 1.0;
    } else {
      const double v = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(y, cfg.pm_eta + 1.0);
      dq = 1.0 - std::pow(v, exponent);
    }
    y = clip01(y + dq);
  }
  return out;
}

namespace detail {

/// Evaluates `genomes` with up to `workers` threads; output order matches input.
template <class EvalFn>
std::vector<ObjectivePair> evaluate_batch(const std::vector<Genome>& genomes, EvalFn& eval,
                                          std::size_t workers) {
  std::vector<ObjectivePair> out(genomes.size());
  auto one = [&](std::size_t i) {
    const auto r = eval(genomes[i]);
    out[i] = {r.e_task, r.e_design};
  };
  workers = std::min(workers, genomes.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < genomes.size(); ++i) one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < genomes.size(); i = next++) {
          try {
            one(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace detail

/// Survivor selection: whole fronts by rank, the split front truncated by
/// descending crowding then ascending evaluation index.
inline std::vector<Individual> select_survivors(std::vector<Individual> merged, std::size_t mu) {
  std::vector<ObjectivePair> obj;
  obj.reserve(merged.size());
  for (const auto& ind : merged) obj.push_back(ind.objectives);
  const auto fronts = non_dominated_sort(obj);

  std::vector<Individual> next;
  next.reserve(mu);
  for (const auto& front : fronts) {
    if (next.size() >= mu) break;
    std::vector<ObjectivePair> pts;
    for (std::size_t i : front) pts.push_back(obj[i]);
    const auto cd = crowding_distance(pts);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (next.size() + front.size() > mu) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (cd[a] != cd[b]) return cd[a] > cd[b];
        return merged[front[a]].eval_index < merged[front[b]].eval_index;
      });
    }
    for (std::size_t j : order) {
      if (next.size() >= mu) break;
      next.push_back(std::move(merged[front[j]]));
    }
  }
  assign_rank_and_crowding(next);
  return next;
}

/// Runs NSGA-II with an arbitrary genome evaluator. `eval(genome)` must return
/// something with `e_task` and `e_design` members and be safe to call from
/// several threads when `cfg.workers > 1`.
template <class EvalFn>
ParetoArchive run(EvalFn&& eval, std::size_t n_modules, const OptimizerConfig& cfg,
                  const ProgressSink& progress = {}) {
  cfg.validate();
  if (n_modules == 0) throw ValidationError("n_modules must be positive");
  Rng rng(cfg.seed);
  ParetoArchive archive;
  archive.seed = cfg.seed;
  archive.records.reserve(cfg.total_evaluations);

  auto evaluate_all = [&](std::vector<Genome> genomes) {
    const auto obj = detail::evaluate_batch(genomes, eval, cfg.workers);
    std::vector<Individual> out;
    out.reserve(genomes.size());
    for (std::size_t i = 0; i < genomes.size(); ++i) {
      Individual ind;
      ind.eval_index = archive.records.size();
      ind.objectives = obj[i];
      ind.genome = std::move(genomes[i]);
      archive.records.push_back({ind.eval_index, ind.genome, ind.objectives, -1});
      out.push_back(std::move(ind));
    }
    return out;
  };

  auto report = [&](const std::vector<Individual>& pop) {
    if (!progress) return;
    ProgressEvent ev;
    ev.evaluations = archive.records.size();
    ev.best_task = std::numeric_limits<double>::infinity();
    for (const auto& ind : pop) {
      ev.best_task = std::min(ev.best_task, ind.objectives.task);
      if (ind.rank == 0) ++ev.front_size;
    }
    progress(ev);
  };

  std::vector<Genome> initial;
  initial.reserve(cfg.population_size);
  for (std::size_t i = 0; i < cfg.population_size; ++i) initial.push_back(random_genome(rng, n_modules));
  std::vector<Individual> pop = evaluate_all(std::move(initial));
  assign_rank_and_crowding(pop);
  report(pop);

  while (archive.records.size() < cfg.total_evaluations) {
    const std::size_t lambda =
        std::min(cfg.population_size, cfg.total_evaluations - archive.records.size());
    std::vector<Genome> children;
    children.reserve(lambda);
    while (children.size() < lambda) {
      const Genome& a = select_parent(pop, rng).genome;
      const Genome& b = select_parent(pop, rng).genome;
      auto [c1, c2] = crossover(a, b, cfg, rng);
      children.push_back(mutate(c1, cfg, rng));
      if (children.size() < lambda) children.push_back(mutate(c2, cfg, rng));
    }
    auto offspring = evaluate_all(std::move(children));
    std::vector<Individual> merged = std::move(pop);
    merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));
    pop = select_survivors(std::move(merged), cfg.population_size);
    report(pop);
  }

  assign_archive_ranks(archive);
  archive.config = {{"optimizer", cfg.to_json()}, {"n_modules", n_modules}};
  return archive;
}

/// Runs against a scenario; the run seed also seeds every per-genome IK solve.
inline ParetoArchive run(const Scenario& scenario, const OptimizerConfig& cfg, const IkConfig& ik,
                         const ProgressSink& progress = {}) {
  cfg.validate();
  const Evaluator evaluator(scenario, ik, cfg.seed);
  auto archive = run(evaluator, scenario.n_modules, cfg, progress);
  archive.scenario_name = scenario.name;
  archive.config["ik"] = {{"damping", ik.damping},
                          {"max_iterations", ik.max_iterations},
                          {"step_tolerance", ik.step_tolerance},
                          {"residual_tolerance", ik.residual_tolerance},
                          {"restarts", ik.restarts}};
  return archive;
}

}  // namespace morphoforge
