#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "forage/config.hpp"
#include "forage/policy.hpp"
#include "forage/rng.hpp"
#include "forage/state.hpp"

namespace forage {

/// params + std * xi, xi ~ N(0, I); the tau entry is then clamped to >= min_tau.
std::vector<double> mutate(std::span<const double> params, double std, CounterRng& rng,
                           const PolicyLayout& layout, double min_tau);

struct PopulationResult {
  AgentSet agents;
  std::size_t deaths = 0;
  std::size_t births = 0;       // accepted offspring
  std::size_t overflow = 0;     // offspring dropped for lack of slots
  double energy_removed = 0.0;  // summed energy of the agents that died
};

/// Death then birth, against one snapshot.
///
/// Agents with energy <= 0 are removed. Every remaining agent with energy >=
/// reproduce_threshold, in slot order, spawns one child at its position with
/// zero velocity, zero rates and mutated params; the child takes
/// offspring_energy_fraction of the parent's energy. Parents whose child does
/// not fit keep their energy; strict overflow raises CapacityError.
/// Mutation noise for the parent in slot i comes from stream
/// (seed, mutation, step, i).
PopulationResult step_population(AgentSet agents, const SimConfig& config, std::uint64_t step);

struct EsConfig {
  std::uint32_t pop_size = 32;  // even: pop_size / 2 mirrored pairs
  std::uint32_t generations = 200;
  double sigma = 0.1;
  double learning_rate = 0.05;
  bool record_means = false;
};

EsConfig es_config(const SimConfig& config);

struct EsResult {
  std::vector<double> best_params;
  double best_fitness = 0.0;
  std::vector<double> mean_fitness;  // fitness of the mean after each generation
  std::vector<double> best_history;  // best-so-far after each generation
  std::vector<std::vector<double>> means;  // only with record_means, one per generation
};

class EsError : public std::runtime_error {
 public:
  EsError(std::uint32_t generation, const std::string& what)
      : std::runtime_error(what), generation_(generation) {}
  std::uint32_t generation() const noexcept { return generation_; }

 private:
  std::uint32_t generation_;
};

using Objective = std::function<double(std::span<const double>)>;

/// Centered ranks in [-0.5, 0.5]; ties share their average rank.
std::vector<double> centered_ranks(std::span<const double> fitness);

/// Mirrored-sampling evolution strategy maximizing `objective`.
///
/// Each generation draws pop_size/2 directions xi_i, evaluates mu + sigma xi_i
/// and mu - sigma xi_i, converts all fitness values to centered ranks and
/// moves the mean by lr / (pop_size sigma) * sum_i (r_i+ - r_i-) xi_i.
/// Only the ranks enter the update, so any increasing transform of the
/// objective yields the same mean trajectory.
EsResult es_train(const Objective& objective, std::span<const double> initial,
                  const EsConfig& config, std::uint64_t seed);

}  // namespace forage
