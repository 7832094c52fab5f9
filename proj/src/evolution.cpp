#include "forage/evolution.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "forage/agentset_ops.hpp"

namespace forage {

std::vector<double> mutate(std::span<const double> params, double std, CounterRng& rng,
                           const PolicyLayout& layout, double min_tau) {
  std::vector<double> out(params.begin(), params.end());
  if (std > 0.0)
    for (double& p : out) p += std * rng.normal();
  if (out.size() == layout.size()) out[layout.tau()] = std::max(out[layout.tau()], min_tau);
  return out;
}

PopulationResult step_population(AgentSet agents, const SimConfig& config, std::uint64_t step) {
  PopulationResult result;

  const SlotMask dying = select(agents, {"energy_at_most", {0.0}});
  for (std::size_t i = 0; i < agents.capacity(); ++i)
    if (dying[i]) result.energy_removed += agents.energy[i];
  result.deaths = dying.count();
  agents = remove(std::move(agents), dying);

  const SlotMask parents = select(agents, {"energy_at_least", {config.reproduce_threshold}});
  const std::size_t eligible = parents.count();
  if (eligible == 0) {
    result.agents = std::move(agents);
    return result;
  }
  const std::size_t free_slots = agents.capacity() - agents.active_count();
  if (eligible > free_slots && config.overflow_policy == OverflowPolicy::strict)
    throw CapacityError(fmt::format("step {}: {} offspring but only {} free slots", step,
                                    eligible, free_slots));
  const std::size_t placed = std::min(eligible, free_slots);

  const PolicyLayout layout{agents.n_neurons(), observation_dim(config.n_rays), 2};
  SpawnBatch batch(placed, agents.n_neurons(), agents.n_params());
  const std::vector<double> zero_rates(agents.n_neurons(), 0.0);
  std::size_t spawned = 0;
  for (std::size_t i = 0; i < agents.capacity() && spawned < placed; ++i) {
    if (!parents[i]) continue;
    CounterRng rng(config.seed, Stream::mutation, step, i);
    const auto child_params = mutate(agents.params_of(i), config.mutation_std, rng, layout, config.dt);
    const double child_energy = config.offspring_energy_fraction * agents.energy[i];
    agents.energy[i] -= child_energy;
    batch.push(agents.position(i), {0.0, 0.0}, child_energy, zero_rates, child_params);
    ++spawned;
  }

  auto added = add(std::move(agents), batch, OverflowPolicy::drop_and_count);
  result.births = added.accepted;
  result.overflow = eligible - placed;
  result.agents = std::move(added.set);
  result.agents.overflow_count += result.overflow;
  return result;
}

EsConfig es_config(const SimConfig& config) {
  return {config.es_pop_size, config.es_generations, config.es_sigma, config.es_learning_rate,
          false};
}

std::vector<double> centered_ranks(std::span<const double> fitness) {
  const std::size_t n = fitness.size();
  std::vector<double> ranks(n, 0.0);
  if (n < 2) return ranks;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && fitness[order[j + 1]] == fitness[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j);
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  const double denom = static_cast<double>(n - 1);
  for (double& r : ranks) r = r / denom - 0.5;
  return ranks;
}

EsResult es_train(const Objective& objective, std::span<const double> initial,
                  const EsConfig& config, std::uint64_t seed) {
  if (config.pop_size < 2 || config.pop_size % 2 != 0)
    throw std::invalid_argument("es_train: pop_size must be even and >= 2");
  const std::size_t dim = initial.size();
  const std::size_t pairs = config.pop_size / 2;

  auto evaluate = [&](std::span<const double> x, std::uint32_t generation) {
    const double f = objective(x);
    if (!std::isfinite(f))
      throw EsError(generation, fmt::format("non-finite fitness in generation {}", generation));
    return f;
  };

  EsResult result;
  std::vector<double> mean(initial.begin(), initial.end());
  result.best_params = mean;
  result.best_fitness = evaluate(mean, 0);

  std::vector<double> noise(pairs * dim);
  std::vector<double> fitness(config.pop_size);
  std::vector<double> candidate(dim);
  const double scale =
      config.sigma > 0.0
          ? config.learning_rate / (static_cast<double>(config.pop_size) * config.sigma)
          : 0.0;

  for (std::uint32_t g = 0; g < config.generations; ++g) {
    CounterRng rng(seed, Stream::evolution_strategy, g, 0);
    for (double& v : noise) v = rng.normal();

    for (std::size_t p = 0; p < pairs; ++p) {
      const double* xi = noise.data() + p * dim;
      for (int sign : {1, -1}) {
        for (std::size_t d = 0; d < dim; ++d) candidate[d] = mean[d] + sign * config.sigma * xi[d];
        const double f = evaluate(candidate, g);
        fitness[sign > 0 ? p : pairs + p] = f;
        if (f > result.best_fitness) {
          result.best_fitness = f;
          result.best_params = candidate;
        }
      }
    }

    const auto ranks = centered_ranks(fitness);
    std::vector<double> step(dim, 0.0);
    for (std::size_t p = 0; p < pairs; ++p) {
      const double weight = ranks[p] - ranks[pairs + p];
      const double* xi = noise.data() + p * dim;
      for (std::size_t d = 0; d < dim; ++d) step[d] += weight * xi[d];
    }
    for (std::size_t d = 0; d < dim; ++d) mean[d] += scale * step[d];

    const double f_mean = evaluate(mean, g);
    if (f_mean > result.best_fitness) {
      result.best_fitness = f_mean;
      result.best_params = mean;
    }
    result.mean_fitness.push_back(f_mean);
    result.best_history.push_back(result.best_fitness);
    if (config.record_means) result.means.push_back(mean);
  }
  return result;
}

}  // namespace forage
