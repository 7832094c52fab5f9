#include "forage/state.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "forage/policy.hpp"
#include "forage/rng.hpp"

namespace forage {

AgentSet::AgentSet(std::size_t capacity, std::size_t n_neurons, std::size_t n_params)
    : active(capacity, 0),
      uid(capacity, 0),
      px(capacity, 0.0),
      py(capacity, 0.0),
      vx(capacity, 0.0),
      vy(capacity, 0.0),
      energy(capacity, 0.0),
      rates(capacity * n_neurons, 0.0),
      params(capacity * n_params, 0.0),
      neurons_(n_neurons),
      params_per_slot_(n_params) {}

std::size_t AgentSet::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), std::uint8_t{1}));
}

void AgentSet::clear_slot(std::size_t slot) {
  active[slot] = 0;
  uid[slot] = 0;
  px[slot] = py[slot] = vx[slot] = vy[slot] = energy[slot] = 0.0;
  std::ranges::fill(rates_of(slot), 0.0);
  std::ranges::fill(params_of(slot), 0.0);
}

void AgentSet::copy_slot_from(const AgentSet& src, std::size_t from, std::size_t to) {
  active[to] = src.active[from];
  uid[to] = src.uid[from];
  px[to] = src.px[from];
  py[to] = src.py[from];
  vx[to] = src.vx[from];
  vy[to] = src.vy[from];
  energy[to] = src.energy[from];
  std::ranges::copy(src.rates_of(from), rates_of(to).begin());
  std::ranges::copy(src.params_of(from), params_of(to).begin());
}

ShapeSignature AgentSet::shape() const {
  return {{active.size(), uid.size(), px.size(), py.size(), vx.size(), vy.size(), energy.size(),
           rates.size(), params.size(), neurons_, params_per_slot_}};
}

std::size_t AgentSet::padding_violations() const {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < capacity(); ++i) {
    if (active[i]) continue;
    const bool zero = uid[i] == 0 && px[i] == 0.0 && py[i] == 0.0 && vx[i] == 0.0 &&
                      vy[i] == 0.0 && energy[i] == 0.0 &&
                      std::ranges::all_of(rates_of(i), [](double v) { return v == 0.0; }) &&
                      std::ranges::all_of(params_of(i), [](double v) { return v == 0.0; });
    if (!zero) ++bad;
  }
  return bad;
}

ResourceSet::ResourceSet(std::size_t capacity)
    : active(capacity, 0), px(capacity, 0.0), py(capacity, 0.0), value(capacity, 0.0) {}

std::size_t ResourceSet::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), std::uint8_t{1}));
}

ShapeSignature ResourceSet::shape() const {
  return {{active.size(), px.size(), py.size(), value.size()}};
}

std::size_t ResourceSet::padding_violations() const {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < capacity(); ++i) {
    if (!active[i] && (px[i] != 0.0 || py[i] != 0.0 || value[i] != 0.0)) ++bad;
  }
  return bad;
}

WorldGeometry make_world(const SimConfig& config) {
  return {config.world_width, config.world_height, config.boundary_mode, config.walls};
}

NumericalError::NumericalError(Uid uid, const std::string& what, std::uint64_t step)
    : std::runtime_error(what), uid_(uid), step_(step) {}

double carrying_capacity(const SimConfig& config) { return config.epsilon / config.alpha; }

InitialState state_init(const SimConfig& config) {
  if (config.initial_agents > config.max_agents)
    throw CapacityError(fmt::format("initial_agents ({}) exceeds max_agents ({})",
                                    config.initial_agents, config.max_agents));
  if (config.initial_resources > config.max_resources)
    throw CapacityError(fmt::format("initial_resources ({}) exceeds max_resources ({})",
                                    config.initial_resources, config.max_resources));

  const PolicyLayout layout = policy_layout(config);
  InitialState s{AgentSet(config.max_agents, config.n_neurons, layout.size()),
                 ResourceSet(config.max_resources), make_world(config)};

  for (std::size_t i = 0; i < config.initial_agents; ++i) {
    CounterRng place(config.seed, Stream::agent_placement, 0, i);
    s.agents.active[i] = 1;
    s.agents.uid[i] = s.agents.next_uid++;
    s.agents.px[i] = place.uniform() * config.world_width;
    s.agents.py[i] = place.uniform() * config.world_height;
    s.agents.energy[i] = config.init_energy;
    CounterRng weights(config.seed, Stream::policy_init, 0, i);
    policy_init(weights, layout, config.policy_gain, config.policy_tau, s.agents.params_of(i));
  }

  const double s0 = carrying_capacity(config);
  for (std::size_t n = 0; n < config.initial_resources; ++n) {
    CounterRng place(config.seed, Stream::resource_placement, 0, n);
    s.resources.active[n] = 1;
    s.resources.px[n] = place.uniform() * config.world_width;
    s.resources.py[n] = place.uniform() * config.world_height;
    s.resources.value[n] = s0;
  }
  return s;
}

}  // namespace forage
