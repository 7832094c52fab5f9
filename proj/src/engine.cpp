#include "forage/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "forage/dynamics.hpp"
#include "forage/evolution.hpp"
#include "forage/policy.hpp"
#include "forage/resources.hpp"
#include "forage/sensors.hpp"

namespace forage {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Engine::Engine(SimConfig config, EngineOptions options)
    : config_(std::move(config)),
      options_(options),
      executor_(options.threads),
      kernels_(options.kernels ? options.kernels : &kernels::active()) {
  validate(config_);
}

SimState Engine::initial_state() const {
  InitialState init = state_init(config_);
  SimState s{0, std::move(init.agents), std::move(init.resources), std::move(init.world), {}};
  if (options_.audit) audit(s, "init");
  return s;
}

void Engine::audit(const SimState& state, const char* phase) const {
  const std::size_t n_params = policy_layout(config_).size();
  const AgentSet reference_agents(config_.max_agents, config_.n_neurons, n_params);
  const ResourceSet reference_resources(config_.max_resources);
  if (!(state.agents.shape() == reference_agents.shape()))
    throw AuditError(fmt::format("step {} ({}): agent array shape changed", state.step, phase));
  if (!(state.resources.shape() == reference_resources.shape()))
    throw AuditError(fmt::format("step {} ({}): resource array shape changed", state.step, phase));
  if (std::size_t bad = state.agents.padding_violations())
    throw AuditError(fmt::format("step {} ({}): {} inactive agent slots hold data", state.step,
                                 phase, bad));
  if (std::size_t bad = state.resources.padding_violations())
    throw AuditError(fmt::format("step {} ({}): {} inactive resource slots hold data",
                                 state.step, phase, bad));
  if (state.agents.active_count() > config_.max_agents)
    throw AuditError(fmt::format("step {} ({}): population above capacity", state.step, phase));
  for (double s : state.resources.value)
    if (s < 0.0) throw AuditError(fmt::format("step {} ({}): negative resource", state.step, phase));
}

std::pair<SimState, StepRecord> Engine::step(SimState state) const {
  const auto t0 = Clock::now();
  const double dt = config_.dt;
  const std::uint64_t index = state.step + 1;
  auto checkpoint = [&](const char* phase) {
    if (options_.audit) audit(state, phase);
  };

  try {
    const ObservationBatch obs =
        observe(state.agents, state.resources, state.world, config_, executor_, *kernels_);

    auto acted = policy_step(std::move(state.agents), obs, dt, executor_, *kernels_);
    state.agents = std::move(acted.agents);
    checkpoint("policy");

    state.agents = integrate(std::move(state.agents), acted.control, dt, config_.max_speed);
    state.agents = apply_boundary(std::move(state.agents), state.world);
    checkpoint("motion");

    auto harvested = resource_step(std::move(state.resources), state.agents, config_, state.world,
                                   dt, executor_, *kernels_);
    state.resources = std::move(harvested.resources);
    checkpoint("harvest");

    const double eta = config_.harvest_efficiency;
    double credited = 0.0;
    for (std::size_t i = 0; i < state.agents.capacity(); ++i) {
      if (!state.agents.active[i]) continue;
      const double gain = eta * harvested.report.per_agent[i];
      const Vec2 u = acted.control[i];
      state.agents.energy[i] +=
          gain - dt * (config_.metabolic_cost + config_.move_cost * std::hypot(u.x, u.y));
      credited += gain;
    }
    state.stats.total_harvested += harvested.report.total_extracted;
    state.stats.total_harvest_energy += credited;
    checkpoint("energy");

    auto population = step_population(std::move(state.agents), config_, index);
    state.agents = std::move(population.agents);
    state.stats.births += population.births;
    state.stats.deaths += population.deaths;
    state.stats.total_death_energy += population.energy_removed;
    state.step = index;
    checkpoint("population");

    StepRecord record = summarize(state);
    record.births = population.births;
    record.deaths = population.deaths;
    record.seconds = seconds_since(t0);
    return {std::move(state), record};
  } catch (const NumericalError& e) {
    throw NumericalError(e.uid(), fmt::format("step {}: {}", index, e.what()), index);
  }
}

StepRecord summarize(const SimState& state) {
  StepRecord r;
  r.step = state.step;
  r.agents = state.agents.active_count();
  r.resources = state.resources.active_count();
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.agents.capacity(); ++i) {
    if (!state.agents.active[i]) continue;
    const double e = state.agents.energy[i];
    sum += e;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  if (r.agents > 0) {
    r.mean_energy = sum / static_cast<double>(r.agents);
    r.min_energy = lo;
    r.max_energy = hi;
  }
  for (double s : state.resources.value) r.total_resource += s;
  return r;
}

SimState Engine::run(SimState state, std::uint64_t n_steps, const RunSinks& sinks) const {
  std::uint64_t frame = 0;
  if (sinks.frame_every > 0 && sinks.on_frame) sinks.on_frame(state, frame++);
  for (std::uint64_t k = 1; k <= n_steps; ++k) {
    auto [next, record] = step(std::move(state));
    state = std::move(next);
    if (sinks.record_every > 0 && sinks.on_record && k % sinks.record_every == 0)
      sinks.on_record(record);
    if (sinks.frame_every > 0 && sinks.on_frame && k % sinks.frame_every == 0)
      sinks.on_frame(state, frame++);
  }
  return state;
}

BenchReport Engine::bench(std::uint64_t n_steps, std::uint64_t warmup) const {
  BenchReport report;
  report.warmup_steps = warmup;
  report.threads = executor_.threads();
  report.kernels = kernels_->name;

  SimState state = initial_state();
  for (std::uint64_t k = 0; k < warmup; ++k) state = step(std::move(state)).first;

  double agent_steps = 0.0;
  const auto t0 = Clock::now();
  for (std::uint64_t k = 0; k < n_steps; ++k) {
    agent_steps += static_cast<double>(state.agents.active_count());
    state = step(std::move(state)).first;
  }
  report.seconds = seconds_since(t0);
  report.measured_steps = n_steps;
  report.valid = n_steps > 0 && report.seconds > 0.0;
  if (report.valid) {
    report.steps_per_second = static_cast<double>(n_steps) / report.seconds;
    report.agent_steps_per_second = agent_steps / report.seconds;
    report.extrapolated_seconds_1e6 = 1e6 / report.steps_per_second;
  }
  return report;
}

}  // namespace forage

namespace forage {

double scenario_fitness(const Engine& engine, std::span<const double> params, std::uint64_t steps) {
  SimState state = engine.initial_state();
  if (params.size() != state.agents.n_params())
    throw std::invalid_argument("scenario_fitness: parameter vector has the wrong length");
  const PolicyLayout layout = policy_layout(engine.config());
  for (std::size_t i = 0; i < state.agents.capacity(); ++i) {
    if (!state.agents.active[i]) continue;
    auto slot = state.agents.params_of(i);
    std::ranges::copy(params, slot.begin());
    slot[layout.tau()] = std::max(slot[layout.tau()], engine.config().dt);
  }
  const std::size_t initial = std::max<std::size_t>(1, state.agents.active_count());
  state = engine.run(std::move(state), steps);
  return state.stats.total_harvest_energy / static_cast<double>(initial);
}

}  // namespace forage
