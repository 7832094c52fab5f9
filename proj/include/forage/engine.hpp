#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>

#include "forage/config.hpp"
#include "forage/kernels.hpp"
#include "forage/parallel.hpp"
#include "forage/state.hpp"

namespace forage {

/// Running totals since step 0. Carried through checkpoints.
struct RunStats {
  std::uint64_t births = 0;
  std::uint64_t deaths = 0;
  double total_harvested = 0.0;       // resource units extracted
  double total_harvest_energy = 0.0;  // energy credited to agents from harvesting
  double total_death_energy = 0.0;    // energy held by agents when they died

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

struct SimState {
  std::uint64_t step = 0;
  AgentSet agents;
  ResourceSet resources;
  WorldGeometry world;
  RunStats stats;

  friend bool operator==(const SimState&, const SimState&) = default;
};

struct StepRecord {
  std::uint64_t step = 0;
  std::size_t agents = 0;
  std::size_t resources = 0;
  double mean_energy = 0.0;
  double min_energy = 0.0;
  double max_energy = 0.0;
  double total_resource = 0.0;
  std::size_t births = 0;
  std::size_t deaths = 0;
  double seconds = 0.0;  // wall clock; not written to record files
};

/// A shape or padding check failed in audit mode.
class AuditError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct EngineOptions {
  unsigned threads = 1;
  bool audit = false;  // check shapes and zero padding after every phase
  const kernels::KernelTable* kernels = nullptr;  // nullptr: kernels::active()
};

struct RunSinks {
  std::uint64_t record_every = 0;  // 0: no records
  std::function<void(const StepRecord&)> on_record;
  std::uint64_t frame_every = 0;  // 0: no frames; otherwise also frame 0 at the start
  std::function<void(const SimState&, std::uint64_t frame_index)> on_frame;
};

struct BenchReport {
  std::uint64_t warmup_steps = 0;
  std::uint64_t measured_steps = 0;
  double seconds = 0.0;
  double steps_per_second = 0.0;
  double agent_steps_per_second = 0.0;
  double extrapolated_seconds_1e6 = 0.0;  // wall time projected to 10^6 steps
  unsigned threads = 1;
  std::string_view kernels;
  bool valid = false;  // false when nothing was measured
};

/// Composes one simulation step:
///   observe -> policy -> integrate -> boundary -> harvest -> energy
///   -> deaths/births -> record
/// Each phase reads the output of the previous phase only.
class Engine {
 public:
  explicit Engine(SimConfig config, EngineOptions options = {});

  const SimConfig& config() const { return config_; }
  const kernels::KernelTable& kernels() const { return *kernels_; }
  unsigned threads() const { return executor_.threads(); }

  SimState initial_state() const;

  /// Advances one step. NumericalError carries the step index being computed.
  std::pair<SimState, StepRecord> step(SimState state) const;

  /// Runs n_steps steps from `state`, never resetting it.
  SimState run(SimState state, std::uint64_t n_steps, const RunSinks& sinks = {}) const;

  BenchReport bench(std::uint64_t n_steps, std::uint64_t warmup) const;

  /// Throws AuditError when any array shape differs from the config's or any
  /// inactive slot is not zero.
  void audit(const SimState& state, const char* phase) const;

 private:
  SimConfig config_;
  EngineOptions options_;
  Executor executor_;
  const kernels::KernelTable* kernels_;
};

StepRecord summarize(const SimState& state);

}  // namespace forage

namespace forage {

/// Fitness of one shared parameter vector: every initial agent gets `params`,
/// the scenario runs for `steps` steps, and the result is the harvest energy
/// credited per initial agent.
double scenario_fitness(const Engine& engine, std::span<const double> params, std::uint64_t steps);

}  // namespace forage
