#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forage/geometry.hpp"

namespace forage {

enum class BoundaryMode { periodic, reflective, clamped };
enum class OverflowPolicy { strict, drop_and_count };

std::string_view to_string(BoundaryMode mode);
std::string_view to_string(OverflowPolicy policy);

/// Full scenario description. Field names match the keys of the config file
/// one-to-one; docs/config_schema.md lists units, defaults and constraints.
struct SimConfig {
  // time
  double dt = 0.1;
  std::uint64_t n_steps = 1000;

  // world: axis-aligned box [0, world_width] x [0, world_height]
  double world_width = 100.0;
  double world_height = 100.0;
  BoundaryMode boundary_mode = BoundaryMode::periodic;
  std::vector<Segment> walls;

  // populations
  std::uint32_t max_agents = 1000;
  std::uint32_t max_resources = 300;
  std::uint32_t initial_agents = 1000;
  std::uint32_t initial_resources = 300;

  // policy and sensors
  std::uint32_t n_neurons = 50;
  double policy_tau = 1.0;
  double policy_gain = 1.0;
  std::uint32_t n_rays = 8;
  double ray_max_range = 10.0;

  // resource dynamics and harvest kernel
  double epsilon = 0.5;
  double alpha = 0.005;
  double kernel_gain = 1.0;
  double kernel_scale = 1.0;
  double kernel_cutoff = 5.0;

  // energy
  double harvest_efficiency = 0.5;
  double metabolic_cost = 0.05;
  double move_cost = 0.01;
  double init_energy = 10.0;
  double max_speed = 0.0;  // 0 disables the speed limit

  // continual evolution
  double reproduce_threshold = 20.0;
  double offspring_energy_fraction = 0.5;
  double mutation_std = 0.02;
  OverflowPolicy overflow_policy = OverflowPolicy::drop_and_count;

  // offline evolution strategies
  std::uint32_t es_pop_size = 32;
  std::uint32_t es_generations = 200;
  double es_sigma = 0.1;
  double es_learning_rate = 0.05;

  std::uint64_t seed = 0;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Thrown for unparseable input (`field` empty or the key being read) and for
/// values that violate a constraint (`field` names the key).
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { parse, validation };

  ConfigError(Kind kind, std::string field, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }

 private:
  Kind kind_;
  std::string field_;
};

SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError(validation) naming the first offending field.
void validate(const SimConfig& config);

/// Canonical text form: every field, fixed key order, shortest round-trip
/// number formatting. parse_config(to_text(c)) == c for every valid c.
std::string to_text(const SimConfig& config);

/// FNV-1a over to_text(config).
std::uint64_t config_hash(const SimConfig& config);

/// Keys accepted by parse_config, in canonical order.
const std::vector<std::string_view>& config_keys();

}  // namespace forage
