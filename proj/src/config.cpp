#include "forage/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace forage {

std::string_view to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::periodic: return "periodic";
    case BoundaryMode::reflective: return "reflective";
    case BoundaryMode::clamped: return "clamped";
  }
  return "?";
}

std::string_view to_string(OverflowPolicy policy) {
  switch (policy) {
    case OverflowPolicy::strict: return "strict";
    case OverflowPolicy::drop_and_count: return "drop_and_count";
  }
  return "?";
}

ConfigError::ConfigError(Kind kind, std::string field, const std::string& what)
    : std::runtime_error(what), kind_(kind), field_(std::move(field)) {}

namespace {

[[noreturn]] void invalid(const std::string& field, std::string_view constraint) {
  throw ConfigError(ConfigError::Kind::validation, field,
                    fmt::format("invalid config: {} must satisfy {}", field, constraint));
}

[[noreturn]] void bad_value(const std::string& field, const YAML::Node& node,
                            std::string_view expected) {
  std::string shown = node.IsScalar() ? node.Scalar() : std::string("<non-scalar>");
  throw ConfigError(ConfigError::Kind::validation, field,
                    fmt::format("invalid config: {} = '{}' is not {}", field, shown, expected));
}

double read_double(const std::string& key, const YAML::Node& node) {
  if (!node.IsScalar()) bad_value(key, node, "a number");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    bad_value(key, node, "a number");
  }
}

template <class T>
T read_unsigned(const std::string& key, const YAML::Node& node) {
  if (!node.IsScalar()) bad_value(key, node, "a non-negative integer");
  const std::string& s = node.Scalar();
  if (!s.empty() && s.front() == '-') bad_value(key, node, "a non-negative integer");
  try {
    auto v = node.as<std::uint64_t>();
    if (v > std::numeric_limits<T>::max()) bad_value(key, node, "in range");
    return static_cast<T>(v);
  } catch (const YAML::Exception&) {
    bad_value(key, node, "a non-negative integer");
  }
}

BoundaryMode read_boundary(const std::string& key, const YAML::Node& node) {
  if (node.IsScalar()) {
    const std::string& s = node.Scalar();
    if (s == "periodic") return BoundaryMode::periodic;
    if (s == "reflective") return BoundaryMode::reflective;
    if (s == "clamped") return BoundaryMode::clamped;
  }
  bad_value(key, node, "one of periodic, reflective, clamped");
}

OverflowPolicy read_overflow(const std::string& key, const YAML::Node& node) {
  if (node.IsScalar()) {
    const std::string& s = node.Scalar();
    if (s == "strict") return OverflowPolicy::strict;
    if (s == "drop_and_count") return OverflowPolicy::drop_and_count;
  }
  bad_value(key, node, "one of strict, drop_and_count");
}

std::vector<Segment> read_walls(const std::string& key, const YAML::Node& node) {
  std::vector<Segment> walls;
  if (node.IsNull()) return walls;
  if (!node.IsSequence()) bad_value(key, node, "a list of [x1, y1, x2, y2] segments");
  for (const auto& item : node) {
    if (!item.IsSequence() || item.size() != 4)
      bad_value(key, item, "a list of [x1, y1, x2, y2] segments");
    Segment s{{read_double(key, item[0]), read_double(key, item[1])},
              {read_double(key, item[2]), read_double(key, item[3])}};
    walls.push_back(s);
  }
  return walls;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "dt",
      "n_steps",
      "world_width",
      "world_height",
      "boundary_mode",
      "walls",
      "max_agents",
      "max_resources",
      "initial_agents",
      "initial_resources",
      "n_neurons",
      "policy_tau",
      "policy_gain",
      "n_rays",
      "ray_max_range",
      "epsilon",
      "alpha",
      "kernel_gain",
      "kernel_scale",
      "kernel_cutoff",
      "harvest_efficiency",
      "metabolic_cost",
      "move_cost",
      "init_energy",
      "max_speed",
      "reproduce_threshold",
      "offspring_energy_fraction",
      "mutation_std",
      "overflow_policy",
      "es_pop_size",
      "es_generations",
      "es_sigma",
      "es_learning_rate",
      "seed",
  };
  return keys;
}

SimConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(ConfigError::Kind::parse, "",
                      fmt::format("config parse error: {}", e.what()));
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap())
    throw ConfigError(ConfigError::Kind::parse, "", "config parse error: top level must be a mapping");

  const auto& keys = config_keys();
  for (const auto& kv : root) {
    auto name = kv.first.as<std::string>();
    if (std::find(keys.begin(), keys.end(), name) == keys.end())
      throw ConfigError(ConfigError::Kind::validation, name,
                        fmt::format("invalid config: unknown key '{}'", name));
  }

  SimConfig c;
  bool agents_given = false;
  bool resources_given = false;
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key == "dt") c.dt = read_double(key, v);
    else if (key == "n_steps") c.n_steps = read_unsigned<std::uint64_t>(key, v);
    else if (key == "world_width") c.world_width = read_double(key, v);
    else if (key == "world_height") c.world_height = read_double(key, v);
    else if (key == "boundary_mode") c.boundary_mode = read_boundary(key, v);
    else if (key == "walls") c.walls = read_walls(key, v);
    else if (key == "max_agents") c.max_agents = read_unsigned<std::uint32_t>(key, v);
    else if (key == "max_resources") c.max_resources = read_unsigned<std::uint32_t>(key, v);
    else if (key == "initial_agents") {
      c.initial_agents = read_unsigned<std::uint32_t>(key, v);
      agents_given = true;
    } else if (key == "initial_resources") {
      c.initial_resources = read_unsigned<std::uint32_t>(key, v);
      resources_given = true;
    }
    else if (key == "n_neurons") c.n_neurons = read_unsigned<std::uint32_t>(key, v);
    else if (key == "policy_tau") c.policy_tau = read_double(key, v);
    else if (key == "policy_gain") c.policy_gain = read_double(key, v);
    else if (key == "n_rays") c.n_rays = read_unsigned<std::uint32_t>(key, v);
    else if (key == "ray_max_range") c.ray_max_range = read_double(key, v);
    else if (key == "epsilon") c.epsilon = read_double(key, v);
    else if (key == "alpha") c.alpha = read_double(key, v);
    else if (key == "kernel_gain") c.kernel_gain = read_double(key, v);
    else if (key == "kernel_scale") c.kernel_scale = read_double(key, v);
    else if (key == "kernel_cutoff") c.kernel_cutoff = read_double(key, v);
    else if (key == "harvest_efficiency") c.harvest_efficiency = read_double(key, v);
    else if (key == "metabolic_cost") c.metabolic_cost = read_double(key, v);
    else if (key == "move_cost") c.move_cost = read_double(key, v);
    else if (key == "init_energy") c.init_energy = read_double(key, v);
    else if (key == "max_speed") c.max_speed = read_double(key, v);
    else if (key == "reproduce_threshold") c.reproduce_threshold = read_double(key, v);
    else if (key == "offspring_energy_fraction") c.offspring_energy_fraction = read_double(key, v);
    else if (key == "mutation_std") c.mutation_std = read_double(key, v);
    else if (key == "overflow_policy") c.overflow_policy = read_overflow(key, v);
    else if (key == "es_pop_size") c.es_pop_size = read_unsigned<std::uint32_t>(key, v);
    else if (key == "es_generations") c.es_generations = read_unsigned<std::uint32_t>(key, v);
    else if (key == "es_sigma") c.es_sigma = read_double(key, v);
    else if (key == "es_learning_rate") c.es_learning_rate = read_double(key, v);
    else if (key == "seed") c.seed = read_unsigned<std::uint64_t>(key, v);
  }
  // Initial counts default to the capacities.
  if (!agents_given) c.initial_agents = c.max_agents;
  if (!resources_given) c.initial_resources = c.max_resources;

  validate(c);
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(ConfigError::Kind::parse, "",
                      fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const SimConfig& c) {
  if (!(finite(c.dt) && c.dt > 0)) invalid("dt", "dt > 0");
  if (!(finite(c.world_width) && c.world_width > 0)) invalid("world_width", "world_width > 0");
  if (!(finite(c.world_height) && c.world_height > 0)) invalid("world_height", "world_height > 0");
  for (const auto& w : c.walls) {
    if (!(finite(w.a.x) && finite(w.a.y) && finite(w.b.x) && finite(w.b.y)))
      invalid("walls", "finite endpoints");
    if (w.a == w.b) invalid("walls", "distinct endpoints");
  }
  if (c.max_agents < 1) invalid("max_agents", "max_agents >= 1");
  if (c.max_resources < 1) invalid("max_resources", "max_resources >= 1");
  if (c.initial_agents > c.max_agents) invalid("initial_agents", "initial_agents <= max_agents");
  if (c.initial_resources > c.max_resources)
    invalid("initial_resources", "initial_resources <= max_resources");
  if (c.n_neurons < 1) invalid("n_neurons", "n_neurons >= 1");
  if (!(finite(c.policy_tau) && c.policy_tau > 0)) invalid("policy_tau", "policy_tau > 0");
  if (!(finite(c.policy_gain) && c.policy_gain >= 0)) invalid("policy_gain", "policy_gain >= 0");
  if (!(finite(c.ray_max_range) && c.ray_max_range > 0)) invalid("ray_max_range", "ray_max_range > 0");
  if (!(finite(c.epsilon) && c.epsilon >= 0)) invalid("epsilon", "epsilon >= 0");
  if (!(finite(c.alpha) && c.alpha > 0)) invalid("alpha", "alpha > 0");
  if (!(finite(c.kernel_gain) && c.kernel_gain >= 0)) invalid("kernel_gain", "kernel_gain >= 0");
  if (!(finite(c.kernel_scale) && c.kernel_scale > 0)) invalid("kernel_scale", "kernel_scale > 0");
  if (!(finite(c.kernel_cutoff) && c.kernel_cutoff >= 0)) invalid("kernel_cutoff", "kernel_cutoff >= 0");
  if (!(finite(c.harvest_efficiency) && c.harvest_efficiency >= 0 && c.harvest_efficiency <= 1))
    invalid("harvest_efficiency", "0 <= harvest_efficiency <= 1");
  if (!(finite(c.metabolic_cost) && c.metabolic_cost >= 0)) invalid("metabolic_cost", "metabolic_cost >= 0");
  if (!(finite(c.move_cost) && c.move_cost >= 0)) invalid("move_cost", "move_cost >= 0");
  if (!finite(c.init_energy)) invalid("init_energy", "a finite value");
  if (!(finite(c.max_speed) && c.max_speed >= 0)) invalid("max_speed", "max_speed >= 0");
  if (!(finite(c.reproduce_threshold) && c.reproduce_threshold > 0))
    invalid("reproduce_threshold", "reproduce_threshold > 0");
  if (!(finite(c.offspring_energy_fraction) && c.offspring_energy_fraction > 0 &&
        c.offspring_energy_fraction < 1))
    invalid("offspring_energy_fraction", "0 < offspring_energy_fraction < 1");
  if (!(finite(c.mutation_std) && c.mutation_std >= 0)) invalid("mutation_std", "mutation_std >= 0");
  if (c.es_pop_size < 2 || c.es_pop_size % 2 != 0) invalid("es_pop_size", "an even value >= 2");
  if (!(finite(c.es_sigma) && c.es_sigma >= 0)) invalid("es_sigma", "es_sigma >= 0");
  if (!(finite(c.es_learning_rate) && c.es_learning_rate > 0))
    invalid("es_learning_rate", "es_learning_rate > 0");
}

std::string to_text(const SimConfig& c) {
  std::string out;
  auto put = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{}: {}\n", key, value);
  };
  put("dt", c.dt);
  put("n_steps", c.n_steps);
  put("world_width", c.world_width);
  put("world_height", c.world_height);
  put("boundary_mode", to_string(c.boundary_mode));
  if (c.walls.empty()) {
    out += "walls: []\n";
  } else {
    out += "walls:\n";
    for (const auto& w : c.walls)
      out += fmt::format("  - [{}, {}, {}, {}]\n", w.a.x, w.a.y, w.b.x, w.b.y);
  }
  put("max_agents", c.max_agents);
  put("max_resources", c.max_resources);
  put("initial_agents", c.initial_agents);
  put("initial_resources", c.initial_resources);
  put("n_neurons", c.n_neurons);
  put("policy_tau", c.policy_tau);
  put("policy_gain", c.policy_gain);
  put("n_rays", c.n_rays);
  put("ray_max_range", c.ray_max_range);
  put("epsilon", c.epsilon);
  put("alpha", c.alpha);
  put("kernel_gain", c.kernel_gain);
  put("kernel_scale", c.kernel_scale);
  put("kernel_cutoff", c.kernel_cutoff);
  put("harvest_efficiency", c.harvest_efficiency);
  put("metabolic_cost", c.metabolic_cost);
  put("move_cost", c.move_cost);
  put("init_energy", c.init_energy);
  put("max_speed", c.max_speed);
  put("reproduce_threshold", c.reproduce_threshold);
  put("offspring_energy_fraction", c.offspring_energy_fraction);
  put("mutation_std", c.mutation_std);
  put("overflow_policy", to_string(c.overflow_policy));
  put("es_pop_size", c.es_pop_size);
  put("es_generations", c.es_generations);
  put("es_sigma", c.es_sigma);
  put("es_learning_rate", c.es_learning_rate);
  put("seed", c.seed);
  return out;
}

std::uint64_t config_hash(const SimConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace forage
