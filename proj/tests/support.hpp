#pragma once

// Random scene builders shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <random>

#include "forage/config.hpp"
#include "forage/policy.hpp"
#include "forage/state.hpp"

namespace forage::testing {

inline bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

/// A small config with every field at a sane value.
inline SimConfig small_config(std::uint32_t agents = 8, std::uint32_t resources = 6) {
  SimConfig c;
  c.max_agents = agents;
  c.initial_agents = agents;
  c.max_resources = resources;
  c.initial_resources = resources;
  c.world_width = 20.0;
  c.world_height = 20.0;
  c.n_neurons = 6;
  c.n_rays = 4;
  c.ray_max_range = 6.0;
  c.kernel_cutoff = 4.0;
  c.kernel_scale = 1.5;
  c.seed = 11;
  return c;
}

/// Fills a set with a random mix of active and inactive slots. Active slots
/// get random state and params; uids are assigned in slot order.
inline AgentSet random_agents(std::mt19937_64& rng, std::size_t capacity, std::size_t n_neurons,
                              std::size_t n_params, double width, double height,
                              double active_probability = 0.7) {
  AgentSet a(capacity, n_neurons, n_params);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < capacity; ++i) {
    if (u01(rng) >= active_probability) continue;
    a.active[i] = 1;
    a.uid[i] = a.next_uid++;
    a.px[i] = u01(rng) * width;
    a.py[i] = u01(rng) * height;
    a.vx[i] = gauss(rng);
    a.vy[i] = gauss(rng);
    a.energy[i] = 10.0 * gauss(rng);
    for (double& r : a.rates_of(i)) r = std::tanh(gauss(rng));
    for (double& p : a.params_of(i)) p = 0.3 * gauss(rng);
  }
  return a;
}

inline ResourceSet random_resources(std::mt19937_64& rng, std::size_t capacity, double width,
                                    double height, double max_value,
                                    double active_probability = 0.8) {
  ResourceSet r(capacity);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t n = 0; n < capacity; ++n) {
    if (u01(rng) >= active_probability) continue;
    r.active[n] = 1;
    r.px[n] = u01(rng) * width;
    r.py[n] = u01(rng) * height;
    r.value[n] = u01(rng) * max_value;
  }
  return r;
}

}  // namespace forage::testing
