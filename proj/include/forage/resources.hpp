#pragma once

#include <vector>

#include "forage/kernels.hpp"
#include "forage/parallel.hpp"
#include "forage/state.hpp"

namespace forage {

struct HarvestKernelParams {
  double gain = 1.0;    // c
  double scale = 1.0;   // sigma, length
  double cutoff = 5.0;  // R, length

  kernels::KernelShape shape() const { return {gain, scale * scale, cutoff * cutoff}; }
};

HarvestKernelParams harvest_params(const SimConfig& config);

/// w = c / (1 + d^2 / sigma^2) for d <= R, else 0. d is the minimum-image
/// distance in a periodic world.
double harvest_rate(Vec2 resource, Vec2 agent, const HarvestKernelParams& k,
                    const WorldGeometry& world);

/// Harvest accounting for one step, in resource units.
struct HarvestReport {
  std::vector<double> per_agent;     // credited to each agent slot
  std::vector<double> per_resource;  // extracted from each resource slot
  double total_extracted = 0.0;      // sum of per_resource in slot order
};

struct ResourceStepResult {
  ResourceSet resources;
  HarvestReport report;
};

/// Logistic growth plus rationed harvesting.
///
/// For each active resource: growth g = eps s - alpha s^2, supply after growth
/// A = max(0, s + dt g), demand D = sum_m w(x_n, x_m), extraction
/// E = min(dt D, A), s' = A - E. When demand exceeds supply every agent's
/// share is scaled by E / (dt D). Credits are summed per agent in resource
/// slot order, so the result does not depend on the worker count.
ResourceStepResult resource_step(ResourceSet resources, const AgentSet& agents,
                                 const SimConfig& config, const WorldGeometry& world, double dt,
                                 const Executor& executor,
                                 const kernels::KernelTable& k = kernels::active());

/// Logistic growth term, written so that s == eps / alpha gives exactly zero.
double logistic_growth(double s, double epsilon, double alpha);

}  // namespace forage
