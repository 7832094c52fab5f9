#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "forage/config.hpp"
#include "forage/kernels.hpp"
#include "forage/parallel.hpp"
#include "forage/state.hpp"

namespace forage {

constexpr std::size_t observation_dim(std::size_t n_rays) { return n_rays + 6; }

/// Frozen per-agent observation layout:
///   [0, K)   ray distances, ray k at angle 2*pi*k/K from the heading
///   K        resource signal
///   K+1, K+2 resource signal gradient (x, y)
///   K+3, K+4 own velocity (x, y)
///   K+5      own energy
struct ObservationLayout {
  std::size_t n_rays = 0;

  std::size_t rays() const { return 0; }
  std::size_t signal() const { return n_rays; }
  std::size_t gradient() const { return n_rays + 1; }
  std::size_t velocity() const { return n_rays + 3; }
  std::size_t energy() const { return n_rays + 5; }
  std::size_t dim() const { return observation_dim(n_rays); }
};

/// Observations for every slot, row-major (capacity x dim). Inactive rows are
/// zero.
struct ObservationBatch {
  ObservationBatch() = default;
  ObservationBatch(std::size_t capacity, std::size_t dim)
      : capacity(capacity), dim(dim), data(capacity * dim, 0.0) {}

  std::span<const double> row(std::size_t slot) const { return {data.data() + slot * dim, dim}; }
  std::span<double> row(std::size_t slot) { return {data.data() + slot * dim, dim}; }

  std::size_t capacity = 0;
  std::size_t dim = 0;
  std::vector<double> data;
};

struct SensorParams {
  std::size_t n_rays = 8;
  double ray_max_range = 10.0;
  kernels::KernelShape kernel;  // gain unused
};

SensorParams sensor_params(const SimConfig& config);

/// Distance along the ray to the segment, +infinity when it misses. Rays
/// parallel to the segment never hit it.
double ray_segment_distance(Vec2 origin, Vec2 direction, const Segment& segment);

/// Nearest hit over all walls, plus the world faces unless the world is
/// periodic; max_range when nothing is closer.
double ray_cast(Vec2 origin, Vec2 direction, const WorldGeometry& world, double max_range);

/// Unit heading along the velocity, or +x when speed < 1e-9.
Vec2 heading(Vec2 velocity);

/// Fills one observation row for the agent in `slot`.
void observe_agent(const AgentSet& agents, std::size_t slot, const ResourceSet& resources,
                   const WorldGeometry& world, const SensorParams& params, std::span<double> out,
                   const kernels::KernelTable& k = kernels::active());

ObservationBatch observe(const AgentSet& agents, const ResourceSet& resources,
                         const WorldGeometry& world, const SimConfig& config,
                         const Executor& executor,
                         const kernels::KernelTable& k = kernels::active());

kernels::Metric metric_of(const WorldGeometry& world);

}  // namespace forage
