#include "forage/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace forage {

SensorParams sensor_params(const SimConfig& config) {
  SensorParams p;
  p.n_rays = config.n_rays;
  p.ray_max_range = config.ray_max_range;
  p.kernel.gain = 1.0;
  p.kernel.scale_sq = config.kernel_scale * config.kernel_scale;
  p.kernel.cutoff_sq = config.kernel_cutoff * config.kernel_cutoff;
  return p;
}

kernels::Metric metric_of(const WorldGeometry& world) {
  return {world.width, world.height, world.periodic()};
}

double ray_segment_distance(Vec2 origin, Vec2 direction, const Segment& segment) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Vec2 e = segment.b - segment.a;
  const double denom = cross(direction, e);
  if (denom == 0.0) return inf;
  const Vec2 w = segment.a - origin;
  const double t = cross(w, e) / denom;
  const double u = cross(w, direction) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return inf;
  return t;
}

namespace {

// Exit distance from inside the box along the ray.
double face_distance(Vec2 o, Vec2 d, double width, double height) {
  double t = std::numeric_limits<double>::infinity();
  if (d.x > 0.0) t = std::min(t, (width - o.x) / d.x);
  if (d.x < 0.0) t = std::min(t, -o.x / d.x);
  if (d.y > 0.0) t = std::min(t, (height - o.y) / d.y);
  if (d.y < 0.0) t = std::min(t, -o.y / d.y);
  return std::max(t, 0.0);
}

}  // namespace

double ray_cast(Vec2 origin, Vec2 direction, const WorldGeometry& world, double max_range) {
  double best = max_range;
  for (const Segment& s : world.walls) best = std::min(best, ray_segment_distance(origin, direction, s));
  if (!world.periodic()) best = std::min(best, face_distance(origin, direction, world.width, world.height));
  return best;
}

Vec2 heading(Vec2 velocity) {
  const double speed = norm(velocity);
  if (speed < 1e-9) return {1.0, 0.0};
  return {velocity.x / speed, velocity.y / speed};
}

void observe_agent(const AgentSet& agents, std::size_t slot, const ResourceSet& resources,
                   const WorldGeometry& world, const SensorParams& params, std::span<double> out,
                   const kernels::KernelTable& k) {
  const ObservationLayout layout{params.n_rays};
  std::ranges::fill(out, 0.0);
  if (!agents.active[slot]) return;

  const Vec2 pos = agents.position(slot);
  const Vec2 vel = agents.velocity(slot);
  const Vec2 h = heading(vel);
  const double K = static_cast<double>(params.n_rays);
  for (std::size_t r = 0; r < params.n_rays; ++r) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / K;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Vec2 dir{c * h.x - s * h.y, s * h.x + c * h.y};
    out[layout.rays() + r] = ray_cast(pos, dir, world, params.ray_max_range);
  }

  const auto f = k.field(pos.x, pos.y, resources.px.data(), resources.py.data(),
                         resources.value.data(), resources.capacity(), metric_of(world),
                         params.kernel);
  out[layout.signal()] = f.signal;
  out[layout.gradient()] = f.grad_x;
  out[layout.gradient() + 1] = f.grad_y;
  out[layout.velocity()] = vel.x;
  out[layout.velocity() + 1] = vel.y;
  out[layout.energy()] = agents.energy[slot];
}

ObservationBatch observe(const AgentSet& agents, const ResourceSet& resources,
                         const WorldGeometry& world, const SimConfig& config,
                         const Executor& executor, const kernels::KernelTable& k) {
  const SensorParams params = sensor_params(config);
  ObservationBatch batch(agents.capacity(), observation_dim(params.n_rays));
  executor.for_ranges(agents.capacity(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      if (agents.active[i]) observe_agent(agents, i, resources, world, params, batch.row(i), k);
  });
  return batch;
}

}  // namespace forage
