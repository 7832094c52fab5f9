#include "forage/dynamics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace forage {

AgentSet integrate(AgentSet agents, std::span<const Vec2> accel, double dt, double max_speed) {
  if (accel.size() != agents.capacity())
    throw std::invalid_argument("integrate: acceleration count does not match capacity");
  for (std::size_t i = 0; i < agents.capacity(); ++i) {
    if (!agents.active[i]) continue;
    double vx = agents.vx[i] + accel[i].x * dt;
    double vy = agents.vy[i] + accel[i].y * dt;
    if (max_speed > 0.0) {
      const double speed = std::hypot(vx, vy);
      if (speed > max_speed) {
        vx *= max_speed / speed;
        vy *= max_speed / speed;
      }
    }
    agents.vx[i] = vx;
    agents.vy[i] = vy;
    agents.px[i] += vx * dt;
    agents.py[i] += vy * dt;
    if (!(std::isfinite(agents.px[i]) && std::isfinite(agents.py[i]) && std::isfinite(vx) &&
          std::isfinite(vy)))
      throw NumericalError(agents.uid[i],
                           fmt::format("non-finite motion state for agent uid {}", agents.uid[i]));
  }
  return agents;
}

AxisState enforce_axis(AxisState s, double extent, BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::periodic: {
      if (s.x >= 0.0 && s.x < extent) return s;
      double x = s.x - extent * std::floor(s.x / extent);
      if (x >= extent || x < 0.0) x = 0.0;  // rounding at the seam
      return {x, s.v};
    }
    case BoundaryMode::reflective: {
      if (s.x >= 0.0 && s.x <= extent) return s;
      if (s.x < 0.0 && s.x >= -extent) return {-s.x, -s.v};
      if (s.x > extent && s.x <= 2.0 * extent) return {2.0 * extent - s.x, -s.v};
      // Unfold onto the period-2L sawtooth; an odd number of reflections
      // flips the velocity.
      const double k = std::floor(s.x / extent);
      double x = s.x - k * extent;
      const bool odd = std::fmod(std::fabs(k), 2.0) == 1.0;
      if (odd) x = extent - x;
      x = std::clamp(x, 0.0, extent);
      return {x, odd ? -s.v : s.v};
    }
    case BoundaryMode::clamped: {
      if (s.x < 0.0) return {0.0, 0.0};
      if (s.x > extent) return {extent, 0.0};
      return s;
    }
  }
  return s;
}

AgentSet apply_boundary(AgentSet agents, const WorldGeometry& world) {
  for (std::size_t i = 0; i < agents.capacity(); ++i) {
    if (!agents.active[i]) continue;
    const AxisState ax = enforce_axis({agents.px[i], agents.vx[i]}, world.width, world.boundary_mode);
    const AxisState ay = enforce_axis({agents.py[i], agents.vy[i]}, world.height, world.boundary_mode);
    agents.px[i] = ax.x;
    agents.vx[i] = ax.v;
    agents.py[i] = ay.x;
    agents.vy[i] = ay.v;
  }
  return agents;
}

bool contained(Vec2 p, const WorldGeometry& world) {
  if (world.periodic())
    return p.x >= 0.0 && p.x < world.width && p.y >= 0.0 && p.y < world.height;
  return p.x >= 0.0 && p.x <= world.width && p.y >= 0.0 && p.y <= world.height;
}

}  // namespace forage
