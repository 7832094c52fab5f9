#pragma once

#include <span>

#include "forage/state.hpp"

namespace forage {

/// Semi-implicit Euler step of the planar double integrator, per axis:
/// v' = v + u dt, x' = x + v' dt. With max_speed > 0 the new velocity is
/// rescaled to at most max_speed before the position update. Inactive slots
/// are left untouched. Throws NumericalError(uid) on non-finite results.
AgentSet integrate(AgentSet agents, std::span<const Vec2> accel, double dt,
                   double max_speed = 0.0);

struct AxisState {
  double x;
  double v;
};

/// Boundary law along one axis of extent [0, extent]:
///   periodic   - x wrapped into [0, extent)
///   reflective - x mirrored back inside, v negated once per reflection
///   clamped    - x clipped to the face, v zeroed if it was clipped
AxisState enforce_axis(AxisState s, double extent, BoundaryMode mode);

AgentSet apply_boundary(AgentSet agents, const WorldGeometry& world);

/// Containment rule of the boundary mode ([0, L) for periodic, [0, L] otherwise).
bool contained(Vec2 position, const WorldGeometry& world);

}  // namespace forage
