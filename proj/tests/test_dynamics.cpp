#include <doctest.h>

#include <random>

#include "forage/dynamics.hpp"
#include "oracles/reference.hpp"
#include "support.hpp"

using namespace forage;

namespace {

AgentSet one_agent(double x, double y, double vx, double vy) {
  AgentSet a(2, 1, 1);
  a.active[0] = 1;
  a.uid[0] = 1;
  a.px[0] = x;
  a.py[0] = y;
  a.vx[0] = vx;
  a.vy[0] = vy;
  return a;
}

double max_error(double dt) {
  const double x0 = 0.3, v0 = -0.7, u = 1.9;
  AgentSet a = one_agent(x0, 0, v0, 0);
  const std::vector<Vec2> accel{{u, 0}, {0, 0}};
  double worst = 0.0;
  const int steps = static_cast<int>(std::lround(1.0 / dt));
  for (int n = 1; n <= steps; ++n) {
    a = integrate(std::move(a), accel, dt);
    const double t = n * dt;
    worst = std::max(worst, std::fabs(a.px[0] - (x0 + v0 * t + 0.5 * u * t * t)));
  }
  return worst;
}

}  // namespace

TEST_CASE("one semi-implicit step by hand") {
  AgentSet a = one_agent(0, 0, 0, 0);
  a = integrate(std::move(a), std::vector<Vec2>{{1, 0}, {0, 0}}, 0.1);
  CHECK(a.vx[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(a.px[0] == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(a.vy[0] == 0.0);
  CHECK(a.active[1] == 0);
  CHECK(a.padding_violations() == 0);
}

TEST_CASE("free drift") {
  AgentSet a = one_agent(1, 2, 0.5, -1.5);
  a = integrate(std::move(a), std::vector<Vec2>(2), 0.2);
  CHECK(a.vx[0] == 0.5);
  CHECK(a.px[0] == 1 + 0.5 * 0.2);
  CHECK(a.py[0] == 2 - 1.5 * 0.2);
}

TEST_CASE("first-order convergence to the closed form") {
  const double e1 = max_error(0.1), e2 = max_error(0.05), e3 = max_error(0.025);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
  CHECK(e2 / e3 == doctest::Approx(2.0).epsilon(0.1));
  // max error is u * t * dt / 2 at t = 1
  CHECK(e1 <= 0.5 * 1.9 * 0.1 + 1e-12);
}

TEST_CASE("speed cap rescales the velocity") {
  AgentSet a = one_agent(0, 0, 3, 4);
  a = integrate(std::move(a), std::vector<Vec2>(2), 1.0, 1.0);
  CHECK(a.vx[0] == doctest::Approx(0.6));
  CHECK(a.vy[0] == doctest::Approx(0.8));
}

TEST_CASE("non-finite state names the uid") {
  AgentSet a = one_agent(0, 0, 0, 0);
  a.uid[0] = 77;
  try {
    integrate(a, std::vector<Vec2>{{std::numeric_limits<double>::infinity(), 0}, {0, 0}}, 0.1);
    FAIL("no error");
  } catch (const NumericalError& e) {
    CHECK(e.uid() == 77);
  }
}

TEST_CASE("hand boundary cases") {
  CHECK(enforce_axis({10.5, 1.0}, 10, BoundaryMode::periodic).x == doctest::Approx(0.5));
  const auto r = enforce_axis({-0.3, -1.0}, 10, BoundaryMode::reflective);
  CHECK(r.x == doctest::Approx(0.3));
  CHECK(r.v == 1.0);
  const auto c = enforce_axis({12.0, 2.0}, 10, BoundaryMode::clamped);
  CHECK(c.x == 10.0);
  CHECK(c.v == 0.0);
  const auto seam = enforce_axis({-1e-18, 0.0}, 10, BoundaryMode::periodic);
  CHECK(seam.x >= 0.0);
  CHECK(seam.x < 10.0);
}

TEST_CASE("random out-of-bounds states obey each mode") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-35.0, 45.0), v(-3, 3);
  for (auto mode : {BoundaryMode::periodic, BoundaryMode::reflective, BoundaryMode::clamped}) {
    for (int i = 0; i < 1000; ++i) {
      const AxisState in{u(rng), v(rng)};
      const auto got = enforce_axis(in, 10.0, mode);
      const auto ref = reference::boundary({in.x, in.v}, 10.0, mode);
      CAPTURE(in.x);
      CHECK(got.x >= 0.0);
      if (mode == BoundaryMode::periodic) CHECK(got.x < 10.0);
      else CHECK(got.x <= 10.0);
      CHECK(got.x == doctest::Approx(ref.x).epsilon(1e-12).scale(10));
      CHECK(got.v == ref.v);
    }
  }
}

TEST_CASE("apply_boundary is idempotent and contains every agent") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-30.0, 50.0);
  for (auto mode : {BoundaryMode::periodic, BoundaryMode::reflective, BoundaryMode::clamped}) {
    const WorldGeometry world{20.0, 15.0, mode, {}};
    AgentSet a = testing::random_agents(rng, 50, 2, 3, 20, 15);
    for (std::size_t i = 0; i < 50; ++i)
      if (a.active[i]) {
        a.px[i] = u(rng);
        a.py[i] = u(rng);
      }
    const AgentSet once = apply_boundary(a, world);
    for (std::size_t i = 0; i < 50; ++i)
      if (once.active[i]) CHECK(contained(once.position(i), world));
    CHECK(apply_boundary(once, world) == once);
    CHECK(once.padding_violations() == 0);
  }
}
