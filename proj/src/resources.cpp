#include "forage/resources.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "forage/sensors.hpp"

namespace forage {

HarvestKernelParams harvest_params(const SimConfig& config) {
  return {config.kernel_gain, config.kernel_scale, config.kernel_cutoff};
}

double harvest_rate(Vec2 resource, Vec2 agent, const HarvestKernelParams& k,
                    const WorldGeometry& world) {
  double dx = resource.x - agent.x;
  double dy = resource.y - agent.y;
  if (world.periodic()) {
    dx = kernels::wrap_delta(dx, world.width);
    dy = kernels::wrap_delta(dy, world.height);
  }
  const double d2 = dx * dx + dy * dy;
  if (d2 > k.cutoff * k.cutoff) return 0.0;
  return k.gain / (1.0 + d2 / (k.scale * k.scale));
}

double logistic_growth(double s, double epsilon, double alpha) {
  if (epsilon == 0.0) return -alpha * s * s;
  // eps s (1 - s / K) with K = eps / alpha, algebraically eps s - alpha s^2.
  const double capacity = epsilon / alpha;
  return epsilon * s * (1.0 - s / capacity);
}

namespace {

struct Share {
  std::uint32_t agent;
  double amount;
};

}  // namespace

ResourceStepResult resource_step(ResourceSet resources, const AgentSet& agents,
                                 const SimConfig& config, const WorldGeometry& world, double dt,
                                 const Executor& executor, const kernels::KernelTable& k) {
  const std::size_t n_res = resources.capacity();
  const std::size_t n_agents = agents.capacity();
  const kernels::KernelShape shape = harvest_params(config).shape();
  const kernels::Metric metric = metric_of(world);

  HarvestReport report;
  report.per_agent.assign(n_agents, 0.0);
  report.per_resource.assign(n_res, 0.0);
  std::vector<std::vector<Share>> shares(n_res);

  executor.for_ranges(n_res, [&](std::size_t begin, std::size_t end) {
    std::vector<double> w(n_agents);
    for (std::size_t n = begin; n < end; ++n) {
      if (!resources.active[n]) continue;
      const double s = resources.value[n];
      const double supply =
          std::max(0.0, s + dt * logistic_growth(s, config.epsilon, config.alpha));

      k.pair_weights(resources.px[n], resources.py[n], agents.px.data(), agents.py.data(),
                     agents.active.data(), n_agents, metric, shape, w.data());
      double demand_rate = 0.0;
      for (std::size_t m = 0; m < n_agents; ++m) demand_rate += w[m];
      const double demand = dt * demand_rate;

      double extracted = demand;
      double ration = 1.0;
      if (demand > supply) {
        extracted = supply;
        ration = supply / demand;
      }
      resources.value[n] = demand > supply ? 0.0 : supply - extracted;
      report.per_resource[n] = extracted;

      if (extracted > 0.0) {
        auto& row = shares[n];
        for (std::size_t m = 0; m < n_agents; ++m)
          if (w[m] > 0.0) row.push_back({static_cast<std::uint32_t>(m), dt * w[m] * ration});
      }
    }
  });

  for (std::size_t n = 0; n < n_res; ++n) {
    report.total_extracted += report.per_resource[n];
    for (const Share& sh : shares[n]) report.per_agent[sh.agent] += sh.amount;
  }
  return {std::move(resources), std::move(report)};
}

}  // namespace forage
