#include "forage/policy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace forage {

PolicyLayout policy_layout(const SimConfig& config) {
  return {config.n_neurons, observation_dim(config.n_rays), 2};
}

void policy_init(CounterRng& rng, const PolicyLayout& layout, double gain, double tau,
                 std::span<double> out) {
  if (out.size() != layout.size())
    throw std::invalid_argument("policy_init: output span does not match layout");
  const double n = static_cast<double>(layout.n_neurons);
  const double rec_std = gain / std::sqrt(n);
  const double in_std = gain / std::sqrt(static_cast<double>(layout.obs_dim));
  const double out_std = gain / std::sqrt(n);

  std::ranges::fill(out, 0.0);
  for (std::size_t i = 0; i < layout.n_neurons * layout.n_neurons; ++i)
    out[layout.w_rec() + i] = rec_std * rng.normal();
  for (std::size_t i = 0; i < layout.n_neurons * layout.obs_dim; ++i)
    out[layout.w_in() + i] = in_std * rng.normal();
  for (std::size_t i = 0; i < layout.out_dim * layout.n_neurons; ++i)
    out[layout.w_out() + i] = out_std * rng.normal();
  out[layout.tau()] = tau;
}

std::vector<double> policy_init(CounterRng& rng, const PolicyLayout& layout, double gain,
                                double tau) {
  std::vector<double> out(layout.size());
  policy_init(rng, layout, gain, tau, out);
  return out;
}

void policy_step(const PolicyLayout& layout, std::span<const double> params,
                 std::span<double> rates, std::span<const double> obs, double dt,
                 std::span<double> control, Uid uid, const kernels::KernelTable& k) {
  const std::size_t n = layout.n_neurons;
  thread_local std::vector<double> drive;
  drive.assign(params.begin() + layout.bias(), params.begin() + layout.bias() + n);

  k.matvec_add(params.data() + layout.w_rec(), rates.data(), drive.data(), n, n);
  k.matvec_add(params.data() + layout.w_in(), obs.data(), drive.data(), n, layout.obs_dim);

  const double step = dt / params[layout.tau()];
  bool finite = std::isfinite(step);
  for (std::size_t i = 0; i < n; ++i) {
    rates[i] = rates[i] + step * (-rates[i] + std::tanh(drive[i]));
    finite = finite && std::isfinite(rates[i]);
  }

  std::ranges::fill(control, 0.0);
  k.matvec_add(params.data() + layout.w_out(), rates.data(), control.data(), layout.out_dim, n);
  for (double& u : control) {
    u /= static_cast<double>(n);
    finite = finite && std::isfinite(u);
  }
  if (!finite)
    throw NumericalError(uid, fmt::format("non-finite policy state for agent uid {}", uid));
}

PolicyBatchResult policy_step(AgentSet agents, const ObservationBatch& obs, double dt,
                              const Executor& executor, const kernels::KernelTable& k) {
  const PolicyLayout layout{agents.n_neurons(), obs.dim, 2};
  if (layout.size() != agents.n_params() || obs.capacity != agents.capacity())
    throw std::invalid_argument("policy_step: observation batch does not match agent set");

  std::vector<Vec2> control(agents.capacity());
  std::vector<std::uint8_t> failed(agents.capacity(), 0);
  executor.for_ranges(agents.capacity(), [&](std::size_t begin, std::size_t end) {
    double u[2];
    for (std::size_t i = begin; i < end; ++i) {
      if (!agents.active[i]) continue;
      try {
        policy_step(layout, agents.params_of(i), agents.rates_of(i), obs.row(i), dt, u,
                    agents.uid[i], k);
      } catch (const NumericalError&) {
        failed[i] = 1;
      }
      control[i] = {u[0], u[1]};
    }
  });
  // Report the lowest failing slot so the error does not depend on scheduling.
  auto bad = std::ranges::find(failed, std::uint8_t{1});
  if (bad != failed.end()) {
    const Uid uid = agents.uid[static_cast<std::size_t>(bad - failed.begin())];
    throw NumericalError(uid, fmt::format("non-finite policy state for agent uid {}", uid));
  }
  return {std::move(agents), std::move(control)};
}

}  // namespace forage
