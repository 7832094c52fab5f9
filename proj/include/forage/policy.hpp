#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "forage/kernels.hpp"
#include "forage/parallel.hpp"
#include "forage/rng.hpp"
#include "forage/sensors.hpp"
#include "forage/state.hpp"

namespace forage {

/// Offsets into the flat per-agent parameter vector. The order is frozen:
/// W_rec (n x n, row-major), W_in (n x obs_dim), bias (n),
/// W_out (out_dim x n), tau.
struct PolicyLayout {
  std::size_t n_neurons = 0;
  std::size_t obs_dim = 0;
  std::size_t out_dim = 2;

  std::size_t w_rec() const { return 0; }
  std::size_t w_in() const { return n_neurons * n_neurons; }
  std::size_t bias() const { return w_in() + n_neurons * obs_dim; }
  std::size_t w_out() const { return bias() + n_neurons; }
  std::size_t tau() const { return w_out() + out_dim * n_neurons; }
  std::size_t size() const { return tau() + 1; }
};

/// Layout the engine uses: obs_dim from the sensor layout, out_dim 2.
PolicyLayout policy_layout(const SimConfig& config);

/// Random recurrent network: W_rec ~ N(0, gain^2/n), W_in ~ N(0, gain^2/obs_dim),
/// W_out ~ N(0, gain^2/n), zero bias. Draw order follows the layout.
void policy_init(CounterRng& rng, const PolicyLayout& layout, double gain, double tau,
                 std::span<double> out);
std::vector<double> policy_init(CounterRng& rng, const PolicyLayout& layout, double gain,
                                double tau);

/// One Euler step of tau dr/dt = -r + tanh(W_rec r + W_in obs + b), then the
/// readout u = (W_out r') / n. Updates `rates` in place. Throws
/// NumericalError(uid) if the new state or readout is not finite.
void policy_step(const PolicyLayout& layout, std::span<const double> params,
                 std::span<double> rates, std::span<const double> obs, double dt,
                 std::span<double> control, Uid uid = 0,
                 const kernels::KernelTable& k = kernels::active());

struct PolicyBatchResult {
  AgentSet agents;
  std::vector<Vec2> control;  // one per slot, zero for inactive slots
};

/// policy_step over every active slot (out_dim must be 2). Inactive slots
/// keep zero rates and get zero control.
PolicyBatchResult policy_step(AgentSet agents, const ObservationBatch& obs, double dt,
                              const Executor& executor,
                              const kernels::KernelTable& k = kernels::active());

}  // namespace forage
