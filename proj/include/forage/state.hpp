#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "forage/config.hpp"
#include "forage/geometry.hpp"

namespace forage {

using Uid = std::uint64_t;

/// Sizes of every array in a set, captured at construction and compared by
/// the shape audit.
struct ShapeSignature {
  std::vector<std::size_t> sizes;
  friend bool operator==(const ShapeSignature&, const ShapeSignature&) = default;
};

/// Fixed-capacity, structure-of-arrays agent storage.
///
/// Slot i is live iff active[i] == 1. Inactive slots are all-zero in every
/// field (uid 0 included), so uid 0 never names a live agent. No operation
/// resizes any array after construction.
struct AgentSet {
  AgentSet() = default;
  AgentSet(std::size_t capacity, std::size_t n_neurons, std::size_t n_params);

  std::size_t capacity() const { return active.size(); }
  std::size_t n_neurons() const { return neurons_; }
  std::size_t n_params() const { return params_per_slot_; }
  std::size_t active_count() const;

  std::span<double> rates_of(std::size_t slot) {
    return {rates.data() + slot * neurons_, neurons_};
  }
  std::span<const double> rates_of(std::size_t slot) const {
    return {rates.data() + slot * neurons_, neurons_};
  }
  std::span<double> params_of(std::size_t slot) {
    return {params.data() + slot * params_per_slot_, params_per_slot_};
  }
  std::span<const double> params_of(std::size_t slot) const {
    return {params.data() + slot * params_per_slot_, params_per_slot_};
  }
  Vec2 position(std::size_t slot) const { return {px[slot], py[slot]}; }
  Vec2 velocity(std::size_t slot) const { return {vx[slot], vy[slot]}; }

  /// Restores the zero-padding of one slot.
  void clear_slot(std::size_t slot);
  /// Copies every per-slot field of `src[from]` into slot `to`.
  void copy_slot_from(const AgentSet& src, std::size_t from, std::size_t to);

  ShapeSignature shape() const;
  /// Number of inactive slots holding any nonzero value.
  std::size_t padding_violations() const;

  std::vector<std::uint8_t> active;
  std::vector<Uid> uid;
  std::vector<double> px, py;
  std::vector<double> vx, vy;
  std::vector<double> energy;
  std::vector<double> rates;   // capacity x n_neurons, row-major
  std::vector<double> params;  // capacity x n_params, row-major
  Uid next_uid = 1;
  std::uint64_t overflow_count = 0;

  friend bool operator==(const AgentSet&, const AgentSet&) = default;

 private:
  std::size_t neurons_ = 0;
  std::size_t params_per_slot_ = 0;
};

struct ResourceSet {
  ResourceSet() = default;
  explicit ResourceSet(std::size_t capacity);

  std::size_t capacity() const { return active.size(); }
  std::size_t active_count() const;
  Vec2 position(std::size_t slot) const { return {px[slot], py[slot]}; }

  ShapeSignature shape() const;
  std::size_t padding_violations() const;

  std::vector<std::uint8_t> active;
  std::vector<double> px, py;
  std::vector<double> value;

  friend bool operator==(const ResourceSet&, const ResourceSet&) = default;
};

struct WorldGeometry {
  double width = 0.0;
  double height = 0.0;
  BoundaryMode boundary_mode = BoundaryMode::periodic;
  std::vector<Segment> walls;

  bool periodic() const { return boundary_mode == BoundaryMode::periodic; }

  friend bool operator==(const WorldGeometry&, const WorldGeometry&) = default;
};

WorldGeometry make_world(const SimConfig& config);

/// Non-finite state detected; carries the agent uid and, once the engine has
/// seen it, the step index.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(Uid uid, const std::string& what, std::uint64_t step = 0);
  Uid uid() const noexcept { return uid_; }
  std::uint64_t step() const noexcept { return step_; }

 private:
  Uid uid_;
  std::uint64_t step_;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialState {
  AgentSet agents;
  ResourceSet resources;
  WorldGeometry world;
};

/// Builds the step-0 state. Pure function of the config (including its seed).
/// Throws CapacityError when an initial count exceeds its capacity.
InitialState state_init(const SimConfig& config);

/// Carrying capacity epsilon / alpha; the initial value of every resource.
double carrying_capacity(const SimConfig& config);

}  // namespace forage
