#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forage/config.hpp"
#include "forage/state.hpp"

namespace forage {

/// One flag per slot; same shape as the set it was built for.
struct SlotMask {
  SlotMask() = default;
  explicit SlotMask(std::size_t capacity) : bits(capacity, 0) {}

  std::size_t size() const { return bits.size(); }
  bool operator[](std::size_t i) const { return bits[i] != 0; }
  void set(std::size_t i, bool v = true) { bits[i] = v ? 1 : 0; }
  std::size_t count() const;

  std::vector<std::uint8_t> bits;

  friend bool operator==(const SlotMask&, const SlotMask&) = default;
};

/// A registry predicate applied to each active slot:
///   energy_below(t)      energy <  t
///   energy_above(t)      energy >  t
///   energy_at_most(t)    energy <= t
///   energy_at_least(t)   energy >= t
///   uid_equals(u)        uid == u
///   in_region(x0, y0, x1, y1)  x0 <= x <= x1 and y0 <= y <= y1
struct Predicate {
  std::string name;
  std::vector<double> args;
};

class UnknownNameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string_view>& predicate_names();

/// True exactly where the slot is active and the predicate holds. Throws
/// UnknownNameError for an unregistered name or a wrong argument count.
SlotMask select(const AgentSet& set, const Predicate& predicate);

/// Sort keys: energy, uid, position_x, position_y.
const std::vector<std::string_view>& sort_keys();

/// Stable sort of the active slots by key, packed to the front; inactive
/// slots follow as zero padding.
AgentSet sort(AgentSet set, std::string_view key, bool descending = false);

/// Fixed-shape batch of agents waiting for slots. Entries with active == 1
/// are real; the rest are zero.
struct SpawnBatch {
  SpawnBatch(std::size_t k_max, std::size_t n_neurons, std::size_t n_params);

  std::size_t k_max() const { return entries.capacity(); }
  std::size_t count() const { return entries.active_count(); }

  /// Appends a real entry in the first free batch slot; returns its index.
  /// The uid field is ignored by add().
  std::size_t push(Vec2 position, Vec2 velocity, double energy, std::span<const double> rates,
                   std::span<const double> params);

  AgentSet entries;
};

struct AddResult {
  AgentSet set;
  std::size_t accepted = 0;
};

/// Places real batch entries into the lowest free slots in batch order,
/// assigning fresh uids. Entries that do not fit raise CapacityError in
/// strict mode and are counted in overflow_count under drop_and_count.
AddResult add(AgentSet set, const SpawnBatch& batch, OverflowPolicy policy);

/// Clears every masked active slot back to zero padding.
AgentSet remove(AgentSet set, const SlotMask& mask);

}  // namespace forage
