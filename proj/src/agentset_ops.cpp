#include "forage/agentset_ops.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

namespace forage {

std::size_t SlotMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

namespace {

using SlotTest = std::function<bool(const AgentSet&, std::size_t)>;

struct PredicateEntry {
  std::string_view name;
  std::size_t arity;
  std::function<SlotTest(const std::vector<double>&)> bind;
};

const std::vector<PredicateEntry>& registry() {
  static const std::vector<PredicateEntry> entries = {
      {"energy_below", 1,
       [](const std::vector<double>& a) -> SlotTest {
         return [t = a[0]](const AgentSet& s, std::size_t i) { return s.energy[i] < t; };
       }},
      {"energy_above", 1,
       [](const std::vector<double>& a) -> SlotTest {
         return [t = a[0]](const AgentSet& s, std::size_t i) { return s.energy[i] > t; };
       }},
      {"energy_at_most", 1,
       [](const std::vector<double>& a) -> SlotTest {
         return [t = a[0]](const AgentSet& s, std::size_t i) { return s.energy[i] <= t; };
       }},
      {"energy_at_least", 1,
       [](const std::vector<double>& a) -> SlotTest {
         return [t = a[0]](const AgentSet& s, std::size_t i) { return s.energy[i] >= t; };
       }},
      {"uid_equals", 1,
       [](const std::vector<double>& a) -> SlotTest {
         return [u = a[0]](const AgentSet& s, std::size_t i) {
           return static_cast<double>(s.uid[i]) == u;
         };
       }},
      {"in_region", 4,
       [](const std::vector<double>& a) -> SlotTest {
         return [x0 = a[0], y0 = a[1], x1 = a[2], y1 = a[3]](const AgentSet& s, std::size_t i) {
           return s.px[i] >= x0 && s.px[i] <= x1 && s.py[i] >= y0 && s.py[i] <= y1;
         };
       }},
  };
  return entries;
}

}  // namespace

const std::vector<std::string_view>& predicate_names() {
  static const std::vector<std::string_view> names = [] {
    std::vector<std::string_view> out;
    for (const auto& e : registry()) out.push_back(e.name);
    return out;
  }();
  return names;
}

SlotMask select(const AgentSet& set, const Predicate& predicate) {
  const auto& reg = registry();
  auto it = std::ranges::find(reg, std::string_view(predicate.name), &PredicateEntry::name);
  if (it == reg.end()) throw UnknownNameError(fmt::format("unknown predicate '{}'", predicate.name));
  if (predicate.args.size() != it->arity)
    throw UnknownNameError(fmt::format("predicate '{}' takes {} argument(s), got {}",
                                       predicate.name, it->arity, predicate.args.size()));
  const SlotTest test = it->bind(predicate.args);
  SlotMask mask(set.capacity());
  for (std::size_t i = 0; i < set.capacity(); ++i)
    if (set.active[i] && test(set, i)) mask.set(i);
  return mask;
}

const std::vector<std::string_view>& sort_keys() {
  static const std::vector<std::string_view> keys = {"energy", "uid", "position_x", "position_y"};
  return keys;
}

AgentSet sort(AgentSet set, std::string_view key, bool descending) {
  std::function<double(std::size_t)> value;
  if (key == "energy") value = [&](std::size_t i) { return set.energy[i]; };
  else if (key == "uid") value = [&](std::size_t i) { return static_cast<double>(set.uid[i]); };
  else if (key == "position_x") value = [&](std::size_t i) { return set.px[i]; };
  else if (key == "position_y") value = [&](std::size_t i) { return set.py[i]; };
  else throw UnknownNameError(fmt::format("unknown sort key '{}'", key));

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < set.capacity(); ++i)
    if (set.active[i]) order.push_back(i);
  if (key == "uid") {
    // uids can exceed 2^53; compare them as integers.
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
      return descending ? set.uid[a] > set.uid[b] : set.uid[a] < set.uid[b];
    });
  } else {
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
      return descending ? value(a) > value(b) : value(a) < value(b);
    });
  }

  AgentSet out(set.capacity(), set.n_neurons(), set.n_params());
  out.next_uid = set.next_uid;
  out.overflow_count = set.overflow_count;
  for (std::size_t slot = 0; slot < order.size(); ++slot) out.copy_slot_from(set, order[slot], slot);
  return out;
}

SpawnBatch::SpawnBatch(std::size_t k_max, std::size_t n_neurons, std::size_t n_params)
    : entries(k_max, n_neurons, n_params) {}

std::size_t SpawnBatch::push(Vec2 position, Vec2 velocity, double energy,
                             std::span<const double> rates, std::span<const double> params) {
  auto free = std::ranges::find(entries.active, std::uint8_t{0});
  if (free == entries.active.end()) throw CapacityError("spawn batch is full");
  const auto i = static_cast<std::size_t>(free - entries.active.begin());
  entries.active[i] = 1;
  entries.px[i] = position.x;
  entries.py[i] = position.y;
  entries.vx[i] = velocity.x;
  entries.vy[i] = velocity.y;
  entries.energy[i] = energy;
  std::ranges::copy(rates, entries.rates_of(i).begin());
  std::ranges::copy(params, entries.params_of(i).begin());
  return i;
}

AddResult add(AgentSet set, const SpawnBatch& batch, OverflowPolicy policy) {
  const AgentSet& src = batch.entries;
  if (src.n_neurons() != set.n_neurons() || src.n_params() != set.n_params())
    throw std::invalid_argument("add: spawn batch shape does not match agent set");

  const std::size_t requested = src.active_count();
  const std::size_t free_slots = set.capacity() - set.active_count();
  if (requested > free_slots && policy == OverflowPolicy::strict)
    throw CapacityError(fmt::format("cannot add {} agents: only {} free slots of {}", requested,
                                    free_slots, set.capacity()));

  std::size_t accepted = 0;
  std::size_t slot = 0;
  for (std::size_t j = 0; j < src.capacity() && accepted < free_slots; ++j) {
    if (!src.active[j]) continue;
    while (set.active[slot]) ++slot;
    set.copy_slot_from(src, j, slot);
    set.active[slot] = 1;
    if (set.next_uid == std::numeric_limits<Uid>::max())
      throw CapacityError("uid counter exhausted");
    set.uid[slot] = set.next_uid++;
    ++accepted;
  }
  set.overflow_count += requested - accepted;
  return {std::move(set), accepted};
}

AgentSet remove(AgentSet set, const SlotMask& mask) {
  if (mask.size() != set.capacity())
    throw std::invalid_argument("remove: mask shape does not match agent set");
  for (std::size_t i = 0; i < set.capacity(); ++i)
    if (mask[i] && set.active[i]) set.clear_slot(i);
  return set;
}

}  // namespace forage
