#include <doctest.h>

#include <algorithm>
#include <random>

#include "forage/agentset_ops.hpp"
#include "oracles/reference.hpp"
#include "support.hpp"

using namespace forage;

namespace {

bool loop_predicate(const AgentSet& a, std::size_t i, const Predicate& p) {
  if (!a.active[i]) return false;
  const double e = a.energy[i];
  if (p.name == "energy_below") return e < p.args[0];
  if (p.name == "energy_above") return e > p.args[0];
  if (p.name == "energy_at_most") return e <= p.args[0];
  if (p.name == "energy_at_least") return e >= p.args[0];
  if (p.name == "uid_equals") return static_cast<double>(a.uid[i]) == p.args[0];
  return p.args[0] <= a.px[i] && a.px[i] <= p.args[2] && p.args[1] <= a.py[i] &&
         a.py[i] <= p.args[3];
}

SpawnBatch batch_of(std::size_t k, std::size_t n, std::size_t p, double energy0 = 1.0) {
  SpawnBatch b(k, n, p);
  std::vector<double> rates(n, 0.25), params(p, 0.5);
  for (std::size_t i = 0; i < k; ++i)
    b.push({double(i), 1.0}, {0.0, 0.0}, energy0 + double(i), rates, params);
  return b;
}

}  // namespace

TEST_CASE("select on an empty set is all false") {
  AgentSet a(5, 2, 3);
  for (auto name : predicate_names()) {
    Predicate p{std::string(name), name == "in_region" ? std::vector<double>{0, 0, 1, 1}
                                                       : std::vector<double>{0}};
    CHECK(select(a, p).count() == 0);
  }
}

TEST_CASE("energy_below(0) on energies -1 and 3") {
  AgentSet a(2, 1, 1);
  a.active = {1, 1};
  a.uid = {1, 2};
  a.energy = {-1.0, 3.0};
  const auto m = select(a, {"energy_below", {0.0}});
  CHECK(m[0]);
  CHECK_FALSE(m[1]);
}

TEST_CASE("select rejects unknown names and wrong arity") {
  AgentSet a(2, 1, 1);
  CHECK_THROWS_AS(select(a, {"taller_than", {1}}), UnknownNameError);
  CHECK_THROWS_AS(select(a, {"in_region", {1, 2}}), UnknownNameError);
  CHECK_THROWS_AS(sort(a, "height"), UnknownNameError);
}

TEST_CASE("select matches the slot loop on random sets") {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(-5, 15);
  for (int trial = 0; trial < 200; ++trial) {
    AgentSet a = testing::random_agents(rng, 30, 2, 2, 10, 10, 0.5);
    const std::vector<Predicate> preds = {
        {"energy_below", {u(rng)}},   {"energy_above", {u(rng)}},
        {"energy_at_most", {u(rng)}}, {"energy_at_least", {u(rng)}},
        {"uid_equals", {double(rng() % 20)}}, {"in_region", {u(rng), u(rng), u(rng), u(rng)}}};
    for (const auto& p : preds) {
      const auto m = select(a, p);
      REQUIRE(m.size() == 30);
      for (std::size_t i = 0; i < 30; ++i) CHECK(m[i] == loop_predicate(a, i, p));
    }
  }
}

TEST_CASE("sort: three-slot hand case") {
  AgentSet a(3, 1, 1);
  a.active = {1, 0, 1};
  a.uid = {1, 0, 2};
  a.energy = {2.0, 0.0, 1.0};
  a.next_uid = 3;
  const auto s = sort(a, "energy");
  CHECK(s.active == std::vector<std::uint8_t>{1, 1, 0});
  CHECK(s.energy == std::vector<double>{1.0, 2.0, 0.0});
  CHECK(s.uid == std::vector<Uid>{2, 1, 0});
  CHECK(s.padding_violations() == 0);
}

TEST_CASE("sort is idempotent on sorted input") {
  std::mt19937_64 rng(21);
  for (auto key : sort_keys()) {
    AgentSet a = sort(testing::random_agents(rng, 25, 2, 2, 10, 10), key);
    CHECK(sort(a, key) == a);
  }
}

TEST_CASE("sort matches a reference stable sort of the active sub-list") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    AgentSet a = testing::random_agents(rng, 12, 2, 2, 4, 4, 0.6);
    // force ties
    for (std::size_t i = 0; i < 12; ++i)
      if (a.active[i]) a.energy[i] = std::round(a.energy[i] / 5.0);
    const auto key = sort_keys()[trial % sort_keys().size()];
    const bool desc = trial % 3 == 0;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < 12; ++i)
      if (a.active[i]) order.push_back(i);
    auto value = [&](std::size_t i) -> double {
      if (key == "energy") return a.energy[i];
      if (key == "uid") return static_cast<double>(a.uid[i]);
      if (key == "position_x") return a.px[i];
      return a.py[i];
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return desc ? value(x) > value(y) : value(x) < value(y);
    });
    const auto s = sort(a, key, desc);
    AgentSet expect(12, 2, 2);
    for (std::size_t j = 0; j < order.size(); ++j) expect.copy_slot_from(a, order[j], j);
    expect.next_uid = a.next_uid;
    expect.overflow_count = a.overflow_count;
    CHECK(s == expect);
  }
}

TEST_CASE("add two to an empty set") {
  AgentSet a(4, 2, 3);
  const auto r = add(a, batch_of(2, 2, 3), OverflowPolicy::strict);
  CHECK(r.accepted == 2);
  CHECK(r.set.active_count() == 2);
  CHECK(r.set.active == std::vector<std::uint8_t>{1, 1, 0, 0});
  CHECK(r.set.uid == std::vector<Uid>{1, 2, 0, 0});
  CHECK(r.set.next_uid == 3);
}

TEST_CASE("add three with one free slot") {
  AgentSet a = add(AgentSet(4, 2, 3), batch_of(3, 2, 3), OverflowPolicy::strict).set;
  const auto r = add(a, batch_of(3, 2, 3), OverflowPolicy::drop_and_count);
  CHECK(r.accepted == 1);
  CHECK(r.set.overflow_count == 2);
  CHECK(r.set.active_count() == 4);
  CHECK_THROWS_AS(add(a, batch_of(3, 2, 3), OverflowPolicy::strict), CapacityError);
}

TEST_CASE("add fills the lowest free slots") {
  AgentSet a = add(AgentSet(5, 1, 1), batch_of(5, 1, 1), OverflowPolicy::strict).set;
  SlotMask m(5);
  m.set(1);
  m.set(3);
  a = remove(std::move(a), m);
  const auto r = add(a, batch_of(1, 1, 1), OverflowPolicy::strict);
  CHECK(r.set.uid == std::vector<Uid>{1, 6, 3, 0, 5});
}

TEST_CASE("remove: no-op mask and last agent") {
  std::mt19937_64 rng(23);
  AgentSet a = testing::random_agents(rng, 10, 2, 2, 5, 5);
  CHECK(remove(a, SlotMask(10)) == a);

  AgentSet one = add(AgentSet(3, 2, 2), batch_of(1, 2, 2), OverflowPolicy::strict).set;
  SlotMask m(3);
  m.set(0);
  const auto gone = remove(one, m);
  CHECK(gone.active_count() == 0);
  for (double v : gone.energy) CHECK(v == 0.0);
  for (double v : gone.params) CHECK(v == 0.0);
  for (Uid u : gone.uid) CHECK(u == 0);
  CHECK(gone.next_uid == one.next_uid);
}

TEST_CASE("remove matches the slot loop on random masks") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 300; ++trial) {
    AgentSet a = testing::random_agents(rng, 16, 2, 2, 5, 5);
    SlotMask m(16);
    for (std::size_t i = 0; i < 16; ++i) m.set(i, rng() % 2);
    AgentSet expect = a;
    for (std::size_t i = 0; i < 16; ++i)
      if (m[i]) expect.clear_slot(i);
    CHECK(remove(a, m) == expect);
  }
}

TEST_CASE("random add/remove interleavings match the list model") {
  std::mt19937_64 rng(25);
  std::normal_distribution<double> g;
  for (int seq = 0; seq < 300; ++seq) {
    const std::size_t cap = 1 + rng() % 12;
    AgentSet set(cap, 2, 3);
    reference::ListModel model{cap};
    for (int op = 0; op < 30; ++op) {
      if (rng() % 2) {
        const std::size_t k = rng() % 5;
        SpawnBatch b(std::max<std::size_t>(k, 1), 2, 3);
        std::vector<reference::ModelAgent> spawns;
        for (std::size_t i = 0; i < k; ++i) {
          reference::ModelAgent m{0, g(rng), g(rng), g(rng), g(rng), g(rng),
                                  {g(rng), g(rng)}, {g(rng), g(rng), g(rng)}};
          b.push({m.x, m.y}, {m.vx, m.vy}, m.energy, m.rates, m.params);
          spawns.push_back(m);
        }
        const auto r = add(std::move(set), b, OverflowPolicy::drop_and_count);
        CHECK(r.accepted == model.add(spawns));
        set = r.set;
      } else {
        SlotMask mask(cap);
        std::vector<Uid> uids;
        for (std::size_t i = 0; i < cap; ++i)
          if (set.active[i] && rng() % 3 == 0) {
            mask.set(i);
            uids.push_back(set.uid[i]);
          }
        set = remove(std::move(set), mask);
        model.remove_uids(uids);
      }
      REQUIRE(reference::active_multiset(set) == model.sorted());
      CHECK(set.overflow_count == model.overflow);
      CHECK(set.next_uid == model.next_uid);
      CHECK(set.padding_violations() == 0);
    }
  }
}

TEST_CASE("shapes never change") {
  std::mt19937_64 rng(26);
  AgentSet a = testing::random_agents(rng, 9, 3, 4, 5, 5);
  const auto shape = a.shape();
  a = sort(std::move(a), "energy", true);
  CHECK(a.shape() == shape);
  a = add(std::move(a), batch_of(4, 3, 4), OverflowPolicy::drop_and_count).set;
  CHECK(a.shape() == shape);
  a = remove(std::move(a), select(a, {"energy_above", {0.0}}));
  CHECK(a.shape() == shape);
}
