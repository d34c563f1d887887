#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "circuitbots/engine.hpp"

using namespace circuitbots;

namespace {

std::vector<Orientation> all_ccw(size_t n) {
  return std::vector<Orientation>(n, Orientation{Chirality::CCW, 0});
}

// Blocks as a canonical set-of-sets signature for comparing partitions.
std::set<std::set<int>> blocks_of(const CircuitPartition& p) {
  std::map<int, std::set<int>> by_id;
  for (int pin = 0; pin < (int)p.block_of_pin.size(); ++pin)
    by_id[p.block_of_pin[pin]].insert(pin);
  std::set<std::set<int>> out;
  for (auto& [id, s] : by_id) out.insert(s);
  return out;
}

// Wires every pin of the amoebot into one class.
void wire_clique(Structure& s, int i) {
  PinConfig cfg;
  int first = -1;
  for (int ld = 0; ld < 6; ++ld) {
    for (int slot = 0; slot < s.pins_per_edge(); ++slot) {
      int p = s.physical_pin(i, ld, slot);
      if (p < 0) continue;
      if (first < 0)
        first = p;
      else
        cfg.add((uint16_t)first, (uint16_t)p);
    }
  }
  s.set_config(i, cfg);
}

}  // namespace

TEST_CASE("build_structure basics and errors") {
  auto s = Structure::build({{0, 0}}, all_ccw(1), 2, 7);
  CHECK(s.size() == 1);
  CHECK(s.bonds().empty());

  auto s2 = Structure::build({{0, 0}, {1, 0}}, all_ccw(2), 2, 7);
  CHECK(s2.size() == 2);
  CHECK(s2.bonds().size() == 1);

  CHECK_THROWS_AS(Structure::build({{0, 0}, {2, 0}}, all_ccw(2), 2, 7),
                  DisconnectedStructureError);
  CHECK_THROWS_AS(Structure::build({{0, 0}, {0, 0}}, all_ccw(2), 2, 7),
                  DuplicateCoordError);
  CHECK_THROWS_AS(Structure::build({{0, 0}}, all_ccw(1), 0, 7),
                  BadPinCountError);
}

TEST_CASE("pin labeling per chirality matches the agreement rule") {
  // Two neighbors along direction 0; u = (0,0) is the canonical endpoint.
  auto check_labels = [&](Chirality cu, Chirality cv, bool expect_agree) {
    auto s = Structure::build({{0, 0}, {1, 0}},
                              {Orientation{cu, 0}, Orientation{cv, 0}}, 2, 1);
    // map: physical slot -> local index for each endpoint
    for (int slot = 0; slot < 2; ++slot) {
      int lu = s.local_slot(0, 0, slot);
      int lv = s.local_slot(1, 0, slot);
      CHECK((lu == lv) == expect_agree);
    }
  };
  // same chirality -> disagree; opposite chirality -> agree
  check_labels(Chirality::CCW, Chirality::CCW, false);
  check_labels(Chirality::CW, Chirality::CW, false);
  check_labels(Chirality::CCW, Chirality::CW, true);
  check_labels(Chirality::CW, Chirality::CCW, true);
}

TEST_CASE("k=1 every amoebot sees slot 0 as local 0") {
  auto s = Structure::build({{0, 0}, {1, 0}},
                            {Orientation{Chirality::CCW, 3},
                             Orientation{Chirality::CW, 1}},
                            1, 1);
  CHECK(s.local_slot(0, 0, 0) == 0);
  CHECK(s.local_slot(1, 0, 0) == 0);
}

TEST_CASE("empty configuration yields one singleton circuit per pin") {
  auto s = Structure::build({{0, 0}, {1, 0}, {2, 0}}, all_ccw(3), 2, 9);
  const auto& part = s.circuits();
  CHECK(part.num_blocks == (int)s.bonds().size() * 2);
}

TEST_CASE("clique wiring produces the single global circuit") {
  // small blob
  std::vector<GridCoord> coords{{0, 0}, {1, 0}, {0, 1}, {1, -1}, {-1, 1}};
  auto s = Structure::build(coords, all_ccw(coords.size()), 2, 9);
  for (int i = 0; i < s.size(); ++i) wire_clique(s, i);
  CHECK(s.circuits().num_blocks == 1);

  // path of 3 with k=2: one circuit of 4 physical pins
  auto p3 = Structure::build({{0, 0}, {1, 0}, {2, 0}}, all_ccw(3), 2, 9);
  for (int i = 0; i < 3; ++i) wire_clique(p3, i);
  CHECK(p3.circuits().num_blocks == 1);
  CHECK((int)p3.circuits().block_of_pin.size() == 4);
}

TEST_CASE("circuit oracle equivalence on random structures") {
  std::mt19937 gen(4242);
  for (int trial = 0; trial < 60; ++trial) {
    int k = 1 + (int)(gen() % 3);
    int n = 2 + (int)(gen() % 30);
    // random connected growth
    std::vector<GridCoord> coords{{0, 0}};
    std::set<std::pair<int, int>> used{{0, 0}};
    while ((int)coords.size() < n) {
      GridCoord base = coords[gen() % coords.size()];
      GridCoord cand = neighbor(base, (int)(gen() % 6));
      if (used.insert({cand.q, cand.r}).second) coords.push_back(cand);
    }
    std::vector<Orientation> orients;
    for (int i = 0; i < n; ++i)
      orients.push_back(Orientation{(gen() & 1) ? Chirality::CW : Chirality::CCW,
                                    (int)(gen() % 6)});
    auto s = Structure::build(coords, orients, k, gen());
    // random wires
    for (int i = 0; i < n; ++i) {
      std::vector<int> pins;
      for (int ld = 0; ld < 6; ++ld)
        for (int slot = 0; slot < k; ++slot) {
          int p = s.physical_pin(i, ld, slot);
          if (p >= 0) pins.push_back(p);
        }
      PinConfig cfg;
      if (pins.size() >= 2) {
        int wires = (int)(gen() % (pins.size()));
        for (int w = 0; w < wires; ++w)
          cfg.add((uint16_t)pins[gen() % pins.size()],
                  (uint16_t)pins[gen() % pins.size()]);
      }
      s.set_config(i, cfg);
    }
    CHECK(blocks_of(s.circuits()) == blocks_of(s.circuits_brute_force()));
  }
}

namespace {

// Minimal protocol: every amoebot wires a clique; one designated round the
// amoebot(s) whose memory says so beep on their first available pin.
struct BeepOnce {
  struct Memory {
    bool sender = false;
    bool heard = false;
    int rounds = 0;
  };
  int stop_after = 3;
  void step(StepContext& ctx, Memory& m) const {
    if (ctx.round() == 0) {
      for (int ld = 1; ld < 6; ++ld) {
        if (!ctx.has_neighbor(ld) || !ctx.has_neighbor(0)) continue;
      }
      // clique wiring: connect everything to the first existing pin
      int first_dir = -1;
      for (int ld = 0; ld < 6; ++ld)
        if (ctx.has_neighbor(ld)) {
          first_dir = ld;
          break;
        }
      if (first_dir >= 0) {
        for (int ld = 0; ld < 6; ++ld) {
          if (!ctx.has_neighbor(ld)) continue;
          for (int slot = 0; slot < ctx.pins_per_edge(); ++slot)
            ctx.wire(first_dir, 0, ld, slot);
        }
      }
      if (m.sender) {
        if (first_dir >= 0) ctx.beep(first_dir, 0);
      }
    }
    if (ctx.round() == 1) m.heard = ctx.received_any();
    m.rounds = ctx.round() + 1;
  }
  bool terminal(const Memory& m) const { return m.rounds > stop_after; }
  Verdict verdict(const Memory& m) const {
    return Verdict{m.heard ? Verdict::ACCEPT : Verdict::REJECT, 0};
  }
};

}  // namespace

TEST_CASE("beep on global circuit reaches everyone next round") {
  std::vector<GridCoord> coords{{0, 0}, {1, 0}, {2, 0}, {1, 1}, {0, 1}};
  auto s = Structure::build(coords, all_ccw(coords.size()), 2, 5);
  BeepOnce proto;
  std::vector<BeepOnce::Memory> mem(s.size());
  mem[2].sender = true;
  int round = 0;
  for (; round < 4; ++round)
    s.step_round([&](int i, StepContext& ctx) { proto.step(ctx, mem[i]); });
  for (int i = 0; i < s.size(); ++i) CHECK(mem[i].heard);
}

TEST_CASE("no senders means all flags clear; two senders look like one") {
  std::vector<GridCoord> coords{{0, 0}, {1, 0}, {2, 0}};
  auto run_with_senders = [&](std::vector<int> senders) {
    auto s = Structure::build(coords, all_ccw(coords.size()), 2, 5);
    BeepOnce proto;
    std::vector<BeepOnce::Memory> mem(s.size());
    for (int idx : senders) mem[idx].sender = true;
    for (int round = 0; round < 3; ++round)
      s.step_round([&](int i, StepContext& ctx) { proto.step(ctx, mem[i]); });
    std::vector<bool> heard;
    for (auto& m : mem) heard.push_back(m.heard);
    return heard;
  };
  auto none = run_with_senders({});
  CHECK(std::none_of(none.begin(), none.end(), [](bool b) { return b; }));
  auto one = run_with_senders({0});
  auto two = run_with_senders({0, 2});
  CHECK(one == two);  // receivers cannot tell origin count
  CHECK(std::all_of(one.begin(), one.end(), [](bool b) { return b; }));
}

TEST_CASE("determinism: same seed same trace, reversed compute same trace") {
  std::vector<GridCoord> coords;
  std::mt19937 gen(7);
  coords.push_back({0, 0});
  std::set<std::pair<int, int>> used{{0, 0}};
  while (coords.size() < 25) {
    GridCoord base = coords[gen() % coords.size()];
    GridCoord cand = neighbor(base, (int)(gen() % 6));
    if (used.insert({cand.q, cand.r}).second) coords.push_back(cand);
  }

  struct CoinBeep {
    struct Memory {
      std::vector<bool> coins;
      std::vector<uint64_t> rec;
    };
    void step(StepContext& ctx, Memory& m) const {
      if (ctx.round() == 0) {
        int fd = -1;
        for (int ld = 0; ld < 6; ++ld)
          if (ctx.has_neighbor(ld)) {
            fd = ld;
            break;
          }
        for (int ld = 0; ld < 6; ++ld) {
          if (!ctx.has_neighbor(ld)) continue;
          for (int slot = 0; slot < ctx.pins_per_edge(); ++slot)
            ctx.wire(fd, 0, ld, slot);
        }
      }
      bool c = ctx.coin();
      m.coins.push_back(c);
      m.rec.push_back(ctx.received_mask());
      if (c) {
        for (int ld = 0; ld < 6; ++ld)
          if (ctx.has_neighbor(ld)) {
            ctx.beep(ld, 0);
            break;
          }
      }
    }
    bool terminal(const Memory& m) const { return m.coins.size() >= 12; }
    Verdict verdict(const Memory&) const { return {}; }
  };

  auto run_once = [&](bool reverse) {
    auto s = Structure::build(coords, all_ccw(coords.size()), 2, 123);
    CoinBeep proto;
    RunOptions opts;
    opts.reverse_compute = reverse;
    std::vector<CoinBeep::Memory> mem;
    run_protocol(s, proto, 12, opts, nullptr, &mem);
    std::vector<std::pair<std::vector<bool>, std::vector<uint64_t>>> sig;
    for (auto& m : mem) sig.push_back({m.coins, m.rec});
    return sig;
  };
  auto a = run_once(false);
  auto b = run_once(false);
  auto c = run_once(true);
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("run returns MaxRoundsExceeded as a result, not an error") {
  struct Never {
    struct Memory {};
    void step(StepContext&, Memory&) const {}
    bool terminal(const Memory&) const { return false; }
    Verdict verdict(const Memory&) const { return {}; }
  };
  auto s = Structure::build({{0, 0}, {1, 0}}, all_ccw(2), 1, 3);
  Never proto;
  auto res = run_protocol(s, proto, 5);
  CHECK_FALSE(res.terminal);
  CHECK(res.max_rounds_exceeded);
  CHECK(res.rounds == 5);
}

TEST_CASE("scripted coins override the stream") {
  auto s = Structure::build({{0, 0}, {1, 0}}, all_ccw(2), 1, 3);
  s.script_coins(0, {true, false, true});
  CHECK(s.rng(0).coin() == true);
  CHECK(s.rng(0).coin() == false);
  CHECK(s.rng(0).coin() == true);
}
