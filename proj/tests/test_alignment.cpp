#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "circuitbots/alignment.hpp"
#include "circuitbots/primitives.hpp"

using namespace circuitbots;

namespace {

std::vector<GridCoord> random_blob(int n, std::mt19937& gen) {
  std::vector<GridCoord> coords{{0, 0}};
  std::set<std::pair<int, int>> used{{0, 0}};
  while ((int)coords.size() < n) {
    GridCoord base = coords[gen() % coords.size()];
    GridCoord cand = neighbor(base, (int)(gen() % 6));
    if (used.insert({cand.q, cand.r}).second) coords.push_back(cand);
  }
  return coords;
}

// centralized region oracle: components of the same-orientation graph
std::vector<int> orientation_regions(const Structure& s) {
  std::vector<int> comp(s.size(), -1);
  int next = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = next;
    std::vector<int> stack{i};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int g = 0; g < 6; ++g) {
        int v = s.neighbor_index(u, g);
        if (v < 0 || comp[v] >= 0) continue;
        if (s.orientation(v) == s.orientation(u)) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace

TEST_CASE("offset formula: enumerate all orientation pairs on a bond") {
  // u at (0,0), v at (1,0); common chirality CCW; all 36 offset pairs
  for (int ou = 0; ou < 6; ++ou) {
    for (int ov = 0; ov < 6; ++ov) {
      Orientation u{Chirality::CCW, ou}, v{Chirality::CCW, ov};
      int a = u.to_local(0);  // u's label of the bond
      int b = v.to_local(3);  // v's label of the bond
      int off_uv = mod6(b - a - 3);
      int off_vu = mod6(a - b - 3);
      // definition: minimal clockwise rotations aligning u's compass to v's
      CHECK(off_uv == mod6(ou - ov));
      CHECK(mod6(off_uv + off_vu) == 0);
      if (ou == ov) CHECK(off_uv == 0);
    }
  }
  // spec example: v one CCW step ahead of u
  {
    Orientation u{Chirality::CCW, 2}, v{Chirality::CCW, 3};
    int a = u.to_local(0), b = v.to_local(3);
    CHECK(mod6(b - a - 3) == 5);
    CHECK(mod6(a - b - 3) == 1);
  }
}

TEST_CASE("regional circuits: four-region layout matches the component oracle") {
  // 4x4 parallelogram split into four 2x2 orientation blocks
  std::vector<GridCoord> coords;
  std::vector<Orientation> orients;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      coords.push_back({a, b});
      int block = (a / 2) * 2 + (b / 2);
      orients.push_back(Orientation{Chirality::CCW, block});
    }
  auto s = Structure::build(coords, orients, 2, 11);
  auto comp = orientation_regions(s);
  CHECK(*std::max_element(comp.begin(), comp.end()) + 1 == 4);

  CompassAlignment proto;
  std::vector<CompassAlignment::Memory> mem(s.size());
  for (int round = 0; round < 6; ++round)  // through the phase-1 wiring
    s.step_round([&](int i, StepContext& ctx) { proto.step(ctx, mem[i]); });
  const auto& part = s.circuits();
  std::set<int> region_blocks;
  for (int i = 0; i < s.size(); ++i) {
    for (int g = 0; g < 6; ++g) {
      int v = s.neighbor_index(i, g);
      if (v < 0 || !(s.orientation(v) == s.orientation(i))) continue;
      int ld = s.orientation(i).to_local(g);
      int pin = s.physical_pin(i, ld, 0);
      region_blocks.insert(part.block_of_pin[pin]);
      break;
    }
  }
  CHECK(region_blocks.size() == 4);
}

TEST_CASE("already aligned structures terminate in one iteration, candidates remain") {
  std::vector<GridCoord> coords{{0, 0}, {1, 0}, {0, 1}};
  std::vector<Orientation> orients(3, Orientation{Chirality::CCW, 2});
  auto s = Structure::build(coords, orients, 2, 5);
  CompassAlignment proto;
  std::vector<CompassAlignment::Memory> mem;
  auto res = run_protocol(s, proto, 100, {}, nullptr, &mem);
  REQUIRE(res.terminal);
  for (int i = 0; i < 3; ++i) CHECK(s.orientation(i).offset == 2);
  // termination does not imply leader election: several candidates survive
  int candidates = 0;
  for (auto& m : mem) candidates += m.is_candidate ? 1 : 0;
  CHECK(candidates == 3);
  CHECK(mem[0].iteration == 1);
}

TEST_CASE("scripted two-region fusion: TAILS region rotates onto HEADS region") {
  // two horizontal pairs: left pair offset 2, right pair offset 1
  std::vector<GridCoord> coords{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  std::vector<Orientation> orients{{Chirality::CCW, 2},
                                   {Chirality::CCW, 2},
                                   {Chirality::CCW, 1},
                                   {Chirality::CCW, 1}};
  auto s = Structure::build(coords, orients, 2, 5);
  // iteration 1 coins: left region (0,1) tosses TAILS, right (2,3) HEADS
  s.script_coins(0, {false});
  s.script_coins(1, {false});
  s.script_coins(2, {true});
  s.script_coins(3, {true});
  CompassAlignment proto;
  std::vector<CompassAlignment::Memory> mem;
  auto res = run_protocol(s, proto, 500, {}, nullptr, &mem);
  REQUIRE(res.terminal);
  // left pair rotated clockwise by offset(left, right) = 2 - 1 = 1
  for (int i = 0; i < 4; ++i) CHECK(s.orientation(i).offset == 1);
  // the rotating region withdrew its candidates
  CHECK_FALSE(mem[0].is_candidate);
  CHECK_FALSE(mem[1].is_candidate);
}

TEST_CASE("compass alignment: random structures align, invariants hold") {
  std::mt19937 gen(77);
  int multi_candidate_terminations = 0;
  for (int trial = 0; trial < 25; ++trial) {
    int n = 4 + (int)(gen() % 60);
    auto coords = random_blob(n, gen);
    std::vector<Orientation> orients;
    for (int i = 0; i < n; ++i)
      orients.push_back(Orientation{Chirality::CCW, (int)(gen() % 6)});
    auto s = Structure::build(coords, orients, 2, gen());
    CompassAlignment proto;
    std::vector<CompassAlignment::Memory> mem;

    int prev_candidates = n + 1;
    int prev_regions = n + 1;
    bool candidates_monotone = true;
    bool regions_monotone = true;
    bool regions_have_candidates = true;
    int last_iter = 0;
    auto obs = [&](int, const Structure& st,
                   const std::vector<CompassAlignment::Memory>& ms) {
      if (ms[0].iteration != last_iter && ms[0].phase == 1) {
        // iteration boundary: after offsets, before the coin phases
        last_iter = ms[0].iteration;
        auto comp = orientation_regions(st);
        int regions = *std::max_element(comp.begin(), comp.end()) + 1;
        int cands = 0;
        for (auto& mm : ms) cands += mm.is_candidate ? 1 : 0;
        if (cands > prev_candidates) candidates_monotone = false;
        if (regions > prev_regions) regions_monotone = false;
        prev_candidates = cands;
        prev_regions = regions;
        std::vector<int> region_cands(regions, 0);
        for (int i = 0; i < st.size(); ++i)
          if (ms[i].is_candidate) region_cands[comp[i]]++;
        for (int c : region_cands)
          if (c < 1) regions_have_candidates = false;
      }
    };
    auto res = run_protocol(s, proto, 30000, {}, obs, &mem);
    REQUIRE(res.terminal);
    std::set<int> offsets;
    for (int i = 0; i < n; ++i) offsets.insert(s.orientation(i).offset);
    CHECK(offsets.size() == 1);
    CHECK(candidates_monotone);
    CHECK(regions_monotone);
    CHECK(regions_have_candidates);
    int cands = 0;
    for (auto& m : mem) cands += m.is_candidate ? 1 : 0;
    CHECK(cands >= 1);
    if (cands > 1) ++multi_candidate_terminations;
  }
  CHECK(multi_candidate_terminations >= 1);
}

TEST_CASE("chirality probe: the four chirality combinations on one bond") {
  for (int cu = 0; cu < 2; ++cu) {
    for (int cv = 0; cv < 2; ++cv) {
      auto s = Structure::build(
          {{0, 0}, {1, 0}},
          {Orientation{cu ? Chirality::CW : Chirality::CCW, 0},
           Orientation{cv ? Chirality::CW : Chirality::CCW, 0}},
          2, 5);
      ChiralityAgreement proto;
      std::vector<ChiralityAgreement::Memory> mem(2);
      for (int round = 0; round < 2; ++round)
        s.step_round([&](int i, StepContext& ctx) { proto.step(ctx, mem[i]); });
      bool same = cu == cv;
      CHECK((mem[0].same_chir_mask != 0) == same);
      CHECK((mem[1].same_chir_mask != 0) == same);
    }
  }
}

TEST_CASE("chirality agreement: random structures agree") {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + (int)(gen() % 60);
    auto coords = random_blob(n, gen);
    std::vector<Orientation> orients;
    for (int i = 0; i < n; ++i)
      orients.push_back(
          Orientation{(gen() & 1) ? Chirality::CW : Chirality::CCW,
                      (int)(gen() % 6)});
    auto s = Structure::build(coords, orients, 2, gen());
    ChiralityAgreement proto;
    std::vector<ChiralityAgreement::Memory> mem;
    auto res = run_protocol(s, proto, 30000, {}, nullptr, &mem);
    REQUIRE(res.terminal);
    std::set<Chirality> chirs;
    for (int i = 0; i < n; ++i) chirs.insert(s.orientation(i).chirality);
    CHECK(chirs.size() == 1);
  }
}

TEST_CASE("candidate retention factor stays near or below 3/4") {
  std::mt19937 gen(123);
  long survived = 0, total = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int n = 48;
    auto coords = random_blob(n, gen);
    std::vector<Orientation> orients;
    for (int i = 0; i < n; ++i)
      orients.push_back(Orientation{Chirality::CCW, (int)(gen() % 6)});
    auto s = Structure::build(coords, orients, 2, gen());
    CompassAlignment proto;
    int last_iter = 0;
    std::vector<char> prev;
    auto obs = [&](int, const Structure&,
                   const std::vector<CompassAlignment::Memory>& ms) {
      if (ms[0].iteration != last_iter && ms[0].phase == 1) {
        last_iter = ms[0].iteration;
        std::vector<char> cur;
        for (auto& mm : ms) cur.push_back(mm.is_candidate ? 1 : 0);
        if (!prev.empty()) {
          for (size_t i = 0; i < cur.size(); ++i) {
            if (prev[i]) {
              ++total;
              survived += cur[i];
            }
          }
        }
        prev = cur;
      }
    };
    auto res = run_protocol(s, proto, 30000, {}, obs);
    REQUIRE(res.terminal);
  }
  REQUIRE(total > 500);
  double retention = (double)survived / (double)total;
  CHECK(retention <= 0.75 + 0.08);
}
