// Global leader election over the global circuit (two-phase tournament
// with a kappa-times repeated clock) and constant-round consensus on a
// bounded value domain.
#pragma once

#include "circuitbots/engine.hpp"

namespace circuitbots {

struct LeaderElection {
  int kappa = 3;

  enum Phase : uint8_t { SETUP, PHASE1_A, PHASE1_B, PHASE2_A, PHASE2_B,
                         PHASE2_C, PHASE2_D, DONE };

  struct Memory {
    Phase phase = SETUP;
    bool in_c1 = true;
    bool in_c2 = true;
    bool c1_heads = false;
    bool c2_heads = false;
    bool f_h1 = false;
    bool f_t1 = false;
    bool f_h2 = false;
    bool first_p1_iter = true;
    bool first_p2_iter = true;
    int kappa_i = 0;
    // trace/statistics hooks
    int p1_iterations = 0;
    int p2_iterations = 0;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.phase == DONE; }
  Verdict verdict(const Memory& m) const {
    if (m.phase != DONE) return {};
    return Verdict{m.in_c1 ? Verdict::LEADER : Verdict::FOLLOWER, 0};
  }
  std::string memory_label(const Memory& m) const;
};

struct Consensus {
  int k_vals = 3;

  struct Memory {
    int input = 1;  // 1..k_vals, caller-initialized
    int decided = 0;
    bool done = false;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.done; }
  Verdict verdict(const Memory& m) const {
    if (!m.done) return {};
    return Verdict{Verdict::VALUE, m.decided};
  }
};

}  // namespace circuitbots
