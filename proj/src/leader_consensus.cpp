#include "circuitbots/leader_consensus.hpp"

#include "circuitbots/primitives.hpp"

namespace circuitbots {

namespace {

void beep_global(StepContext& ctx) {
  for (int d = 0; d < 6; ++d)
    if (ctx.has_neighbor(d)) {
      ctx.beep(d, 0);
      break;
    }
}

}  // namespace

void LeaderElection::step(StepContext& ctx, Memory& m) const {
  switch (m.phase) {
    case SETUP: {
      if (ctx.degree() == 0) {
        // a lone amoebot is its own leader
        m.phase = DONE;
        return;
      }
      wire_clique(ctx);
      m.phase = PHASE1_A;
      break;
    }
    case PHASE1_A: {
      // evaluate the previous iteration, then toss and send HEADS
      if (!m.first_p1_iter) {
        m.f_t1 = ctx.received_any();
        if (m.f_h1 && m.in_c1 && !m.c1_heads) m.in_c1 = false;
        if (!(m.f_h1 && m.f_t1)) {
          // phase 1 ends; this round doubles as the first phase-2 round
          m.phase = PHASE2_A;
          m.first_p2_iter = true;
          m.in_c2 = true;
          m.kappa_i = 0;
          step(ctx, m);
          return;
        }
      }
      m.first_p1_iter = false;
      ++m.p1_iterations;
      if (m.in_c1) {
        m.c1_heads = ctx.coin();
        if (m.c1_heads) beep_global(ctx);
      }
      m.phase = PHASE1_B;
      break;
    }
    case PHASE1_B: {
      m.f_h1 = ctx.received_any();
      if (m.in_c1 && !m.c1_heads) beep_global(ctx);
      m.phase = PHASE1_A;
      break;
    }
    case PHASE2_A: {
      // evaluate the previous 4-round iteration, then toss both coins
      if (!m.first_p2_iter) {
        bool f_t2 = ctx.received_any();
        if (m.f_h1 && m.in_c1 && !m.c1_heads) m.in_c1 = false;
        if (m.f_h2 && m.in_c2 && !m.c2_heads) m.in_c2 = false;
        if (!(m.f_h2 && f_t2)) {
          ++m.kappa_i;
          if (m.kappa_i >= kappa) {
            m.phase = DONE;
            return;
          }
          m.in_c2 = true;  // fresh tournament on C_2 = S
        }
      }
      m.first_p2_iter = false;
      ++m.p2_iterations;
      if (m.in_c1) {
        m.c1_heads = ctx.coin();
        if (m.c1_heads) beep_global(ctx);
      }
      if (m.in_c2) m.c2_heads = ctx.coin();
      m.phase = PHASE2_B;
      break;
    }
    case PHASE2_B: {
      m.f_h1 = ctx.received_any();
      if (m.in_c1 && !m.c1_heads) beep_global(ctx);
      m.phase = PHASE2_C;
      break;
    }
    case PHASE2_C: {
      m.f_t1 = ctx.received_any();
      if (m.in_c2 && m.c2_heads) beep_global(ctx);
      m.phase = PHASE2_D;
      break;
    }
    case PHASE2_D: {
      m.f_h2 = ctx.received_any();
      if (m.in_c2 && !m.c2_heads) beep_global(ctx);
      m.phase = PHASE2_A;
      break;
    }
    case DONE:
      break;
  }
}

std::string LeaderElection::memory_label(const Memory& m) const {
  std::string s = m.in_c1 ? "C1" : "--";
  if (m.in_c2) s += "+C2";
  return s;
}

void Consensus::step(StepContext& ctx, Memory& m) const {
  const int r = ctx.round();
  if (r == 0) {
    if (ctx.degree() == 0) {
      m.decided = m.input;
      m.done = true;
      return;
    }
    wire_clique(ctx);
    return;
  }
  // value rounds: input value i beeps in round i; first beeping round wins
  if (r >= 2 && r <= k_vals + 1 && m.decided == 0 && ctx.received_any())
    m.decided = r - 1;
  if (r >= 1 && r <= k_vals && m.input == r) {
    for (int d = 0; d < 6; ++d)
      if (ctx.has_neighbor(d)) {
        ctx.beep(d, 0);
        break;
      }
  }
  if (r == k_vals + 1) m.done = true;
}

}  // namespace circuitbots
