// Protocol building blocks: standard pin configurations, per-bond bit
// channels, local leader election, pin label agreement, message
// transmission, synchronization barriers, binary add tree and binary
// search chains.
#pragma once

#include <cstdint>
#include <vector>

#include "circuitbots/engine.hpp"

namespace circuitbots {

// ---- pin configuration builders (used inside step functions) ----

// All pins of all incident bonds into one class (the global circuit piece).
void wire_clique(StepContext& ctx);
// All pins on the local directions in `dir_mask` into one class; other
// bonds' pins stay isolated.
void wire_dirs(StepContext& ctx, uint8_t dir_mask);
// Pass-through circuits along all three local axes (Remark-1 style: all
// pins of the axis' two bonds form one class). `split_axis_mask` keeps the
// two sides of selected axes apart, `drop_dir_mask` leaves the listed
// bonds out entirely.
void wire_axes(StepContext& ctx, uint8_t split_axis_mask = 0,
               uint8_t drop_dir_mask = 0);
// Wire the pins of each single bond together (per-bond classes).
void wire_per_bond(StepContext& ctx, uint8_t dir_mask);

// Beep the circuit that contains this bond's pins (slot 0 representative).
inline void beep_bond(StepContext& ctx, int dir) { ctx.beep(dir, 0); }

// ---- per-bond bit channel under a common chirality ----
// With a shared chirality the two endpoints of a bond label the physical
// slots in opposite order, so "my first pin" is "their last pin".
inline void send_bit_first_pin(StepContext& ctx, int dir, bool bit) {
  if (bit) ctx.beep(dir, 0);
}
inline bool read_bit_last_pin(StepContext& ctx, int dir) {
  return ctx.received(dir, ctx.pins_per_edge() - 1);
}

// Slot an amoebot uses to address channel j of a chain bond. The
// predecessor side owns the labels; the successor compensates when the
// endpoints share a chirality (their labels run in opposite slot order).
inline int chain_channel_slot(bool pred_side, bool same_chirality, int j,
                              int k) {
  if (pred_side) return j;
  return same_chirality ? k - 1 - j : j;
}

// ---- local leader election (pairwise tournaments + global clock) ----

struct LocalLeaderElection {
  int kappa = 3;

  struct Memory {
    uint8_t live = 0;       // bonds with an unresolved tournament
    uint8_t leader_of = 0;  // bonds this amoebot leads
    uint8_t coin_h = 0;     // current pair coins
    uint8_t flag_h = 0;     // pair round-1 flags
    bool inited = false;
    bool in_c2 = true;
    bool c2_heads = false;
    bool f_h2 = false;
    int kappa_i = 0;
    bool clock_done = false;
    bool done = false;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.done; }
  Verdict verdict(const Memory&) const { return {}; }
};

// Local leader election followed by one dictate round: each leader beeps
// its first pin, followers adopt the leader's slot order.
struct PinLabelAgreement {
  LocalLeaderElection lle;

  struct Memory {
    LocalLeaderElection::Memory base;
    uint8_t flip = 0;  // bond labels reversed relative to the leader's
    int stage = 0;     // 0 electing, 1 dictated, 2 done
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.stage >= 2; }
  Verdict verdict(const Memory&) const { return {}; }
};

// ---- per-bond multi-pin message exchange (k >= 2, common chirality) ----
// Every amoebot transmits a fixed-length payload on each bond while
// simultaneously receiving its neighbor's payload on the same bond.
struct BondExchange {
  int length = 8;

  struct Memory {
    std::array<uint16_t, 6> payload{};  // per local dir, LSB first
    std::array<uint16_t, 6> decoded{};
    bool done = false;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.done; }
  Verdict verdict(const Memory&) const { return {}; }
};

// ---- single-pin transmission with arbitration (k == 1) ----
// Windows of (init, arbitration, bits) rounds; the per-bond local leader
// has priority and the priority optionally moves after each transmission.
struct SinglePinTransfer {
  int length = 4;
  int windows = 2;
  bool handoff = true;

  struct Memory {
    // single-bond amoebots only (tests use pairs / paths)
    bool priority = false;      // holds per-bond priority
    bool want_send = false;
    uint16_t payload = 0;
    bool sent = false;
    bool cancelled_once = false;
    bool initiated = false;
    bool init_flag = false;
    // receiver state
    bool receiving = false;
    uint16_t decoded = 0;
    bool got_message = false;
    int window = 0;
    bool sending_now = false;
    bool done = false;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.done; }
  Verdict verdict(const Memory&) const { return {}; }
};

// ---- synchronization barrier ----
// Scripted busy durations; period-2 check rounds over the global circuit.
struct SyncBarrier {
  struct Memory {
    int busy_rounds = 0;  // input: how long this amoebot stays busy
    int released_at = -1;
    bool done = false;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.done; }
  Verdict verdict(const Memory&) const { return {}; }
};

// ---- chain roles ----

struct ChainRole {
  int pred_dir = -1;  // local direction of the predecessor, -1 at the head
  int succ_dir = -1;  // local direction of the successor, -1 at the tail
};

// Assigns pred/succ local directions along an ordered coordinate path.
std::vector<ChainRole> make_chain_roles(const Structure& s,
                                        const std::vector<GridCoord>& path);

// ---- binary add tree ----
// Computes the sum of per-amoebot values modulo `modulus` at the chain
// head by repeated halving (crossed vs parallel wiring).
struct BinaryAddTree {
  int modulus = 6;

  struct Memory {
    ChainRole role;     // input
    int value = 0;      // input, 0..modulus-1
    bool same_chir_pred = false;
    bool same_chir_succ = false;
    bool member = true;
    bool eliminated_now = false;
    int sum = 0;
    int iteration = 0;
    int phase = 0;
    int phase_round = 0;
    bool done = false;
    bool head = false;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.done; }
  Verdict verdict(const Memory& m) const {
    if (!m.done) return {};
    return Verdict{Verdict::VALUE, m.head ? m.sum : -1};
  }
};

// ---- binary search structure ----
// Halving levels over the marked subset, then a rank descent that leaves
// a token on the marked amoebot with the requested rank.
struct BinarySearchChain {
  int levels = 4;      // number of halving levels (2^levels >= |L_0|)
  int target_rank = 0;

  struct Memory {
    ChainRole role;   // input
    bool marked = false;  // input: member of L_0
    bool same_chir_pred = false;
    bool same_chir_succ = false;
    bool pivot = false;  // first marked amoebot
    uint16_t level_mask = 1;  // bit i: member of L_i (marked only)
    bool token = false;
    bool hop_failed = false;
    bool out_of_range = false;
    int phase = 0;
    int phase_round = 0;
    int level_iter = 0;
    int descend_iter = 0;
    bool expect_ack = false;
    bool done = false;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.done; }
  Verdict verdict(const Memory& m) const {
    if (!m.done) return {};
    if (m.out_of_range) return Verdict{Verdict::REJECT, 0};
    return Verdict{m.token ? Verdict::ACCEPT : Verdict::NONE, 0};
  }
};

}  // namespace circuitbots
