// Compass alignment and chirality agreement: regions of agreeing
// neighbors communicate over regional circuits, toss region coins, and
// fuse by rotating or flipping toward non-TAILS neighbor regions.
#pragma once

#include "circuitbots/engine.hpp"

namespace circuitbots {

enum class RegionCoin : uint8_t { NONE, HEADS, TAILS, FAILED };

struct CompassAlignment {
  struct Memory {
    // per-iteration bond data, local-frame indexed, rebuilt every iteration
    std::array<int8_t, 6> bond_label{};   // my label of each bond, -1 none
    std::array<int8_t, 6> recv_label{};   // neighbor's label of the bond
    std::array<int8_t, 6> offset{};       // offset(u,v) per bond, -1 none
    std::array<uint8_t, 6> nbr_coin{};    // neighbor region coin per bond
    uint8_t region_mask = 0;              // offset-0 bonds
    bool is_candidate = true;
    bool coin_heads = false;
    RegionCoin region_coin = RegionCoin::NONE;
    bool flag_h = false;
    uint8_t fusion_flags = 0;  // bit i-1: beep heard in fusion round r_i
    int phase = 0;
    int phase_round = 0;
    int iteration = 0;
    bool done = false;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.done; }
  Verdict verdict(const Memory& m) const {
    return m.done ? Verdict{Verdict::ACCEPT, 0} : Verdict{};
  }
  std::string memory_label(const Memory& m) const {
    return m.is_candidate ? "C" : "-";
  }
};

struct ChiralityAgreement {
  struct Memory {
    uint8_t same_chir_mask = 0;  // bonds whose endpoints agree
    std::array<uint8_t, 6> nbr_coin{};
    bool is_candidate = true;
    bool coin_heads = false;
    RegionCoin region_coin = RegionCoin::NONE;
    bool flag_h = false;
    int phase = 0;
    int phase_round = 0;
    int iteration = 0;
    bool done = false;
  };

  void step(StepContext& ctx, Memory& m) const;
  bool terminal(const Memory& m) const { return m.done; }
  Verdict verdict(const Memory& m) const {
    return m.done ? Verdict{Verdict::ACCEPT, 0} : Verdict{};
  }
  std::string memory_label(const Memory& m) const {
    return m.is_candidate ? "C" : "-";
  }
};

}  // namespace circuitbots
