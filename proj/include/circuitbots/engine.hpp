// Simulation core: amoebot structure, physical pins on bonds, per-amoebot
// pin configurations, circuits as connected components over pins, and the
// synchronous look-compute-act round loop with beep propagation.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "circuitbots/grid.hpp"

namespace circuitbots {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DuplicateCoordError : SimError {
  using SimError::SimError;
};
struct DisconnectedStructureError : SimError {
  using SimError::SimError;
};
struct BadPinCountError : SimError {
  using SimError::SimError;
};
struct ProtocolPanic : SimError {
  using SimError::SimError;
};

// A physical pin is (bond index, slot); slots are a fixed engine-side order
// per bond that amoebots do not share.
struct Bond {
  int a = -1;           // amoebot index of the canonical endpoint
  int b = -1;           // amoebot index of the other endpoint
  GridCoord canon;      // lexicographically smaller endpoint
  int axis = 0;         // 0..2
};

// Wires of one amoebot, stored as pairs of its own physical pins
// (bond * k + slot). Kept sorted so configurations compare cheaply.
struct PinConfig {
  std::vector<std::pair<uint16_t, uint16_t>> wires;

  void add(uint16_t p, uint16_t q) {
    if (p > q) std::swap(p, q);
    wires.emplace_back(p, q);
  }
  void normalize();
  friend bool operator==(const PinConfig&, const PinConfig&) = default;
};

// Per-amoebot randomness. Tests may prepend a coin script; once the script
// is exhausted the stream falls back to the seeded generator.
struct AmoebotRng {
  std::mt19937_64 gen;
  std::vector<uint8_t> script;
  size_t script_pos = 0;

  bool coin() {
    if (script_pos < script.size()) return script[script_pos++] != 0;
    return (gen() & 1) != 0;
  }
  uint64_t bits() { return gen(); }
};

struct CircuitPartition {
  int num_blocks = 0;
  std::vector<int32_t> block_of_pin;  // size bonds * k
};

struct Verdict {
  enum Kind : uint8_t { NONE, LEADER, FOLLOWER, ACCEPT, REJECT, VALUE };
  Kind kind = NONE;
  int value = 0;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

class Structure;

// What one amoebot sees and may do in a single round. No global identity,
// no coordinates: occupancy, pins and signals are all in the local frame.
class StepContext {
 public:
  StepContext(const Structure& s, int index, int round, uint64_t received,
              AmoebotRng& rng);

  int round() const { return round_; }
  int pins_per_edge() const;
  bool has_neighbor(int local_dir) const;
  int degree() const;
  // Beep received last round on the circuit of this local pin.
  bool received(int local_dir, int slot) const;
  bool received_any() const;
  uint64_t received_mask() const { return received_; }
  bool coin() { return rng_.coin(); }
  uint64_t rand_bits() { return rng_.bits(); }

  // --- act outputs ---
  // Replace the pin configuration (local pin pairs). Without a call the
  // previous configuration stays.
  void set_config_empty();
  void wire(int dir_a, int slot_a, int dir_b, int slot_b);
  // Send on the circuit containing this local pin of the new configuration.
  void beep(int local_dir, int slot);
  void rotate_compass_cw(int steps) { rotate_cw_steps_ += steps; }
  void flip_chirality() { flip_ = !flip_; }

 private:
  friend class Structure;
  const Structure& s_;
  int index_;
  int round_;
  uint64_t received_;
  AmoebotRng& rng_;
  // outputs, already translated to physical pins
  bool config_set_ = false;
  PinConfig new_config_;
  std::vector<uint16_t> beeps_;  // physical pins
  uint64_t sent_local_ = 0;      // same beeps as a local-pin mask
  int rotate_cw_steps_ = 0;
  bool flip_ = false;
};

struct RoundTraceEntry {
  uint64_t received = 0;  // local pin mask at round start
  uint64_t sent = 0;      // local pin mask chosen this round
  bool reconfigured = false;
  std::string memory;  // protocol-provided label, may be empty
};

struct RoundTrace {
  int round = 0;
  int circuit_count = 0;
  std::vector<RoundTraceEntry> amoebots;
};

struct RunResult {
  int rounds = 0;
  bool terminal = false;
  bool max_rounds_exceeded = false;
  std::vector<Verdict> verdicts;
  std::vector<RoundTrace> trace;
};

struct RunOptions {
  bool collect_trace = false;
  // Evaluates the compute phase in reverse index order; used to check that
  // traces do not depend on iteration order.
  bool reverse_compute = false;
};

class Structure {
 public:
  Structure() = default;

  static Structure build(const std::vector<GridCoord>& coords,
                         const std::vector<Orientation>& orientations,
                         int pins_per_edge, uint64_t seed);

  int size() const { return (int)coords_.size(); }
  int pins_per_edge() const { return k_; }
  uint64_t seed() const { return seed_; }
  const std::vector<GridCoord>& coords() const { return coords_; }
  const std::vector<Orientation>& orientations() const { return orients_; }
  Orientation orientation(int i) const { return orients_[i]; }
  GridCoord coord(int i) const { return coords_[i]; }
  int index_at(GridCoord c) const {
    auto it = index_of_.find(c);
    return it == index_of_.end() ? -1 : it->second;
  }
  const std::vector<Bond>& bonds() const { return bonds_; }
  int bond_at(int amoebot, int global_dir) const {
    return bond_at_[amoebot][global_dir];
  }
  int neighbor_index(int amoebot, int global_dir) const {
    return nbr_[amoebot][global_dir];
  }
  int degree(int amoebot) const { return degree_[amoebot]; }
  int physical_pin(int amoebot, int local_dir, int slot) const;
  // Inverse of the labeling rule: the local slot index this amoebot uses
  // for a physical slot on one of its bonds.
  int local_slot(int amoebot, int bond, int slot) const;
  const PinConfig& config(int amoebot) const { return configs_[amoebot]; }

  const CircuitPartition& circuits();
  // Independent of the cached union-find path: plain DFS over the pin graph.
  CircuitPartition circuits_brute_force() const;

  void set_config(int amoebot, const PinConfig& cfg);
  void set_orientation(int amoebot, Orientation o) { orients_[amoebot] = o; }
  // Test hook: forces the next coin() results of one amoebot.
  void script_coins(int amoebot, const std::vector<bool>& coins);

  AmoebotRng& rng(int amoebot) { return rngs_[amoebot]; }
  uint64_t received_mask(int amoebot) const { return received_[amoebot]; }

  // One synchronous round over an arbitrary step function
  // (index, ctx, memory is managed by the caller).
  template <class StepFn>
  RoundTrace step_round(StepFn&& fn, bool reverse = false,
                        bool want_trace = false);

  // --- engine internals shared with StepContext ---
  int k() const { return k_; }

 private:
  void recompute_circuits();
  void deliver_beeps(const std::vector<uint16_t>& beeped_pins);

  int k_ = 1;
  uint64_t seed_ = 0;
  std::vector<GridCoord> coords_;
  std::vector<Orientation> orients_;
  std::unordered_map<GridCoord, int, GridCoordHash> index_of_;
  std::vector<Bond> bonds_;
  std::vector<std::array<int, 6>> nbr_;      // by global dir
  std::vector<std::array<int, 6>> bond_at_;  // by global dir
  std::vector<int> degree_;
  std::vector<PinConfig> configs_;
  std::vector<AmoebotRng> rngs_;
  std::vector<uint64_t> received_;

  CircuitPartition partition_;
  bool partition_dirty_ = true;
  int round_counter_ = 0;

 public:
  int rounds_elapsed() const { return round_counter_; }
};

// A protocol provides:
//   struct Memory;                                  default-constructible
//   void step(StepContext&, Memory&) const;
//   bool terminal(const Memory&) const;
//   Verdict verdict(const Memory&) const;
// and optionally memory_label(const Memory&) for traces.
template <class P>
concept ProtocolBehavior = requires(const P p, StepContext& ctx,
                                    typename P::Memory& m) {
  p.step(ctx, m);
  { p.terminal(m) } -> std::convertible_to<bool>;
  { p.verdict(m) } -> std::convertible_to<Verdict>;
};

template <class P>
std::string memory_label_of(const P& p, const typename P::Memory& m) {
  if constexpr (requires { p.memory_label(m); }) {
    return p.memory_label(m);
  } else {
    (void)p;
    (void)m;
    return {};
  }
}

// Runs a protocol until every amoebot is terminal or max_rounds elapses.
// An observer (optional) sees the structure and memories after each round.
// mem_inout, when non-null and pre-sized, carries initial per-amoebot
// memories (protocol inputs) in and final memories out.
template <ProtocolBehavior P,
          class Obs = std::nullptr_t>
RunResult run_protocol(Structure& s, const P& proto, int max_rounds,
                       RunOptions opts = {}, Obs obs = nullptr,
                       std::vector<typename P::Memory>* mem_inout = nullptr) {
  if (max_rounds < 1) throw SimError("max_rounds must be >= 1");
  std::vector<typename P::Memory> mem(s.size());
  if (mem_inout && (int)mem_inout->size() == s.size()) mem = *mem_inout;
  RunResult res;
  for (int round = 0; round < max_rounds; ++round) {
    RoundTrace tr = s.step_round(
        [&](int i, StepContext& ctx) { proto.step(ctx, mem[i]); },
        opts.reverse_compute, opts.collect_trace);
    if (opts.collect_trace) {
      for (int i = 0; i < s.size(); ++i)
        tr.amoebots[i].memory = memory_label_of(proto, mem[i]);
      res.trace.push_back(std::move(tr));
    }
    res.rounds = round + 1;
    if constexpr (!std::is_same_v<Obs, std::nullptr_t>) {
      obs(round, s, mem);
    }
    bool all_done = true;
    for (int i = 0; i < s.size(); ++i) {
      if (!proto.terminal(mem[i])) {
        all_done = false;
        break;
      }
    }
    if (all_done) {
      res.terminal = true;
      break;
    }
  }
  res.max_rounds_exceeded = !res.terminal;
  res.verdicts.resize(s.size());
  for (int i = 0; i < s.size(); ++i) res.verdicts[i] = proto.verdict(mem[i]);
  if (mem_inout) *mem_inout = std::move(mem);
  return res;
}

template <class StepFn>
RoundTrace Structure::step_round(StepFn&& fn, bool reverse, bool want_trace) {
  const int n = size();
  struct Out {
    bool config_set;
    PinConfig cfg;
    std::vector<uint16_t> beeps;
    int rot;
    bool flip;
    uint64_t sent_local;
  };
  std::vector<Out> outs(n);
  auto run_one = [&](int i) {
    StepContext ctx(*this, i, round_counter_, received_[i], rngs_[i]);
    fn(i, ctx);
    outs[i] = Out{ctx.config_set_, std::move(ctx.new_config_),
                  std::move(ctx.beeps_), ctx.rotate_cw_steps_, ctx.flip_,
                  ctx.sent_local_};
  };
  if (reverse) {
    for (int i = n - 1; i >= 0; --i) run_one(i);
  } else {
    for (int i = 0; i < n; ++i) run_one(i);
  }

  RoundTrace tr;
  tr.round = round_counter_;
  if (want_trace) tr.amoebots.resize(n);

  // Commit: configurations first, then orientation updates.
  std::vector<uint16_t> beeped;
  for (int i = 0; i < n; ++i) {
    if (want_trace) tr.amoebots[i].received = received_[i];
    if (outs[i].config_set) {
      outs[i].cfg.normalize();
      if (!(outs[i].cfg == configs_[i])) {
        configs_[i] = std::move(outs[i].cfg);
        partition_dirty_ = true;
        if (want_trace) tr.amoebots[i].reconfigured = true;
      }
    }
    for (uint16_t p : outs[i].beeps) beeped.push_back(p);
    if (outs[i].flip) orients_[i] = orients_[i].flipped();
    if (outs[i].rot) orients_[i] = orients_[i].rotated_cw(outs[i].rot);
  }
  if (partition_dirty_) recompute_circuits();
  deliver_beeps(beeped);
  if (want_trace) {
    tr.circuit_count = partition_.num_blocks;
    for (int i = 0; i < n; ++i) tr.amoebots[i].sent = outs[i].sent_local;
  }
  ++round_counter_;
  return tr;
}

}  // namespace circuitbots
