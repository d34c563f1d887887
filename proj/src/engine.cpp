#include "circuitbots/engine.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace circuitbots {

void PinConfig::normalize() {
  std::sort(wires.begin(), wires.end());
  wires.erase(std::unique(wires.begin(), wires.end()), wires.end());
}

namespace {

uint64_t mix_seed(uint64_t seed, uint64_t idx) {
  // splitmix64 over (seed, index)
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (idx + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct UnionFind {
  std::vector<int32_t> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // smaller id wins: canonical roots
  }
};

}  // namespace

Structure Structure::build(const std::vector<GridCoord>& coords,
                           const std::vector<Orientation>& orientations,
                           int pins_per_edge, uint64_t seed) {
  if (pins_per_edge < 1) throw BadPinCountError("pins per edge must be >= 1");
  if (pins_per_edge > 10) throw BadPinCountError("pins per edge capped at 10");
  if (coords.size() != orientations.size())
    throw SimError("coords and orientations must have equal length");
  if (coords.empty()) throw SimError("empty structure");

  Structure s;
  s.k_ = pins_per_edge;
  s.seed_ = seed;
  s.coords_ = coords;
  s.orients_ = orientations;
  const int n = (int)coords.size();
  for (int i = 0; i < n; ++i) {
    if (!s.index_of_.emplace(coords[i], i).second)
      throw DuplicateCoordError("duplicate coordinate in structure");
  }
  s.nbr_.assign(n, {-1, -1, -1, -1, -1, -1});
  s.bond_at_.assign(n, {-1, -1, -1, -1, -1, -1});
  s.degree_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < 6; ++d) {
      int j = s.index_at(neighbor(coords[i], d));
      if (j < 0) continue;
      s.nbr_[i][d] = j;
      ++s.degree_[i];
      if (coords[i] < coords[j]) {
        int bidx = (int)s.bonds_.size();
        Bond bond;
        bond.a = i;
        bond.b = j;
        bond.canon = coords[i];
        bond.axis = axis_of(d);
        s.bonds_.push_back(bond);
        s.bond_at_[i][d] = bidx;
      }
    }
  }
  // second pass: fill bond index from the non-canonical side
  for (int bidx = 0; bidx < (int)s.bonds_.size(); ++bidx) {
    const Bond& bond = s.bonds_[bidx];
    GridCoord other = s.coords_[bond.b];
    for (int d = 0; d < 6; ++d) {
      if (neighbor(other, d) == bond.canon) s.bond_at_[bond.b][d] = bidx;
    }
  }

  // connectivity
  std::vector<char> seen(n, 0);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = 1;
  int cnt = 1;
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    for (int d = 0; d < 6; ++d) {
      int v = s.nbr_[u][d];
      if (v >= 0 && !seen[v]) {
        seen[v] = 1;
        ++cnt;
        bfs.push(v);
      }
    }
  }
  if (cnt != n) throw DisconnectedStructureError("structure is not connected");

  s.configs_.assign(n, PinConfig{});
  s.received_.assign(n, 0);
  s.rngs_.resize(n);
  for (int i = 0; i < n; ++i) s.rngs_[i].gen.seed(mix_seed(seed, (uint64_t)i));
  s.partition_dirty_ = true;
  return s;
}

int Structure::physical_pin(int amoebot, int local_dir, int slot) const {
  int gd = orients_[amoebot].to_global(local_dir);
  int b = bond_at_[amoebot][gd];
  if (b < 0) return -1;
  bool canonical = coords_[amoebot] == bonds_[b].canon;
  bool cw = orients_[amoebot].chirality == Chirality::CW;
  int phys_slot = (canonical != cw) ? slot : k_ - 1 - slot;
  return b * k_ + phys_slot;
}

int Structure::local_slot(int amoebot, int bond, int slot) const {
  bool canonical = coords_[amoebot] == bonds_[bond].canon;
  bool cw = orients_[amoebot].chirality == Chirality::CW;
  return (canonical != cw) ? slot : k_ - 1 - slot;
}

void Structure::set_config(int amoebot, const PinConfig& cfg) {
  PinConfig c = cfg;
  c.normalize();
  if (!(c == configs_[amoebot])) {
    configs_[amoebot] = std::move(c);
    partition_dirty_ = true;
  }
}

void Structure::script_coins(int amoebot, const std::vector<bool>& coins) {
  auto& r = rngs_[amoebot];
  for (bool c : coins) r.script.push_back(c ? 1 : 0);
}

const CircuitPartition& Structure::circuits() {
  if (partition_dirty_) recompute_circuits();
  return partition_;
}

void Structure::recompute_circuits() {
  const int total = (int)bonds_.size() * k_;
  UnionFind uf(total);
  for (const PinConfig& cfg : configs_) {
    for (auto [p, q] : cfg.wires) uf.unite(p, q);
  }
  partition_.block_of_pin.assign(total, -1);
  int next = 0;
  for (int p = 0; p < total; ++p) {
    int root = uf.find(p);
    if (partition_.block_of_pin[root] < 0) partition_.block_of_pin[root] = next++;
    partition_.block_of_pin[p] = partition_.block_of_pin[root];
  }
  partition_.num_blocks = next;
  partition_dirty_ = false;
}

CircuitPartition Structure::circuits_brute_force() const {
  const int total = (int)bonds_.size() * k_;
  std::vector<std::vector<int>> adj(total);
  for (const PinConfig& cfg : configs_) {
    for (auto [p, q] : cfg.wires) {
      adj[p].push_back(q);
      adj[q].push_back(p);
    }
  }
  CircuitPartition part;
  part.block_of_pin.assign(total, -1);
  int next = 0;
  for (int start = 0; start < total; ++start) {
    if (part.block_of_pin[start] >= 0) continue;
    int id = next++;
    std::vector<int> stack{start};
    part.block_of_pin[start] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
        if (part.block_of_pin[v] < 0) {
          part.block_of_pin[v] = id;
          stack.push_back(v);
        }
      }
    }
  }
  part.num_blocks = next;
  return part;
}

void Structure::deliver_beeps(const std::vector<uint16_t>& beeped_pins) {
  std::vector<char> block_hot(partition_.num_blocks, 0);
  for (uint16_t p : beeped_pins) block_hot[partition_.block_of_pin[p]] = 1;
  const int n = size();
  for (int i = 0; i < n; ++i) {
    uint64_t mask = 0;
    for (int ld = 0; ld < 6; ++ld) {
      int gd = orients_[i].to_global(ld);
      int b = bond_at_[i][gd];
      if (b < 0) continue;
      bool canonical = coords_[i] == bonds_[b].canon;
      bool cw = orients_[i].chirality == Chirality::CW;
      for (int slot = 0; slot < k_; ++slot) {
        int phys_slot = (canonical != cw) ? slot : k_ - 1 - slot;
        if (block_hot[partition_.block_of_pin[b * k_ + phys_slot]])
          mask |= 1ull << (ld * k_ + slot);
      }
    }
    received_[i] = mask;
  }
}

StepContext::StepContext(const Structure& s, int index, int round,
                         uint64_t received, AmoebotRng& rng)
    : s_(s), index_(index), round_(round), received_(received), rng_(rng) {}

int StepContext::pins_per_edge() const { return s_.k(); }

bool StepContext::has_neighbor(int local_dir) const {
  int gd = s_.orientation(index_).to_global(mod6(local_dir));
  return s_.neighbor_index(index_, gd) >= 0;
}

int StepContext::degree() const { return s_.degree(index_); }

bool StepContext::received(int local_dir, int slot) const {
  return (received_ >> (mod6(local_dir) * s_.k() + slot)) & 1;
}

bool StepContext::received_any() const { return received_ != 0; }

void StepContext::set_config_empty() {
  config_set_ = true;
  new_config_ = PinConfig{};
}

void StepContext::wire(int dir_a, int slot_a, int dir_b, int slot_b) {
  config_set_ = true;
  int p = s_.physical_pin(index_, mod6(dir_a), slot_a);
  int q = s_.physical_pin(index_, mod6(dir_b), slot_b);
  if (p < 0 || q < 0) throw ProtocolPanic("wire references a missing bond");
  new_config_.add((uint16_t)p, (uint16_t)q);
}

void StepContext::beep(int local_dir, int slot) {
  int p = s_.physical_pin(index_, mod6(local_dir), slot);
  if (p < 0) throw ProtocolPanic("beep references a missing bond");
  beeps_.push_back((uint16_t)p);
  sent_local_ |= 1ull << (mod6(local_dir) * s_.k() + slot);
}

}  // namespace circuitbots
