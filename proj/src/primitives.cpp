#include "circuitbots/primitives.hpp"

#include <algorithm>

namespace circuitbots {

namespace {

// chains all listed (dir, slot) pins into one class
void wire_chain(StepContext& ctx, const std::vector<std::pair<int, int>>& pins) {
  for (size_t i = 1; i < pins.size(); ++i)
    ctx.wire(pins[0].first, pins[0].second, pins[i].first, pins[i].second);
}

}  // namespace

void wire_clique(StepContext& ctx) {
  ctx.set_config_empty();
  std::vector<std::pair<int, int>> pins;
  for (int d = 0; d < 6; ++d) {
    if (!ctx.has_neighbor(d)) continue;
    for (int s = 0; s < ctx.pins_per_edge(); ++s) pins.push_back({d, s});
  }
  wire_chain(ctx, pins);
}

void wire_dirs(StepContext& ctx, uint8_t dir_mask) {
  ctx.set_config_empty();
  std::vector<std::pair<int, int>> pins;
  for (int d = 0; d < 6; ++d) {
    if (!(dir_mask >> d & 1) || !ctx.has_neighbor(d)) continue;
    for (int s = 0; s < ctx.pins_per_edge(); ++s) pins.push_back({d, s});
  }
  wire_chain(ctx, pins);
}

void wire_axes(StepContext& ctx, uint8_t split_axis_mask, uint8_t drop_dir_mask) {
  ctx.set_config_empty();
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<std::pair<int, int>> pins[2];
    for (int side = 0; side < 2; ++side) {
      int d = axis + 3 * side;
      if ((drop_dir_mask >> d & 1) || !ctx.has_neighbor(d)) continue;
      for (int s = 0; s < ctx.pins_per_edge(); ++s) pins[side].push_back({d, s});
    }
    if (split_axis_mask >> axis & 1) {
      wire_chain(ctx, pins[0]);
      wire_chain(ctx, pins[1]);
    } else {
      std::vector<std::pair<int, int>> all = pins[0];
      all.insert(all.end(), pins[1].begin(), pins[1].end());
      wire_chain(ctx, all);
    }
  }
}

void wire_per_bond(StepContext& ctx, uint8_t dir_mask) {
  ctx.set_config_empty();
  for (int d = 0; d < 6; ++d) {
    if (!(dir_mask >> d & 1) || !ctx.has_neighbor(d)) continue;
    std::vector<std::pair<int, int>> pins;
    for (int s = 0; s < ctx.pins_per_edge(); ++s) pins.push_back({d, s});
    wire_chain(ctx, pins);
  }
}

// ---------------------------------------------------------------- local LE

void LocalLeaderElection::step(StepContext& ctx, Memory& m) const {
  if (!m.inited) {
    m.inited = true;
    for (int d = 0; d < 6; ++d)
      if (ctx.has_neighbor(d)) m.live |= (uint8_t)(1 << d);
  }
  if (m.done) return;
  const int r = ctx.round() % 6;
  switch (r) {
    case 0: {  // pair coins, HEADS round
      ctx.set_config_empty();
      m.coin_h = 0;
      for (int d = 0; d < 6; ++d) {
        if (!(m.live >> d & 1)) continue;
        if (ctx.coin()) m.coin_h |= (uint8_t)(1 << d);
        if (m.coin_h >> d & 1)
          for (int s = 0; s < ctx.pins_per_edge(); ++s) ctx.beep(d, s);
      }
      break;
    }
    case 1: {  // record pair HEADS flags, TAILS round
      m.flag_h = 0;
      for (int d = 0; d < 6; ++d)
        if ((m.live >> d & 1) && ctx.received(d, 0)) m.flag_h |= (uint8_t)(1 << d);
      for (int d = 0; d < 6; ++d) {
        if (!(m.live >> d & 1) || (m.coin_h >> d & 1)) continue;
        for (int s = 0; s < ctx.pins_per_edge(); ++s) ctx.beep(d, s);
      }
      break;
    }
    case 2: {  // evaluate pair iteration; global HEADS round
      for (int d = 0; d < 6; ++d) {
        if (!(m.live >> d & 1)) continue;
        bool mine_h = m.coin_h >> d & 1;
        bool flag_t = ctx.received(d, 0);
        bool flag_h = m.flag_h >> d & 1;
        bool other_h = mine_h ? !flag_t : flag_h;
        if (mine_h != other_h) {
          m.live &= (uint8_t)~(1 << d);
          if (mine_h) m.leader_of |= (uint8_t)(1 << d);
        }
      }
      wire_clique(ctx);
      if (m.in_c2 && !m.clock_done) {
        m.c2_heads = ctx.coin();
        if (m.c2_heads)
          for (int d = 0; d < 6; ++d)
            if (ctx.has_neighbor(d)) {
              ctx.beep(d, 0);
              break;
            }
      }
      break;
    }
    case 3: {  // global TAILS round
      m.f_h2 = ctx.received_any();
      wire_clique(ctx);
      if (m.in_c2 && !m.clock_done && !m.c2_heads)
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d)) {
            ctx.beep(d, 0);
            break;
          }
      break;
    }
    case 4: {  // evaluate global iteration; busy round
      bool f_t2 = ctx.received_any();
      if (!m.clock_done) {
        if (m.f_h2 && m.in_c2 && !m.c2_heads) m.in_c2 = false;
        if (!(m.f_h2 && f_t2)) {
          ++m.kappa_i;
          if (m.kappa_i >= kappa)
            m.clock_done = true;
          else
            m.in_c2 = true;
        }
      }
      wire_clique(ctx);
      if (m.live)
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d)) {
            ctx.beep(d, 0);
            break;
          }
      break;
    }
    case 5: {  // release check
      bool busy = ctx.received_any();
      if (!busy && m.clock_done) m.done = true;
      ctx.set_config_empty();
      break;
    }
  }
}

// ------------------------------------------------------- pin label dictate

void PinLabelAgreement::step(StepContext& ctx, Memory& m) const {
  if (m.stage == 0) {
    lle.step(ctx, m.base);
    if (m.base.done) {
      m.stage = 1;
      // final LLE round already set the empty configuration
      for (int d = 0; d < 6; ++d)
        if (m.base.leader_of >> d & 1) ctx.beep(d, 0);
    }
    return;
  }
  if (m.stage == 1) {
    const int k = ctx.pins_per_edge();
    for (int d = 0; d < 6; ++d) {
      if (!ctx.has_neighbor(d) || (m.base.leader_of >> d & 1)) continue;
      for (int s = 0; s < k; ++s)
        if (ctx.received(d, s) && s != 0) m.flip |= (uint8_t)(1 << d);
    }
    m.stage = 2;
  }
}

// ------------------------------------------------------------ bond exchange

void BondExchange::step(StepContext& ctx, Memory& m) const {
  const int r = ctx.round();
  if (r == 0) ctx.set_config_empty();
  if (r >= 2 && r <= length + 1) {
    for (int d = 0; d < 6; ++d)
      if (ctx.has_neighbor(d) && read_bit_last_pin(ctx, d))
        m.decoded[d] |= (uint16_t)(1 << (r - 2));
  }
  if (r >= 1 && r <= length) {
    for (int d = 0; d < 6; ++d)
      if (ctx.has_neighbor(d))
        send_bit_first_pin(ctx, d, m.payload[d] >> (r - 1) & 1);
  }
  if (r == length + 1) m.done = true;
}

// -------------------------------------------------------- single-pin sends

void SinglePinTransfer::step(StepContext& ctx, Memory& m) const {
  int dir = -1;
  for (int d = 0; d < 6; ++d)
    if (ctx.has_neighbor(d)) {
      dir = d;
      break;
    }
  if (dir < 0) {
    m.done = true;
    return;
  }
  const int wlen = 2 + length;
  const int wr = ctx.round() % wlen;
  switch (wr) {
    case 0: {
      // last bit of the previous window arrives here
      if (m.receiving) {
        if (ctx.received(dir, 0)) m.decoded |= (uint16_t)(1 << (length - 1));
        m.got_message = true;
        m.receiving = false;
        if (handoff) m.priority = true;
      }
      if (m.sending_now) {
        m.sent = true;
        m.sending_now = false;
        if (handoff) m.priority = false;
      }
      m.window = ctx.round() / wlen;
      if (m.window >= windows) {
        m.done = true;
        return;
      }
      ctx.set_config_empty();
      m.initiated = m.want_send && !m.sent;
      if (m.initiated) ctx.beep(dir, 0);
      break;
    }
    case 1: {
      m.init_flag = ctx.received(dir, 0);
      if (m.priority && m.initiated) ctx.beep(dir, 0);
      break;
    }
    default: {
      const int j = wr - 2;  // bit index being sent this round
      if (wr == 2) {
        bool arb = ctx.received(dir, 0);
        if (arb) {
          m.sending_now = m.priority && m.initiated;
          if (m.initiated && !m.priority) m.cancelled_once = true;
        } else {
          m.sending_now = m.initiated;
        }
        m.receiving = m.init_flag && !m.sending_now;
        if (m.receiving) m.decoded = 0;
      } else if (m.receiving) {
        if (ctx.received(dir, 0)) m.decoded |= (uint16_t)(1 << (j - 1));
      }
      if (m.sending_now && (m.payload >> j & 1)) ctx.beep(dir, 0);
      break;
    }
  }
}

// ------------------------------------------------------------ sync barrier

void SyncBarrier::step(StepContext& ctx, Memory& m) const {
  if (m.done) return;
  const int r = ctx.round();
  if (r % 2 == 0) {
    wire_clique(ctx);
    if (m.busy_rounds > r) {
      for (int d = 0; d < 6; ++d)
        if (ctx.has_neighbor(d)) {
          ctx.beep(d, 0);
          break;
        }
    }
  } else {
    if (!ctx.received_any()) {
      m.released_at = r;
      m.done = true;
    }
  }
}

// ------------------------------------------------------------- chain roles

std::vector<ChainRole> make_chain_roles(const Structure& s,
                                        const std::vector<GridCoord>& path) {
  std::vector<ChainRole> roles(s.size());
  for (size_t i = 0; i < path.size(); ++i) {
    int idx = s.index_at(path[i]);
    if (idx < 0) throw SimError("chain node not in structure");
    ChainRole role;
    auto dir_toward = [&](GridCoord target) {
      for (int g = 0; g < 6; ++g)
        if (neighbor(path[i], g) == target)
          return s.orientation(idx).to_local(g);
      throw SimError("chain nodes not adjacent");
    };
    if (i > 0) role.pred_dir = dir_toward(path[i - 1]);
    if (i + 1 < path.size()) role.succ_dir = dir_toward(path[i + 1]);
    roles[idx] = role;
  }
  return roles;
}

// ---------------------------------------------------------- binary add tree

namespace {

// slot addressing a chain channel; see chain_channel_slot
int pred_slot(const BinaryAddTree::Memory& m, int j, int k) {
  return chain_channel_slot(false, m.same_chir_pred, j, k);
}

}  // namespace

void BinaryAddTree::step(StepContext& ctx, Memory& m) const {
  const int k = ctx.pins_per_edge();
  const bool on_chain = m.role.pred_dir >= 0 || m.role.succ_dir >= 0;
  auto wire_crossed = [&]() {
    ctx.set_config_empty();
    if (m.role.pred_dir >= 0 && m.role.succ_dir >= 0) {
      ctx.wire(m.role.pred_dir, pred_slot(m, 0, k), m.role.succ_dir, 1);
      ctx.wire(m.role.pred_dir, pred_slot(m, 1, k), m.role.succ_dir, 0);
    }
  };
  auto wire_parallel = [&]() {
    ctx.set_config_empty();
    if (m.role.pred_dir >= 0 && m.role.succ_dir >= 0) {
      ctx.wire(m.role.pred_dir, pred_slot(m, 0, k), m.role.succ_dir, 0);
      ctx.wire(m.role.pred_dir, pred_slot(m, 1, k), m.role.succ_dir, 1);
    }
  };
  auto enter_iteration = [&]() {
    ++m.iteration;
    if (m.member)
      wire_crossed();
    else
      wire_parallel();
    if (m.head) ctx.beep(m.role.succ_dir, 0);
    m.phase = 2;
    m.phase_round = 0;
  };

  switch (m.phase) {
    case 0: {  // chirality detection beep
      m.head = m.role.pred_dir < 0 && m.role.succ_dir >= 0;
      m.sum = ((m.value % modulus) + modulus) % modulus;
      if (!on_chain) {
        // single amoebot chain head or bystander
        m.head = true;
        m.done = true;
        return;
      }
      m.member = true;
      ctx.set_config_empty();
      if (m.role.pred_dir >= 0) ctx.beep(m.role.pred_dir, 0);
      if (m.role.succ_dir >= 0) ctx.beep(m.role.succ_dir, 0);
      m.phase = 1;
      break;
    }
    case 1: {  // read detection, start iteration 1
      if (m.role.pred_dir >= 0)
        m.same_chir_pred = ctx.received(m.role.pred_dir, k - 1);
      if (m.role.succ_dir >= 0)
        m.same_chir_succ = ctx.received(m.role.succ_dir, k - 1);
      enter_iteration();
      break;
    }
    case 2: {  // halving read
      bool in_li = false;
      if (m.member) {
        if (m.head)
          in_li = true;
        else if (m.role.pred_dir >= 0)
          in_li = ctx.received(m.role.pred_dir, pred_slot(m, 1, k));
      }
      m.eliminated_now = m.member && !in_li;
      if (m.member) ctx.set_config_empty();  // L_{i-1} removes connections
      m.member = in_li;
      m.phase = 3;
      m.phase_round = 0;
      break;
    }
    case 3: {  // modulus value rounds
      const int t = m.phase_round;
      if (t >= 1 && m.member && m.role.succ_dir >= 0 &&
          ctx.received(m.role.succ_dir, 0))
        m.sum = (m.sum + (t - 1)) % modulus;
      if (m.eliminated_now && m.sum == t && m.role.pred_dir >= 0)
        ctx.beep(m.role.pred_dir, pred_slot(m, 0, k));
      if (++m.phase_round >= modulus) {
        m.phase = 4;
        m.phase_round = 0;
      }
      break;
    }
    case 4: {  // last value delivery + continue-check wiring
      if (m.member && m.role.succ_dir >= 0 && ctx.received(m.role.succ_dir, 0))
        m.sum = (m.sum + (modulus - 1)) % modulus;
      wire_parallel();
      if (m.member && !m.head) {
        if (m.role.succ_dir >= 0)
          ctx.beep(m.role.succ_dir, 0);
        else
          ctx.beep(m.role.pred_dir, pred_slot(m, 0, k));
      }
      m.phase = 5;
      break;
    }
    case 5: {  // continue or finish
      if (ctx.received_any())
        enter_iteration();
      else
        m.done = true;
      break;
    }
  }
}

// ------------------------------------------------------ binary search chain

namespace {

int bs_pred_slot(const BinarySearchChain::Memory& m, int j, int k) {
  return chain_channel_slot(false, m.same_chir_pred, j, k);
}

}  // namespace

void BinarySearchChain::step(StepContext& ctx, Memory& m) const {
  const int k = ctx.pins_per_edge();
  const bool on_chain = m.role.pred_dir >= 0 || m.role.succ_dir >= 0;
  const bool chain_head = m.role.pred_dir < 0 && m.role.succ_dir >= 0;
  auto wire_parallel = [&]() {
    ctx.set_config_empty();
    if (m.role.pred_dir >= 0 && m.role.succ_dir >= 0) {
      ctx.wire(m.role.pred_dir, bs_pred_slot(m, 0, k), m.role.succ_dir, 0);
      ctx.wire(m.role.pred_dir, bs_pred_slot(m, 1, k), m.role.succ_dir, 1);
    }
  };
  auto wire_crossed = [&]() {
    ctx.set_config_empty();
    if (m.role.pred_dir >= 0 && m.role.succ_dir >= 0) {
      ctx.wire(m.role.pred_dir, bs_pred_slot(m, 0, k), m.role.succ_dir, 1);
      ctx.wire(m.role.pred_dir, bs_pred_slot(m, 1, k), m.role.succ_dir, 0);
    }
  };

  switch (m.phase) {
    case 0: {
      if (!on_chain) {
        m.done = true;
        return;
      }
      ctx.set_config_empty();
      if (m.role.pred_dir >= 0) ctx.beep(m.role.pred_dir, 0);
      if (m.role.succ_dir >= 0) ctx.beep(m.role.succ_dir, 0);
      m.phase = 1;
      break;
    }
    case 1: {  // read chirality; pivot detection wiring
      if (m.role.pred_dir >= 0)
        m.same_chir_pred = ctx.received(m.role.pred_dir, k - 1);
      if (m.role.succ_dir >= 0)
        m.same_chir_succ = ctx.received(m.role.succ_dir, k - 1);
      if (m.marked)
        ctx.set_config_empty();
      else
        wire_parallel();
      if (chain_head && !m.marked && m.role.succ_dir >= 0)
        ctx.beep(m.role.succ_dir, 0);
      m.phase = 2;
      break;
    }
    case 2: {  // pivot claim; level-1 wiring
      if (m.marked) {
        if (chain_head)
          m.pivot = true;
        else if (m.role.pred_dir >= 0 &&
                 ctx.received(m.role.pred_dir, bs_pred_slot(m, 0, k)))
          m.pivot = true;
      }
      m.level_mask = m.marked ? 1 : 0;
      if (m.marked)
        wire_crossed();
      else
        wire_parallel();
      if (m.pivot && m.role.succ_dir >= 0) ctx.beep(m.role.succ_dir, 0);
      m.level_iter = 1;
      m.phase = 3;
      break;
    }
    case 3: {  // read level membership, wire next level
      const int i = m.level_iter;
      bool prev_member = m.marked && (m.level_mask >> (i - 1) & 1);
      bool in_li = false;
      if (prev_member) {
        if (m.pivot)
          in_li = true;
        else if (m.role.pred_dir >= 0)
          in_li = ctx.received(m.role.pred_dir, bs_pred_slot(m, 1, k));
      }
      if (in_li) m.level_mask |= (uint16_t)(1 << i);
      if (i >= levels) {
        m.token = m.pivot;
        m.descend_iter = 0;
        m.phase = 4;
        m.phase_round = 0;
        break;
      }
      ++m.level_iter;
      if (prev_member && in_li)
        wire_crossed();
      else
        wire_parallel();
      if (m.pivot && m.role.succ_dir >= 0) ctx.beep(m.role.succ_dir, 0);
      break;
    }
    case 4: {  // rank descent, 3 rounds per level
      const int level = levels - 1 - m.descend_iter;
      const bool in_level = m.marked && (m.level_mask >> level & 1);
      const bool hop = (target_rank >> level & 1) != 0;
      switch (m.phase_round) {
        case 0: {
          if (in_level)
            ctx.set_config_empty();
          else
            wire_parallel();
          m.expect_ack = false;
          if (m.token && hop) {
            if (m.role.succ_dir >= 0) {
              ctx.beep(m.role.succ_dir, 0);
              m.expect_ack = true;
            } else {
              m.hop_failed = true;  // token at the chain tail, no room
            }
          }
          m.phase_round = 1;
          break;
        }
        case 1: {
          if (hop && !m.token && in_level && m.role.pred_dir >= 0 &&
              ctx.received(m.role.pred_dir, bs_pred_slot(m, 0, k))) {
            m.token = true;
            ctx.beep(m.role.pred_dir, bs_pred_slot(m, 0, k));  // ack
          }
          m.phase_round = 2;
          break;
        }
        case 2: {
          if (m.expect_ack) {
            if (m.role.succ_dir >= 0 && ctx.received(m.role.succ_dir, 0))
              m.token = false;  // handed over
            else
              m.hop_failed = true;
          }
          m.expect_ack = false;
          ++m.descend_iter;
          m.phase_round = 0;
          if (m.descend_iter >= levels) m.phase = 5;
          break;
        }
      }
      break;
    }
    case 5: {  // failure broadcast
      wire_clique(ctx);
      if (m.hop_failed)
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d)) {
            ctx.beep(d, 0);
            break;
          }
      m.phase = 6;
      break;
    }
    case 6: {
      m.out_of_range = ctx.received_any();
      m.done = true;
      break;
    }
  }
}

}  // namespace circuitbots
