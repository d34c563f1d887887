#include "circuitbots/alignment.hpp"

#include "circuitbots/primitives.hpp"

namespace circuitbots {

namespace {

// Regional circuit wiring: all pins on agreeing bonds form one class. An
// amoebot without an agreeing neighbor wires all of its pins into a
// private class so that it still owns a (one-member) regional circuit.
void wire_regional(StepContext& ctx, uint8_t mask) {
  if (mask) {
    wire_dirs(ctx, mask);
  } else {
    wire_clique(ctx);
  }
}

void beep_regional(StepContext& ctx, uint8_t mask) {
  for (int d = 0; d < 6; ++d)
    if (ctx.has_neighbor(d) && (mask == 0 || (mask >> d & 1))) {
      ctx.beep(d, 0);
      return;
    }
}

bool read_regional(StepContext& ctx, uint8_t mask) {
  for (int d = 0; d < 6; ++d) {
    if (!ctx.has_neighbor(d)) continue;
    if (mask != 0 && !(mask >> d & 1)) continue;
    for (int s = 0; s < ctx.pins_per_edge(); ++s)
      if (ctx.received(d, s)) return true;
  }
  return false;
}

uint8_t neighbor_mask(StepContext& ctx) {
  uint8_t m = 0;
  for (int d = 0; d < 6; ++d)
    if (ctx.has_neighbor(d)) m |= (uint8_t)(1 << d);
  return m;
}

}  // namespace

// Phases per iteration:
//   0: offset exchange (each bond carries my 3-bit label of that bond)
//   1: regional circuit + termination probe
//   2: region coin toss (HEADS round, TAILS round, evaluation)
//   3: region coin exchange with all neighbors (2-bit messages)
//   4: fusion rounds r_1..r_5 and compass rotation
void CompassAlignment::step(StepContext& ctx, Memory& m) const {
  if (m.done) return;
  switch (m.phase) {
    case 0: {  // label exchange, 4 rounds
      if (m.phase_round == 0) {
        ++m.iteration;
        if (ctx.degree() == 0) {  // lone amoebot: aligned by definition
          m.done = true;
          return;
        }
        ctx.set_config_empty();
        m.recv_label.fill(0);
        m.offset.fill(-1);
        for (int d = 0; d < 6; ++d)
          m.bond_label[d] = ctx.has_neighbor(d) ? (int8_t)d : (int8_t)-1;
      }
      const int r = m.phase_round;
      if (r >= 1) {  // receive bit r-1
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d) && read_bit_last_pin(ctx, d))
            m.recv_label[d] |= (int8_t)(1 << (r - 1));
      }
      if (r <= 2) {  // send bit r
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d))
            send_bit_first_pin(ctx, d, m.bond_label[d] >> r & 1);
      }
      if (++m.phase_round == 4) {
        m.region_mask = 0;
        for (int d = 0; d < 6; ++d) {
          if (!ctx.has_neighbor(d)) continue;
          m.offset[d] = (int8_t)mod6(m.recv_label[d] - d - 3);
          if (m.offset[d] == 0) m.region_mask |= (uint8_t)(1 << d);
        }
        m.phase = 1;
        m.phase_round = 0;
      }
      break;
    }
    case 1: {  // regional circuit, boundary probe
      const bool lone = m.region_mask == 0;
      if (m.phase_round == 0) {
        wire_regional(ctx, m.region_mask);
        // a one-amoebot region needs no signalling: it is its own boundary
        // and evaluates everything locally (its wired class would collide
        // with an adjacent one-amoebot region's pins otherwise)
        if (!lone && m.region_mask != neighbor_mask(ctx))
          beep_regional(ctx, m.region_mask);
        ++m.phase_round;
      } else {
        if (!lone && !read_regional(ctx, m.region_mask)) {
          m.done = true;  // single regional circuit spans the structure
          return;
        }
        m.phase = 2;
        m.phase_round = 0;
      }
      break;
    }
    case 2: {  // region coin
      const bool lone = m.region_mask == 0;
      const int r = m.phase_round;
      if (r == 0) {
        if (m.is_candidate) {
          m.coin_heads = ctx.coin();
          if (!lone && m.coin_heads) beep_regional(ctx, m.region_mask);
        }
      } else if (r == 1) {
        m.flag_h = lone ? (m.is_candidate && m.coin_heads)
                        : read_regional(ctx, m.region_mask);
        if (!lone && m.is_candidate && !m.coin_heads)
          beep_regional(ctx, m.region_mask);
      } else {
        bool flag_t = lone ? (m.is_candidate && !m.coin_heads)
                           : read_regional(ctx, m.region_mask);
        if (!m.flag_h && !flag_t)
          throw ProtocolPanic("region without candidates");
        m.region_coin = m.flag_h ? (flag_t ? RegionCoin::FAILED : RegionCoin::HEADS)
                                 : RegionCoin::TAILS;
        if (m.is_candidate && !m.coin_heads &&
            m.region_coin == RegionCoin::FAILED)
          m.is_candidate = false;
        ctx.set_config_empty();  // messaging next
        m.phase = 3;
        m.phase_round = 0;
        return;
      }
      ++m.phase_round;
      break;
    }
    case 3: {  // region coin exchange, 2-bit messages, 3 rounds
      const int r = m.phase_round;
      int my_code = (int)m.region_coin - 1;  // HEADS 0, TAILS 1, FAILED 2
      if (r >= 1) {
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d) && read_bit_last_pin(ctx, d))
            m.nbr_coin[d] |= (uint8_t)(1 << (r - 1));
      }
      if (r == 0) m.nbr_coin.fill(0);
      if (r <= 1) {
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d))
            send_bit_first_pin(ctx, d, my_code >> r & 1);
      }
      if (++m.phase_round == 3) {
        m.phase = 4;
        m.phase_round = 0;
        m.fusion_flags = 0;
      }
      break;
    }
    case 4: {  // fusion rounds r_1..r_5, then rotate
      const bool lone = m.region_mask == 0;
      const int r = m.phase_round;
      auto can_fuse_at = [&](int i) {
        for (int d = 0; d < 6; ++d) {
          if (!ctx.has_neighbor(d) || m.offset[d] != i) continue;
          if ((RegionCoin)(m.nbr_coin[d] + 1) != RegionCoin::TAILS) return true;
        }
        return false;
      };
      if (r == 0) wire_regional(ctx, m.region_mask);
      if (!lone && r >= 1 && r <= 5) {
        if (read_regional(ctx, m.region_mask))
          m.fusion_flags |= (uint8_t)(1 << (r - 1));
      }
      if (!lone && r <= 4 && m.region_coin == RegionCoin::TAILS &&
          can_fuse_at(r + 1))
        beep_regional(ctx, m.region_mask);
      if (++m.phase_round == 6) {
        if (lone && m.region_coin == RegionCoin::TAILS) {
          for (int i = 1; i <= 5; ++i)
            if (can_fuse_at(i)) {
              m.fusion_flags |= (uint8_t)(1 << (i - 1));
              break;
            }
        }
        if (m.region_coin == RegionCoin::TAILS && m.fusion_flags) {
          int smallest = 1;
          while (!(m.fusion_flags >> (smallest - 1) & 1)) ++smallest;
          ctx.rotate_compass_cw(smallest);
          m.is_candidate = false;  // every candidate of a rotating region
        }
        m.phase = 0;
        m.phase_round = 0;
      }
      break;
    }
  }
}

// Phases per iteration:
//   0: chirality probe (first-pin beeps; agreement shows on the last pin)
//   1: regional circuit + termination probe
//   2: region coin toss
//   3: region coin exchange over disagreeing bonds (value-indexed rounds
//      on the shared first pin; the receiver subtracts its own beep)
//   4: fusion round and chirality flip
void ChiralityAgreement::step(StepContext& ctx, Memory& m) const {
  if (m.done) return;
  const int k = ctx.pins_per_edge();
  switch (m.phase) {
    case 0: {
      if (m.phase_round == 0) {
        ++m.iteration;
        if (ctx.degree() == 0) {
          m.done = true;
          return;
        }
        ctx.set_config_empty();
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d)) ctx.beep(d, 0);
        ++m.phase_round;
      } else {
        m.same_chir_mask = 0;
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d) && ctx.received(d, k - 1))
            m.same_chir_mask |= (uint8_t)(1 << d);
        m.phase = 1;
        m.phase_round = 0;
      }
      break;
    }
    case 1: {
      const bool lone = m.same_chir_mask == 0;
      if (m.phase_round == 0) {
        wire_regional(ctx, m.same_chir_mask);
        if (!lone && m.same_chir_mask != neighbor_mask(ctx))
          beep_regional(ctx, m.same_chir_mask);
        ++m.phase_round;
      } else {
        if (!lone && !read_regional(ctx, m.same_chir_mask)) {
          m.done = true;
          return;
        }
        m.phase = 2;
        m.phase_round = 0;
      }
      break;
    }
    case 2: {
      const bool lone = m.same_chir_mask == 0;
      const int r = m.phase_round;
      if (r == 0) {
        if (m.is_candidate) {
          m.coin_heads = ctx.coin();
          if (!lone && m.coin_heads) beep_regional(ctx, m.same_chir_mask);
        }
      } else if (r == 1) {
        m.flag_h = lone ? (m.is_candidate && m.coin_heads)
                        : read_regional(ctx, m.same_chir_mask);
        if (!lone && m.is_candidate && !m.coin_heads)
          beep_regional(ctx, m.same_chir_mask);
      } else {
        bool flag_t = lone ? (m.is_candidate && !m.coin_heads)
                           : read_regional(ctx, m.same_chir_mask);
        if (!m.flag_h && !flag_t)
          throw ProtocolPanic("region without candidates");
        m.region_coin = m.flag_h ? (flag_t ? RegionCoin::FAILED : RegionCoin::HEADS)
                                 : RegionCoin::TAILS;
        if (m.is_candidate && !m.coin_heads &&
            m.region_coin == RegionCoin::FAILED)
          m.is_candidate = false;
        ctx.set_config_empty();
        m.phase = 3;
        m.phase_round = 0;
        return;
      }
      ++m.phase_round;
      break;
    }
    case 3: {  // value-indexed exchange on disagreeing bonds, 4 rounds
      const int r = m.phase_round;
      int my_code = (int)m.region_coin - 1;
      if (r == 0) m.nbr_coin.fill(0xff);
      if (r >= 1) {
        for (int d = 0; d < 6; ++d) {
          if (!ctx.has_neighbor(d) || (m.same_chir_mask >> d & 1)) continue;
          // a beep in value round v that I did not send myself is theirs;
          // silence in every foreign round means they share my value
          if (ctx.received(d, 0) && my_code != r - 1)
            m.nbr_coin[d] = (uint8_t)(r - 1);
        }
      }
      if (r <= 2) {
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d) && !(m.same_chir_mask >> d & 1) &&
              my_code == r)
            ctx.beep(d, 0);
      }
      if (++m.phase_round == 4) {
        for (int d = 0; d < 6; ++d)
          if (ctx.has_neighbor(d) && !(m.same_chir_mask >> d & 1) &&
              m.nbr_coin[d] == 0xff)
            m.nbr_coin[d] = (uint8_t)my_code;  // same value as mine
        m.phase = 4;
        m.phase_round = 0;
      }
      break;
    }
    case 4: {  // single fusion option: flip toward any non-TAILS region
      const bool lone = m.same_chir_mask == 0;
      auto can_fuse = [&]() {
        for (int d = 0; d < 6; ++d) {
          if (!ctx.has_neighbor(d) || (m.same_chir_mask >> d & 1)) continue;
          if ((RegionCoin)(m.nbr_coin[d] + 1) != RegionCoin::TAILS) return true;
        }
        return false;
      };
      if (m.phase_round == 0) {
        wire_regional(ctx, m.same_chir_mask);
        if (!lone && m.region_coin == RegionCoin::TAILS && can_fuse())
          beep_regional(ctx, m.same_chir_mask);
        ++m.phase_round;
      } else {
        bool fuse = m.region_coin == RegionCoin::TAILS &&
                    (lone ? can_fuse() : read_regional(ctx, m.same_chir_mask));
        if (fuse) {
          ctx.flip_chirality();
          m.is_candidate = false;
        }
        m.phase = 0;
        m.phase_round = 0;
      }
      break;
    }
  }
}

}  // namespace circuitbots
