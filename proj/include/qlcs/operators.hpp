#pragma once

// Gate-level builders for the reversible operators used by the oracles:
// controlled cyclic shift (three-reversal construction with fanned-out
// controls), shared-substring check and prefix matcher (shift-and-AND
// doubling over the match vector, conditioned on the bits of the |d>
// register), palindrome prefix check, and the Grover diffuser.
//
// Builders produce shared gate segments; oracle assembly replays them
// reversed for uncomputation without copying. Every builder restores its
// ancillae to |0> on basis inputs.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlcs/circuit.hpp"
#include "qlcs/text.hpp"

namespace qlcs {

enum class RotDirection { Rightward, Leftward };

/// Stack allocator over the map's `anc` register. Allocations follow the
/// compute/uncompute nesting of the builders, so a save/restore pair
/// frees scratch for the next sequential block.
class AncillaPool {
 public:
  explicit AncillaPool(const RegisterMap& map) {
    const auto& r = map.reg("anc");
    base_ = r.offset;
    size_ = r.width;
  }

  std::uint32_t alloc(std::uint32_t count) {
    if (used_ + count > size_) throw std::length_error("ancilla pool exhausted");
    std::uint32_t q = base_ + used_;
    used_ += count;
    if (used_ > watermark_) watermark_ = used_;
    return q;
  }

  std::uint32_t save() const { return used_; }
  void restore(std::uint32_t mark) { used_ = mark; }
  std::uint32_t watermark() const { return watermark_; }
  std::uint32_t capacity() const { return size_; }

 private:
  std::uint32_t base_ = 0, size_ = 0, used_ = 0, watermark_ = 0;
};

namespace anc_plan {

// Peak ancilla demand per builder; the register map reserves the maximum
// over everything the problem's circuits execute.
inline std::uint32_t rot(std::size_t n, unsigned c) {
  return static_cast<std::uint32_t>((n / 2) * c);
}
inline std::uint32_t run_chain(std::size_t n, unsigned p) {
  // e + (p-1) run levels + p accumulator levels + d-bit copies + rotation
  // scratch for the in-place level shifts (bit vectors, c = 1).
  return static_cast<std::uint32_t>(n * (2 * p + 1) + n / 2);
}
inline std::uint32_t ipm(std::size_t n, unsigned c, unsigned p) {
  // reversed copy + match bits + threshold mask levels + d copies + h bits
  // + rotation scratch for the copy.
  return static_cast<std::uint32_t>(n * c + n * (p + 3) + (n / 2) * c);
}
inline std::uint32_t comparator(unsigned p) { return p + 2; }

inline std::uint32_t lcs(std::size_t n, unsigned c, unsigned p) {
  std::uint32_t w = run_chain(n, p);
  if (rot(n, c) > w) w = rot(n, c);
  return w;
}
inline std::uint32_t lps(std::size_t n, unsigned c, unsigned p) {
  std::uint32_t w = ipm(n, c, p);
  if (rot(n, c) > w) w = rot(n, c);
  if (comparator(p) > w) w = comparator(p);
  return w;
}

}  // namespace anc_plan

namespace detail {

inline unsigned exact_log2(std::size_t n) {
  unsigned p = 0;
  std::size_t v = 1;
  while (v < n) {
    v <<= 1;
    ++p;
  }
  if (v != n) throw std::invalid_argument("length must be a power of two");
  return p;
}

/// Qubit holding value bit `m` (LSB = bit 0) of a register; registers are
/// laid out MSB-first.
inline std::uint32_t value_bit_qubit(const RegisterMap::Reg& r, unsigned m) {
  return r.offset + r.width - 1 - m;
}

inline std::uint32_t symbol_qubit(std::uint32_t data_offset, unsigned c, std::size_t t,
                                  unsigned b) {
  return static_cast<std::uint32_t>(data_offset + t * c + b);
}

/// Appends the reversal of gates [mark, end) — the standard uncompute of
/// an in-buffer block of self-inverse gates.
inline void uncompute_tail(std::vector<Gate>& out, std::size_t mark) {
  const std::size_t end = out.size();
  out.reserve(end + (end - mark));
  for (std::size_t k = end; k-- > mark;) out.push_back(out[k]);
}

/// CX tree copying `src` into `count` ancilla bits; depth is logarithmic
/// in the copy count.
inline void emit_fanout(std::vector<Gate>& out, std::uint32_t src, std::uint32_t copies,
                        std::uint32_t count) {
  std::vector<std::uint32_t> carriers{src};
  std::uint32_t pos = 0;
  while (pos < count) {
    const std::uint32_t layer =
        std::min<std::uint32_t>(static_cast<std::uint32_t>(carriers.size()), count - pos);
    for (std::uint32_t k = 0; k < layer; ++k) out.push_back(Gate::cx(carriers[k], copies + pos + k));
    for (std::uint32_t k = 0; k < layer; ++k) carriers.push_back(copies + pos + k);
    pos += layer;
  }
}

/// Reversal of `len` symbol blocks starting at `start`. With control
/// copies each elementary swap gets its own control, so a stage is one
/// layer deep.
inline void emit_reversal(std::vector<Gate>& out, std::uint32_t data_offset, unsigned c,
                          std::size_t start, std::size_t len, std::uint32_t copies,
                          bool controlled) {
  std::uint32_t idx = 0;
  for (std::size_t k = 0; k < len / 2; ++k) {
    const std::size_t a = start + k;
    const std::size_t b = start + len - 1 - k;
    for (unsigned bit = 0; bit < c; ++bit) {
      const std::uint32_t qa = symbol_qubit(data_offset, c, a, bit);
      const std::uint32_t qb = symbol_qubit(data_offset, c, b, bit);
      if (controlled)
        out.push_back(Gate::cswap(copies + idx, qa, qb));
      else
        out.push_back(Gate::swap(qa, qb));
      ++idx;
    }
  }
}

/// Cyclic rotation by a fixed shift as three reversals.
inline void emit_rot_fixed(std::vector<Gate>& out, std::uint32_t data_offset, std::size_t n,
                           unsigned c, std::size_t s, RotDirection dir, std::uint32_t copies,
                           bool controlled) {
  s %= n;
  if (s == 0 || n < 2) return;
  if (dir == RotDirection::Rightward) {
    emit_reversal(out, data_offset, c, 0, n, copies, controlled);
    emit_reversal(out, data_offset, c, 0, s, copies, controlled);
    emit_reversal(out, data_offset, c, s, n - s, copies, controlled);
  } else {
    emit_reversal(out, data_offset, c, 0, s, copies, controlled);
    emit_reversal(out, data_offset, c, s, n - s, copies, controlled);
    emit_reversal(out, data_offset, c, 0, n, copies, controlled);
  }
}

struct RotControl {
  std::uint32_t qubit;    // control qubit holding one bit of the shift
  unsigned shift_log2;    // its weight: rotation by 2^shift_log2 symbols
};

/// Controlled cyclic rotation: shift decomposed bitwise, each power-of-two
/// rotation a three-reversal layer of CSWAPs whose shared control is
/// fanned out to one ancilla copy per elementary swap.
inline void emit_ctrl_rot(std::vector<Gate>& out, AncillaPool& pool,
                          const std::vector<RotControl>& controls, std::uint32_t data_offset,
                          std::size_t n, unsigned c, RotDirection dir) {
  if (n < 2 || controls.empty()) return;
  const auto mark = pool.save();
  const std::uint32_t ncopies = static_cast<std::uint32_t>((n / 2) * c);
  const std::uint32_t copies = pool.alloc(ncopies);
  for (const RotControl& rc : controls) {
    const std::size_t s = (std::size_t{1} << rc.shift_log2) % n;
    if (s == 0) continue;
    const std::size_t fan_mark = out.size();
    emit_fanout(out, rc.qubit, copies, ncopies);
    const std::size_t fan_end = out.size();
    emit_rot_fixed(out, data_offset, n, c, s, dir, copies, true);
    for (std::size_t k = fan_end; k-- > fan_mark;) out.push_back(out[k]);
  }
  pool.restore(mark);
}

inline std::vector<RotControl> register_rot_controls(const RegisterMap::Reg& reg) {
  std::vector<RotControl> ctrls;
  for (unsigned m = 0; m < reg.width; ++m) ctrls.push_back({value_bit_qubit(reg, m), m});
  return ctrls;
}

/// Match vector: e_t = [a_t == b_t] for every symbol position, computed by
/// XNOR-ing b in place, AND-ing the symbol bits into e_t, then restoring b.
inline void emit_match_bits(std::vector<Gate>& out, std::uint32_t a_off, std::uint32_t b_off,
                            std::size_t n, unsigned c, std::uint32_t e_base) {
  const std::size_t xnor_mark = out.size();
  for (std::size_t t = 0; t < n; ++t)
    for (unsigned b = 0; b < c; ++b)
      out.push_back(Gate::cx(symbol_qubit(a_off, c, t, b), symbol_qubit(b_off, c, t, b)));
  for (std::size_t t = 0; t < n; ++t)
    for (unsigned b = 0; b < c; ++b) out.push_back(Gate::x(symbol_qubit(b_off, c, t, b)));
  const std::size_t xnor_end = out.size();
  for (std::size_t t = 0; t < n; ++t) {
    const std::uint32_t e_t = static_cast<std::uint32_t>(e_base + t);
    if (c == 1) {
      out.push_back(Gate::cx(symbol_qubit(b_off, c, t, 0), e_t));
    } else if (c == 2) {
      out.push_back(Gate::ccx(symbol_qubit(b_off, c, t, 0), symbol_qubit(b_off, c, t, 1), e_t));
    } else {
      std::vector<std::uint32_t> ctrls;
      for (unsigned b = 0; b < c; ++b) ctrls.push_back(symbol_qubit(b_off, c, t, b));
      out.push_back(Gate::mcx(std::move(ctrls), e_t));
    }
  }
  for (std::size_t k = xnor_end; k-- > xnor_mark;) out.push_back(out[k]);
}

/// Forward half of the run-accumulator chain shared by SFC and FPM.
///
/// Builds run vectors P_{2^k} over the match bits, then folds the binary
/// expansion of |d> into an accumulator A with one conditional AND per d
/// bit. Before level k is folded in, P_{2^k} is rotated left in place by
/// (d mod 2^k) — a controlled rotation by the low d bits — so that
/// A_p[t] = 1 iff the circular window of length d starting at t matches.
/// Returns the qubit base of A_p.
struct RunChain {
  std::uint32_t accumulator;  // n bits, A_p
  std::uint32_t e_base;
};

inline RunChain emit_run_chain(std::vector<Gate>& out, AncillaPool& pool,
                               const RegisterMap::Reg& d_reg, std::uint32_t x_off,
                               std::uint32_t y_off, std::size_t n, unsigned c, unsigned p) {
  const std::uint32_t e = pool.alloc(static_cast<std::uint32_t>(n));
  emit_match_bits(out, x_off, y_off, n, c, e);

  // Run vectors: P_{2^0} = e, P_{2^k}[t] = P_{2^{k-1}}[t] & P_{2^{k-1}}[t + 2^{k-1}].
  std::vector<std::uint32_t> level(p);
  level[0] = e;
  for (unsigned k = 1; k < p; ++k) {
    level[k] = pool.alloc(static_cast<std::uint32_t>(n));
    const std::size_t half = std::size_t{1} << (k - 1);
    for (std::size_t t = 0; t < n; ++t)
      out.push_back(Gate::ccx(static_cast<std::uint32_t>(level[k - 1] + t),
                              static_cast<std::uint32_t>(level[k - 1] + (t + half) % n),
                              static_cast<std::uint32_t>(level[k] + t)));
  }

  // Accumulators A_1..A_p, with A_0 = all-ones implicit.
  std::vector<std::uint32_t> acc(p + 1, 0);
  for (unsigned k = 1; k <= p; ++k) acc[k] = pool.alloc(static_cast<std::uint32_t>(n));
  const std::uint32_t dcop = pool.alloc(static_cast<std::uint32_t>(n));

  for (unsigned k = 0; k < p; ++k) {
    if (k >= 1) {
      std::vector<RotControl> ctrls;
      for (unsigned m = 0; m < k; ++m) ctrls.push_back({value_bit_qubit(d_reg, m), m});
      emit_ctrl_rot(out, pool, ctrls, level[k], n, 1, RotDirection::Leftward);
    }
    const std::size_t fan_mark = out.size();
    emit_fanout(out, value_bit_qubit(d_reg, k), dcop, static_cast<std::uint32_t>(n));
    const std::size_t fan_end = out.size();
    for (std::size_t t = 0; t < n; ++t) {
      const std::uint32_t dk = static_cast<std::uint32_t>(dcop + t);
      const std::uint32_t pk = static_cast<std::uint32_t>(level[k] + t);
      const std::uint32_t tgt = static_cast<std::uint32_t>(acc[k + 1] + t);
      if (k == 0) {
        // A_1 = (d_0 & P_1) xor (!d_0)
        out.push_back(Gate::ccx(dk, pk, tgt));
        out.push_back(Gate::x(dk));
        out.push_back(Gate::cx(dk, tgt));
        out.push_back(Gate::x(dk));
      } else {
        // A_{k+1} = (d_k & A_k & rotated P) xor (!d_k & A_k)
        out.push_back(Gate::mcx({dk, static_cast<std::uint32_t>(acc[k] + t), pk}, tgt));
        out.push_back(Gate::x(dk));
        out.push_back(Gate::ccx(dk, static_cast<std::uint32_t>(acc[k] + t), tgt));
        out.push_back(Gate::x(dk));
      }
    }
    for (std::size_t g = fan_end; g-- > fan_mark;) out.push_back(out[g]);
  }
  return {acc[p], e};
}

/// r ^= OR over the n accumulator bits.
inline void emit_or_extract(std::vector<Gate>& out, std::uint32_t vec, std::size_t n,
                            std::uint32_t r) {
  for (std::size_t t = 0; t < n; ++t) out.push_back(Gate::x(static_cast<std::uint32_t>(vec + t)));
  if (n == 1) {
    out.push_back(Gate::cx(vec, r));
  } else if (n == 2) {
    out.push_back(Gate::ccx(vec, vec + 1, r));
  } else {
    std::vector<std::uint32_t> ctrls;
    for (std::size_t t = 0; t < n; ++t) ctrls.push_back(static_cast<std::uint32_t>(vec + t));
    out.push_back(Gate::mcx(std::move(ctrls), r));
  }
  for (std::size_t t = 0; t < n; ++t) out.push_back(Gate::x(static_cast<std::uint32_t>(vec + t)));
  out.push_back(Gate::x(r));
}

/// r ^= 1 iff every listed bit is 0.
inline void emit_all_zero_extract(std::vector<Gate>& out, std::uint32_t vec, std::size_t n,
                                  std::uint32_t r) {
  for (std::size_t t = 0; t < n; ++t) out.push_back(Gate::x(static_cast<std::uint32_t>(vec + t)));
  if (n == 1) {
    out.push_back(Gate::cx(vec, r));
  } else if (n == 2) {
    out.push_back(Gate::ccx(vec, vec + 1, r));
  } else {
    std::vector<std::uint32_t> ctrls;
    for (std::size_t t = 0; t < n; ++t) ctrls.push_back(static_cast<std::uint32_t>(vec + t));
    out.push_back(Gate::mcx(std::move(ctrls), r));
  }
  for (std::size_t t = 0; t < n; ++t) out.push_back(Gate::x(static_cast<std::uint32_t>(vec + t)));
}

/// Threshold mask from the |d> register: m_t = [t < d], built by folding
/// d's bits with constant shifts, one fresh level per bit.
/// Returns the base of the final level.
inline std::uint32_t emit_threshold_mask(std::vector<Gate>& out, AncillaPool& pool,
                                         const RegisterMap::Reg& d_reg, std::size_t n,
                                         unsigned p) {
  std::vector<std::uint32_t> level(p + 1, 0);
  for (unsigned k = 1; k <= p; ++k) level[k] = pool.alloc(static_cast<std::uint32_t>(n));
  const std::uint32_t dcop = pool.alloc(static_cast<std::uint32_t>(n));

  // level 1: m[0] = d_0, all other positions 0.
  out.push_back(Gate::cx(value_bit_qubit(d_reg, 0), level[1]));
  for (unsigned k = 1; k < p; ++k) {
    const std::size_t block = std::size_t{1} << k;
    const std::size_t fan_mark = out.size();
    emit_fanout(out, value_bit_qubit(d_reg, k), dcop, static_cast<std::uint32_t>(n));
    const std::size_t fan_end = out.size();
    for (std::size_t t = 0; t < n; ++t) {
      const std::uint32_t dk = static_cast<std::uint32_t>(dcop + t);
      const std::uint32_t tgt = static_cast<std::uint32_t>(level[k + 1] + t);
      if (t < block) {
        // m' = d_k ? 1 : m[t]
        out.push_back(Gate::cx(dk, tgt));
        out.push_back(Gate::x(dk));
        out.push_back(Gate::ccx(dk, static_cast<std::uint32_t>(level[k] + t), tgt));
        out.push_back(Gate::x(dk));
      } else {
        // m' = d_k ? m[t - 2^k] : m[t]
        out.push_back(Gate::ccx(dk, static_cast<std::uint32_t>(level[k] + t - block), tgt));
        out.push_back(Gate::x(dk));
        out.push_back(Gate::ccx(dk, static_cast<std::uint32_t>(level[k] + t), tgt));
        out.push_back(Gate::x(dk));
      }
    }
    for (std::size_t g = fan_end; g-- > fan_mark;) out.push_back(out[g]);
  }
  return level[p];
}

/// flag ^= [value(reg) <= bound] for a classical bound.
inline void emit_compare_le(std::vector<Gate>& out, AncillaPool& pool,
                            const RegisterMap::Reg& reg, std::int64_t bound,
                            std::uint32_t flag) {
  if (bound < 0) return;  // never true, flag untouched
  const unsigned w = reg.width;
  if (bound >= static_cast<std::int64_t>((std::uint64_t{1} << w) - 1)) {
    out.push_back(Gate::x(flag));
    return;
  }
  const std::uint32_t eq = pool.alloc(w);
  const std::uint32_t g = pool.alloc(1);
  for (unsigned q = 0; q < w; ++q) {
    const bool bq = (static_cast<std::uint64_t>(bound) >> (w - 1 - q)) & 1u;
    const std::uint32_t iq = reg.offset + q;
    if (!bq) {
      if (q == 0)
        out.push_back(Gate::cx(iq, g));
      else
        out.push_back(Gate::ccx(eq + q - 1, iq, g));
    }
    if (q + 1 < w) {
      if (bq) {
        if (q == 0)
          out.push_back(Gate::cx(iq, eq));
        else
          out.push_back(Gate::ccx(eq + q - 1, iq, eq + q));
      } else {
        out.push_back(Gate::x(iq));
        if (q == 0)
          out.push_back(Gate::cx(iq, eq));
        else
          out.push_back(Gate::ccx(eq + q - 1, iq, eq + q));
        out.push_back(Gate::x(iq));
      }
    }
  }
  // flag = !g
  out.push_back(Gate::x(flag));
  out.push_back(Gate::cx(g, flag));
}

}  // namespace detail

/// Result of a gate-level operator build.
struct OperatorBuild {
  Circuit circuit;
  std::uint32_t ancillae_used = 0;
  std::uint32_t depth = 0;
  std::uint64_t size = 0;
};

struct BuildOptions {
  bool corrupt_sfc = false;  // fault-injection hook for the selftest
};

/// Register map for the LCS circuits: |i> |j> |x> |y> |d> |r> |out> plus
/// the ancilla pool. Symbol width c covers the alphabet and sentinels.
inline RegisterMapPtr make_lcs_register_map(std::size_t n, unsigned c) {
  if (n < 2) throw std::invalid_argument("padded length must be at least 2");
  const unsigned p = detail::exact_log2(n);
  auto map = std::make_shared<RegisterMap>();
  map->add("i", p);
  map->add("j", p);
  map->add("x", static_cast<std::uint32_t>(n * c));
  map->add("y", static_cast<std::uint32_t>(n * c));
  map->add("d", p);
  map->add("r", 1);
  map->add("out", 1);
  map->add("anc", anc_plan::lcs(n, c, p));
  return map;
}

/// Register map for the LPS circuits: |i> |x> |d> |r> |out> + ancillae.
inline RegisterMapPtr make_lps_register_map(std::size_t n, unsigned c) {
  if (n < 2) throw std::invalid_argument("padded length must be at least 2");
  const unsigned p = detail::exact_log2(n);
  auto map = std::make_shared<RegisterMap>();
  map->add("i", p);
  map->add("x", static_cast<std::uint32_t>(n * c));
  map->add("d", p);
  map->add("r", 1);
  map->add("out", 1);
  map->add("anc", anc_plan::lps(n, c, p));
  return map;
}

inline std::size_t text_symbols(const RegisterMap& map, unsigned c) {
  return map.reg("x").width / c;
}

/// Controlled cyclic shift of a symbol register by the value of a control
/// register: |j>|x> -> |j>|rot(x, j)>.
inline OperatorBuild build_ctrl_rot(const RegisterMapPtr& map, const std::string& control_reg,
                                    const std::string& data_reg, unsigned c,
                                    RotDirection dir = RotDirection::Rightward) {
  const auto& ctrl = map->reg(control_reg);
  const auto& data = map->reg(data_reg);
  if (data.width % c != 0) throw std::invalid_argument("data register width not a symbol multiple");
  const std::size_t n = data.width / c;
  if ((std::size_t{1} << ctrl.width) != n)
    throw std::invalid_argument("control register width must be log2 of the symbol count");

  AncillaPool pool(*map);
  std::vector<Gate> gates;
  detail::emit_ctrl_rot(gates, pool, detail::register_rot_controls(ctrl), data.offset, n, c, dir);

  OperatorBuild b{Circuit(map, "ctrl-rot"), pool.watermark(), 0, 0};
  b.circuit.append_gates(std::move(gates));
  b.depth = b.circuit.depth();
  b.size = b.circuit.size();
  return b;
}

namespace detail {

struct OperatorSegments {
  GateSegment forward;   // compute half
  GateSegment extract;   // writes the result bit r
};

/// SFC: flips r iff x and y share a circular window of length d at some
/// common position, d read from the |d> register.
inline OperatorSegments seg_sfc(const RegisterMap& map, AncillaPool& pool, unsigned c,
                                bool corrupt = false) {
  const auto& x = map.reg("x");
  const auto& y = map.reg("y");
  const auto& d = map.reg("d");
  const auto& r = map.reg("r");
  const std::size_t n = x.width / c;
  const unsigned p = d.width;

  const auto mark = pool.save();
  auto fwd = std::make_shared<std::vector<Gate>>();
  RunChain chain = emit_run_chain(*fwd, pool, d, x.offset, y.offset, n, c, p);
  auto ext = std::make_shared<std::vector<Gate>>();
  emit_or_extract(*ext, chain.accumulator, n, r.offset);
  if (corrupt && !ext->empty()) ext->pop_back();  // drop the final r flip
  pool.restore(mark);
  return {GateSegment(fwd), GateSegment(ext)};
}

/// FPM: flips r iff the first d symbols of x and y agree; the prefix run
/// is the accumulator bit at position 0.
inline OperatorSegments seg_fpm(const RegisterMap& map, AncillaPool& pool, unsigned c) {
  const auto& x = map.reg("x");
  const auto& y = map.reg("y");
  const auto& d = map.reg("d");
  const auto& r = map.reg("r");
  const std::size_t n = x.width / c;
  const unsigned p = d.width;

  const auto mark = pool.save();
  auto fwd = std::make_shared<std::vector<Gate>>();
  RunChain chain = emit_run_chain(*fwd, pool, d, x.offset, y.offset, n, c, p);
  auto ext = std::make_shared<std::vector<Gate>>();
  ext->push_back(Gate::cx(chain.accumulator, r.offset));
  pool.restore(mark);
  return {GateSegment(fwd), GateSegment(ext)};
}

/// IPM: flips r iff the first d symbols of x form a palindrome. Compares
/// x against its reversed copy rotated right by d, masked to t < d.
inline OperatorSegments seg_ipm(const RegisterMap& map, AncillaPool& pool, unsigned c) {
  const auto& x = map.reg("x");
  const auto& d = map.reg("d");
  const auto& r = map.reg("r");
  const std::size_t n = x.width / c;
  const unsigned p = d.width;

  const auto mark = pool.save();
  auto fwd = std::make_shared<std::vector<Gate>>();
  const std::uint32_t rx = pool.alloc(static_cast<std::uint32_t>(n * c));
  for (std::size_t t = 0; t < n; ++t)
    for (unsigned b = 0; b < c; ++b)
      fwd->push_back(Gate::cx(symbol_qubit(x.offset, c, t, b), symbol_qubit(rx, c, t, b)));
  emit_reversal(*fwd, rx, c, 0, n, 0, false);
  emit_ctrl_rot(*fwd, pool, register_rot_controls(d), rx, n, c, RotDirection::Rightward);

  const std::uint32_t e = pool.alloc(static_cast<std::uint32_t>(n));
  emit_match_bits(*fwd, x.offset, rx, n, c, e);
  const std::uint32_t mask = emit_threshold_mask(*fwd, pool, d, n, p);
  const std::uint32_t h = pool.alloc(static_cast<std::uint32_t>(n));
  for (std::size_t t = 0; t < n; ++t) {
    fwd->push_back(Gate::x(static_cast<std::uint32_t>(e + t)));
    fwd->push_back(Gate::ccx(static_cast<std::uint32_t>(mask + t),
                             static_cast<std::uint32_t>(e + t),
                             static_cast<std::uint32_t>(h + t)));
    fwd->push_back(Gate::x(static_cast<std::uint32_t>(e + t)));
  }
  auto ext = std::make_shared<std::vector<Gate>>();
  emit_all_zero_extract(*ext, h, n, r.offset);
  pool.restore(mark);
  return {GateSegment(fwd), GateSegment(ext)};
}

inline Circuit assemble_operator(const RegisterMapPtr& map, const OperatorSegments& segs,
                                 const std::string& label) {
  Circuit c(map, label);
  c.append_segment(segs.forward);
  c.append_segment(segs.extract);
  c.append_segment(segs.forward, true);
  return c;
}

}  // namespace detail

/// Shared fixed-substring check over the map's x/y/d/r registers. The
/// circuit conditions on the |d> register; `d` fixes the register value
/// simulated by the functional form and must be representable in it.
inline OperatorBuild build_sfc(const RegisterMapPtr& map, std::size_t d, unsigned c,
                               const BuildOptions& opts = {}) {
  const std::size_t n = text_symbols(*map, c);
  if (d >= n) throw std::out_of_range("d must fit the |d> register (0 <= d < n)");
  AncillaPool pool(*map);
  auto segs = detail::seg_sfc(*map, pool, c, opts.corrupt_sfc);
  OperatorBuild b{detail::assemble_operator(map, segs, "sfc"), pool.watermark(), 0, 0};
  b.depth = b.circuit.depth();
  b.size = b.circuit.size();
  return b;
}

/// Fixed prefix matching over x/y/d/r.
inline OperatorBuild build_fpm(const RegisterMapPtr& map, std::size_t d, unsigned c) {
  const std::size_t n = text_symbols(*map, c);
  if (d >= n) throw std::out_of_range("d must fit the |d> register (0 <= d < n)");
  AncillaPool pool(*map);
  auto segs = detail::seg_fpm(*map, pool, c);
  OperatorBuild b{detail::assemble_operator(map, segs, "fpm"), pool.watermark(), 0, 0};
  b.depth = b.circuit.depth();
  b.size = b.circuit.size();
  return b;
}

/// Inverse (palindrome) prefix matching over x/d/r.
inline OperatorBuild build_ipm(const RegisterMapPtr& map, std::size_t d, unsigned c) {
  const std::size_t n = text_symbols(*map, c);
  if (d >= n) throw std::out_of_range("d must fit the |d> register (0 <= d < n)");
  AncillaPool pool(*map);
  auto segs = detail::seg_ipm(*map, pool, c);
  OperatorBuild b{detail::assemble_operator(map, segs, "ipm"), pool.watermark(), 0, 0};
  b.depth = b.circuit.depth();
  b.size = b.circuit.size();
  return b;
}

/// Grover diffuser 2|s><s| - I on the search register: H layer, X layer,
/// multi-controlled Z, X layer, H layer, plus a ZXZX global-phase fix so
/// the matrix matches the reflection exactly rather than up to sign.
inline OperatorBuild build_diffuser(const RegisterMapPtr& map, const std::string& search_reg) {
  const auto& s = map->reg(search_reg);
  std::vector<Gate> g;
  for (std::uint32_t q = 0; q < s.width; ++q) g.push_back(Gate::h(s.offset + q));
  for (std::uint32_t q = 0; q < s.width; ++q) g.push_back(Gate::x(s.offset + q));
  if (s.width == 1) {
    g.push_back(Gate::z(s.offset));
  } else {
    std::vector<std::uint32_t> ctrls;
    for (std::uint32_t q = 0; q + 1 < s.width; ++q) ctrls.push_back(s.offset + q);
    g.push_back(Gate::mcz(std::move(ctrls), s.offset + s.width - 1));
  }
  for (std::uint32_t q = 0; q < s.width; ++q) g.push_back(Gate::x(s.offset + q));
  for (std::uint32_t q = 0; q < s.width; ++q) g.push_back(Gate::h(s.offset + q));
  g.push_back(Gate::z(s.offset));
  g.push_back(Gate::x(s.offset));
  g.push_back(Gate::z(s.offset));
  g.push_back(Gate::x(s.offset));

  OperatorBuild b{Circuit(map, "diffuser"), 0, 0, 0};
  b.circuit.append_gates(std::move(g));
  b.depth = b.circuit.depth();
  b.size = b.circuit.size();
  return b;
}

// Functional (predicate) forms of the operators, used by the abstract
// simulation mode and the mode-equivalence tests.
inline bool sfc_predicate(const PaddedText& x, const PaddedText& y, std::size_t d) {
  return psi(x, y, 0, d);
}
inline bool fpm_predicate(const PaddedText& x, const PaddedText& y, std::size_t d) {
  return phi(x, y, 0, 0, d);
}
inline bool ipm_predicate(const PaddedText& x, std::size_t d) { return rho(x, 0, d); }

}  // namespace qlcs
