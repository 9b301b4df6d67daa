#pragma once

// Reversible-circuit intermediate representation: gates over named qubit
// registers, composition, inversion, and depth/size accounting.
//
// Circuits store gate segments behind shared ownership. Inversion and the
// compute/uncompute halves of oracle builders reuse segments in reversed
// traversal order instead of copying them, which keeps multi-million-gate
// resource builds cheap. Segment vectors are never mutated once appended.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlcs {

enum class GateKind : std::uint8_t { H, X, Z, CX, CCX, MCX, MCZ, SWAP, CSWAP };

inline const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::CX: return "CX";
    case GateKind::CCX: return "CCX";
    case GateKind::MCX: return "MCX";
    case GateKind::MCZ: return "MCZ";
    case GateKind::SWAP: return "SWAP";
    case GateKind::CSWAP: return "CSWAP";
  }
  return "?";
}

/// One gate. Up to three qubits are stored inline; multi-controlled gates
/// keep their control list in a shared vector. Every kind in the set is
/// self-inverse.
struct Gate {
  GateKind kind = GateKind::X;
  std::uint32_t q0 = 0, q1 = 0, q2 = 0;
  std::shared_ptr<const std::vector<std::uint32_t>> multi;  // MCX/MCZ controls

  static Gate h(std::uint32_t q) { return {GateKind::H, q, 0, 0, nullptr}; }
  static Gate x(std::uint32_t q) { return {GateKind::X, q, 0, 0, nullptr}; }
  static Gate z(std::uint32_t q) { return {GateKind::Z, q, 0, 0, nullptr}; }
  static Gate cx(std::uint32_t c, std::uint32_t t) { return {GateKind::CX, t, c, 0, nullptr}; }
  static Gate ccx(std::uint32_t c0, std::uint32_t c1, std::uint32_t t) {
    return {GateKind::CCX, t, c0, c1, nullptr};
  }
  static Gate mcx(std::vector<std::uint32_t> ctrls, std::uint32_t t) {
    Gate g{GateKind::MCX, t, 0, 0, nullptr};
    g.multi = std::make_shared<const std::vector<std::uint32_t>>(std::move(ctrls));
    return g;
  }
  static Gate mcz(std::vector<std::uint32_t> ctrls, std::uint32_t t) {
    Gate g{GateKind::MCZ, t, 0, 0, nullptr};
    g.multi = std::make_shared<const std::vector<std::uint32_t>>(std::move(ctrls));
    return g;
  }
  static Gate swap(std::uint32_t a, std::uint32_t b) { return {GateKind::SWAP, a, b, 0, nullptr}; }
  static Gate cswap(std::uint32_t c, std::uint32_t a, std::uint32_t b) {
    return {GateKind::CSWAP, a, b, c, nullptr};
  }

  unsigned num_targets() const {
    return (kind == GateKind::SWAP || kind == GateKind::CSWAP) ? 2 : 1;
  }
  std::uint32_t target(unsigned k) const { return k == 0 ? q0 : q1; }

  unsigned num_controls() const {
    switch (kind) {
      case GateKind::H:
      case GateKind::X:
      case GateKind::Z:
      case GateKind::SWAP: return 0;
      case GateKind::CX:
      case GateKind::CSWAP: return 1;
      case GateKind::CCX: return 2;
      case GateKind::MCX:
      case GateKind::MCZ: return multi ? static_cast<unsigned>(multi->size()) : 0;
    }
    return 0;
  }
  std::uint32_t control(unsigned k) const {
    switch (kind) {
      case GateKind::CX: return q1;
      case GateKind::CSWAP: return q2;
      case GateKind::CCX: return k == 0 ? q1 : q2;
      case GateKind::MCX:
      case GateKind::MCZ: return (*multi)[k];
      default: throw std::logic_error("gate has no controls");
    }
  }

  template <class F>
  void for_each_qubit(F&& f) const {
    for (unsigned k = 0; k < num_targets(); ++k) f(target(k));
    for (unsigned k = 0; k < num_controls(); ++k) f(control(k));
  }
};

/// Named contiguous qubit ranges. Register values are read MSB-first, so
/// the 4-qubit register holding 8 is |1000>.
class RegisterMap {
 public:
  struct Reg {
    std::string name;
    std::uint32_t offset;
    std::uint32_t width;
  };

  RegisterMap() = default;

  std::uint32_t add(const std::string& name, std::uint32_t width) {
    for (const auto& r : regs_)
      if (r.name == name) throw std::invalid_argument("duplicate register name: " + name);
    std::uint32_t off = total_;
    regs_.push_back({name, off, width});
    total_ += width;
    return off;
  }

  const Reg& reg(const std::string& name) const {
    for (const auto& r : regs_)
      if (r.name == name) return r;
    throw std::invalid_argument("unknown register: " + name);
  }

  bool has(const std::string& name) const {
    for (const auto& r : regs_)
      if (r.name == name) return true;
    return false;
  }

  std::uint32_t total_width() const { return total_; }
  const std::vector<Reg>& registers() const { return regs_; }

  friend bool operator==(const RegisterMap& a, const RegisterMap& b) {
    if (a.total_ != b.total_ || a.regs_.size() != b.regs_.size()) return false;
    for (std::size_t k = 0; k < a.regs_.size(); ++k) {
      const auto& ra = a.regs_[k];
      const auto& rb = b.regs_[k];
      if (ra.name != rb.name || ra.offset != rb.offset || ra.width != rb.width) return false;
    }
    return true;
  }

 private:
  std::vector<Reg> regs_;
  std::uint32_t total_ = 0;
};

using RegisterMapPtr = std::shared_ptr<const RegisterMap>;
using GateSegment = std::shared_ptr<const std::vector<Gate>>;

namespace detail {
inline unsigned ceil_log2(std::uint64_t v) {
  unsigned k = 0;
  std::uint64_t c = 1;
  while (c < v) {
    c <<= 1;
    ++k;
  }
  return k;
}
}  // namespace detail

/// Layer cost of one gate: bounded-arity gates take one layer; a
/// multi-controlled gate with k controls is charged the layers of its
/// balanced log-depth expansion over borrowed ancillae.
inline std::uint32_t gate_layer_cost(const Gate& g) {
  if (g.kind == GateKind::MCX || g.kind == GateKind::MCZ) {
    std::size_t k = g.num_controls();
    if (k <= 1) return 1;
    return detail::ceil_log2(k) + 1;
  }
  return 1;
}

inline void validate_gate(const Gate& g, std::uint32_t width) {
  const unsigned nt = g.num_targets();
  const unsigned nc = g.num_controls();
  if ((g.kind == GateKind::MCX || g.kind == GateKind::MCZ) && !g.multi)
    throw std::invalid_argument("multi-controlled gate missing control list");
  for (unsigned k = 0; k < nt; ++k)
    if (g.target(k) >= width) throw std::invalid_argument("target qubit out of range");
  for (unsigned k = 0; k < nc; ++k) {
    const std::uint32_t c = g.control(k);
    if (c >= width) throw std::invalid_argument("control qubit out of range");
    for (unsigned t = 0; t < nt; ++t)
      if (c == g.target(t)) throw std::invalid_argument("control and target sets must be disjoint");
    for (unsigned k2 = k + 1; k2 < nc; ++k2)
      if (c == g.control(k2)) throw std::invalid_argument("duplicate control qubit");
  }
  if (nt == 2 && g.target(0) == g.target(1))
    throw std::invalid_argument("swap targets must be distinct");
}

/// Ordered gate list over a register map. Gate storage is segmented;
/// shared segments may be traversed reversed, which makes inversion and
/// repeated compute/uncompute blocks free of copies.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(RegisterMapPtr map, std::string label = "")
      : map_(std::move(map)), label_(std::move(label)) {}

  std::uint32_t width() const { return map_ ? map_->total_width() : 0; }
  const RegisterMapPtr& map() const { return map_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return size_; }

  void append(Gate g) {
    validate_gate(g, width());
    auto seg = std::make_shared<std::vector<Gate>>();
    seg->push_back(std::move(g));
    segs_.push_back({GateSegment(std::move(seg)), false});
    ++size_;
  }

  void append_segment(GateSegment seg, bool reversed = false) {
    if (!seg) throw std::invalid_argument("null segment");
    for (const Gate& g : *seg) validate_gate(g, width());
    size_ += seg->size();
    segs_.push_back({std::move(seg), reversed});
  }

  void append_gates(std::vector<Gate> gates, bool reversed = false) {
    append_segment(std::make_shared<const std::vector<Gate>>(std::move(gates)), reversed);
  }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& s : segs_) {
      if (!s.reversed) {
        for (const Gate& g : *s.gates) f(g);
      } else {
        for (auto it = s.gates->rbegin(); it != s.gates->rend(); ++it) f(*it);
      }
    }
  }

  /// Gates reversed in order, each replaced by its (identical) inverse.
  Circuit inverse() const {
    Circuit inv(map_, label_.empty() ? "" : label_ + "-inv");
    inv.size_ = size_;
    inv.segs_.reserve(segs_.size());
    for (auto it = segs_.rbegin(); it != segs_.rend(); ++it)
      inv.segs_.push_back({it->gates, !it->reversed});
    return inv;
  }

  friend Circuit compose(const Circuit& a, const Circuit& b) {
    if (!a.map_ || !b.map_ || !(*a.map_ == *b.map_))
      throw std::invalid_argument("compose requires identical register maps");
    Circuit out(a.map_, a.label_);
    out.segs_ = a.segs_;
    out.segs_.insert(out.segs_.end(), b.segs_.begin(), b.segs_.end());
    out.size_ = a.size_ + b.size_;
    return out;
  }

  /// Greedy as-soon-as-possible layer start of each gate, in traversal
  /// order; gate k occupies layers [start[k], start[k] + cost).
  std::vector<std::uint32_t> schedule() const {
    std::vector<std::uint32_t> next_free(width(), 0);
    std::vector<std::uint32_t> start;
    start.reserve(size_);
    for_each([&](const Gate& g) {
      std::uint32_t s = 0;
      g.for_each_qubit([&](std::uint32_t q) { s = std::max(s, next_free[q]); });
      const std::uint32_t e = s + gate_layer_cost(g);
      g.for_each_qubit([&](std::uint32_t q) { next_free[q] = e; });
      start.push_back(s);
    });
    return start;
  }

  std::uint32_t depth() const {
    std::vector<std::uint32_t> next_free(width(), 0);
    std::uint32_t d = 0;
    for_each([&](const Gate& g) {
      std::uint32_t s = 0;
      g.for_each_qubit([&](std::uint32_t q) { s = std::max(s, next_free[q]); });
      const std::uint32_t e = s + gate_layer_cost(g);
      g.for_each_qubit([&](std::uint32_t q) { next_free[q] = e; });
      d = std::max(d, e);
    });
    return d;
  }

  std::map<GateKind, std::uint64_t> gate_counts() const {
    std::map<GateKind, std::uint64_t> counts;
    for_each([&](const Gate& g) { ++counts[g.kind]; });
    return counts;
  }

  /// Line-oriented text dump: one gate per line, `KIND targets controls`.
  std::string dump() const {
    std::ostringstream out;
    for_each([&](const Gate& g) {
      out << gate_kind_name(g.kind);
      for (unsigned k = 0; k < g.num_targets(); ++k) out << ' ' << g.target(k);
      for (unsigned k = 0; k < g.num_controls(); ++k) out << ' ' << g.control(k);
      out << '\n';
    });
    return out.str();
  }

 private:
  struct Segment {
    GateSegment gates;
    bool reversed;
  };

  RegisterMapPtr map_;
  std::string label_;
  std::vector<Segment> segs_;
  std::uint64_t size_ = 0;
};

inline Circuit append(const Circuit& c, Gate g) {
  Circuit out = c;
  out.append(std::move(g));
  return out;
}

/// Expands a multi-controlled X/Z into bounded-arity gates with a
/// balanced Toffoli tree over borrowed ancillae (compute, apply,
/// uncompute). This is the reference construction behind the layer-cost
/// convention; tests check it preserves the gate's permutation semantics.
inline std::vector<Gate> expand_multi_controlled(const Gate& g, std::uint32_t ancilla_base,
                                                 std::uint32_t ancilla_count) {
  if (g.kind != GateKind::MCX && g.kind != GateKind::MCZ)
    throw std::invalid_argument("only MCX/MCZ can be expanded");
  const unsigned k = g.num_controls();
  std::vector<Gate> out;
  if (k <= 2) {
    if (g.kind == GateKind::MCX) {
      if (k == 0)
        out.push_back(Gate::x(g.q0));
      else if (k == 1)
        out.push_back(Gate::cx(g.control(0), g.q0));
      else
        out.push_back(Gate::ccx(g.control(0), g.control(1), g.q0));
    } else {
      out.push_back(g);
    }
    return out;
  }
  std::vector<std::uint32_t> live;
  for (unsigned i = 0; i < k; ++i) live.push_back(g.control(i));
  std::uint32_t next_anc = ancilla_base;
  std::vector<Gate> compute;
  while (live.size() > 2) {
    std::vector<std::uint32_t> next_live;
    for (std::size_t a = 0; a + 1 < live.size(); a += 2) {
      if (next_anc >= ancilla_base + ancilla_count)
        throw std::invalid_argument("not enough ancillae for expansion");
      compute.push_back(Gate::ccx(live[a], live[a + 1], next_anc));
      next_live.push_back(next_anc);
      ++next_anc;
    }
    if (live.size() % 2 == 1) next_live.push_back(live.back());
    live = std::move(next_live);
  }
  for (const Gate& cg : compute) out.push_back(cg);
  if (g.kind == GateKind::MCX)
    out.push_back(Gate::ccx(live[0], live[1], g.q0));
  else
    out.push_back(Gate::mcz({live[0], live[1]}, g.q0));
  for (auto it = compute.rbegin(); it != compute.rend(); ++it) out.push_back(*it);
  return out;
}

}  // namespace qlcs
