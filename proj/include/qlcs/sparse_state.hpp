#pragma once

// Exact sparse statevector simulator. The text registers stay in basis
// states functionally determined by the small search registers, so the
// nonzero support stays O(n) and an associative map is exact, not an
// approximation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qlcs/bitvec.hpp"
#include "qlcs/circuit.hpp"

namespace qlcs {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a path of indices, so that
/// every measurement in a run draws from a documented seed derivation.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(base);
  for (std::uint64_t part : path) s = splitmix64(s ^ (part + 0x9e3779b97f4a7c15ull));
  return s;
}

/// Deterministic random stream. Uniform doubles are built from the raw
/// 64-bit output directly so results do not depend on library
/// distribution internals.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

struct MeasurementOutcome {
  std::string reg;
  std::uint64_t value = 0;
  double probability = 0.0;
};

constexpr double kAmplitudePruneThreshold = 1e-14;

/// Normalized quantum state stored as an ordered map from basis index to
/// complex amplitude. Ordered iteration keeps every reduction (norms,
/// marginals, measurement CDFs) bit-reproducible.
class SparseState {
 public:
  using Amplitude = std::complex<double>;
  using Map = std::map<BitVec, Amplitude>;

  SparseState() = default;
  explicit SparseState(RegisterMapPtr map) : map_(std::move(map)) {
    if (map_->total_width() > BitVec::kMaxBits)
      throw std::invalid_argument("register map exceeds simulator qubit capacity");
  }

  const RegisterMapPtr& register_map() const { return map_; }
  const Map& amplitudes() const { return amps_; }
  std::size_t support_size() const { return amps_.size(); }

  static SparseState basis(RegisterMapPtr map,
                           const std::vector<std::pair<std::string, std::uint64_t>>& assignments) {
    SparseState s(std::move(map));
    BitVec key;
    for (const auto& [name, value] : assignments) {
      const auto& r = s.map_->reg(name);
      write_field(key, r.offset, r.width, value);
    }
    s.amps_[key] = 1.0;
    return s;
  }

  static SparseState basis_key(RegisterMapPtr map, const BitVec& key) {
    SparseState s(std::move(map));
    s.amps_[key] = 1.0;
    return s;
  }

  double norm_sq() const {
    double t = 0;
    for (const auto& [k, a] : amps_) t += std::norm(a);
    return t;
  }

  std::uint64_t read_register(const BitVec& key, const std::string& name) const {
    const auto& r = map_->reg(name);
    return read_field(key, r.offset, r.width);
  }

  void apply_gate(const Gate& g) {
    validate_gate(g, map_->total_width());
    switch (g.kind) {
      case GateKind::H: apply_h(g.q0); return;
      case GateKind::Z:
      case GateKind::MCZ: apply_phase_flip(g); return;
      case GateKind::X:
      case GateKind::CX:
      case GateKind::CCX:
      case GateKind::MCX:
      case GateKind::SWAP:
      case GateKind::CSWAP: apply_permutation(g); return;
    }
  }

  void apply_circuit(const Circuit& c) {
    c.for_each([&](const Gate& g) { apply_gate(g); });
  }

  /// Phase oracle on a register subset: negates the amplitude of every
  /// basis state whose register value satisfies the predicate.
  void apply_phase_function(const std::string& reg,
                            const std::function<bool(std::uint64_t)>& predicate) {
    const auto& r = map_->reg(reg);
    for (auto& [k, a] : amps_)
      if (predicate(read_field(k, r.offset, r.width))) a = -a;
  }

  /// Exact reflection 2|s><s| - I on one register, identity elsewhere.
  /// Basis states are grouped by the value of all other qubits.
  void reflect_about_uniform(const std::string& reg) {
    const auto& r = map_->reg(reg);
    const std::uint64_t space = std::uint64_t{1} << r.width;
    // Group keys by their non-reg residue.
    std::map<BitVec, std::vector<std::pair<std::uint64_t, Amplitude>>> groups;
    for (const auto& [k, a] : amps_) {
      BitVec residue = k;
      write_field(residue, r.offset, r.width, 0);
      groups[residue].push_back({read_field(k, r.offset, r.width), a});
    }
    Map out;
    for (auto& [residue, entries] : groups) {
      Amplitude sum = 0;
      for (auto& [v, a] : entries) sum += a;
      const Amplitude shift = 2.0 * sum / static_cast<double>(space);
      std::vector<Amplitude> col(space, 0.0);
      for (auto& [v, a] : entries) col[v] = a;
      for (std::uint64_t v = 0; v < space; ++v) {
        Amplitude nv = shift - col[v];
        if (std::abs(nv) < kAmplitudePruneThreshold) continue;
        BitVec k = residue;
        write_field(k, r.offset, r.width, v);
        out[k] = nv;
      }
    }
    amps_ = std::move(out);
  }

  double register_probability(const std::string& reg,
                              const std::function<bool(std::uint64_t)>& predicate) const {
    const auto& r = map_->reg(reg);
    double p = 0;
    for (const auto& [k, a] : amps_)
      if (predicate(read_field(k, r.offset, r.width))) p += std::norm(a);
    return p;
  }

  /// Samples a register value by the Born rule with the supplied stream,
  /// collapses and renormalizes.
  MeasurementOutcome measure_register(const std::string& reg, RngStream& rng) {
    const auto& r = map_->reg(reg);
    std::map<std::uint64_t, double> marginal;
    for (const auto& [k, a] : amps_) marginal[read_field(k, r.offset, r.width)] += std::norm(a);

    const double u = rng.uniform() * norm_sq();
    double acc = 0;
    std::uint64_t chosen = marginal.rbegin()->first;
    for (const auto& [v, p] : marginal) {
      acc += p;
      if (u < acc) {
        chosen = v;
        break;
      }
    }
    const double prob = marginal[chosen];

    Map collapsed;
    const double scale = 1.0 / std::sqrt(prob);
    for (const auto& [k, a] : amps_)
      if (read_field(k, r.offset, r.width) == chosen) collapsed[k] = a * scale;
    amps_ = std::move(collapsed);
    return {reg, chosen, prob};
  }

  /// Writes `basis_index real imag` lines for debugging.
  std::string dump() const {
    std::string out;
    for (const auto& [k, a] : amps_) {
      for (std::uint32_t q = 0; q < map_->total_width(); ++q) out += k.test(q) ? '1' : '0';
      out += ' ';
      out += std::to_string(a.real());
      out += ' ';
      out += std::to_string(a.imag());
      out += '\n';
    }
    return out;
  }

  // Test hook: direct amplitude access.
  Amplitude amplitude(const BitVec& key) const {
    auto it = amps_.find(key);
    return it == amps_.end() ? Amplitude{0.0} : it->second;
  }

  Map& mutable_amplitudes() { return amps_; }

 private:
  void apply_h(std::uint32_t q) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Map out;
    for (const auto& [k, a] : amps_) {
      BitVec k0 = k, k1 = k;
      k0.clear(q);
      k1.set(q);
      const Amplitude c = a * inv_sqrt2;
      if (!k.test(q)) {
        out[k0] += c;
        out[k1] += c;
      } else {
        out[k0] += c;
        out[k1] -= c;
      }
    }
    for (auto it = out.begin(); it != out.end();) {
      if (std::abs(it->second) < kAmplitudePruneThreshold)
        it = out.erase(it);
      else
        ++it;
    }
    amps_ = std::move(out);
  }

  void apply_phase_flip(const Gate& g) {
    for (auto& [k, a] : amps_) {
      bool fire = k.test(g.q0);
      for (unsigned c = 0; fire && c < g.num_controls(); ++c) fire = k.test(g.control(c));
      if (fire) a = -a;
    }
  }

  void apply_permutation(const Gate& g) {
    Map out;
    for (const auto& [k, a] : amps_) {
      BitVec nk = k;
      permute_basis(g, nk);
      out[nk] = a;
    }
    amps_ = std::move(out);
  }

 public:
  /// Basis action of a permutation gate; phase-free kinds only.
  static void permute_basis(const Gate& g, BitVec& k) {
    switch (g.kind) {
      case GateKind::X: k.flip(g.q0); return;
      case GateKind::CX:
        if (k.test(g.q1)) k.flip(g.q0);
        return;
      case GateKind::CCX:
        if (k.test(g.q1) && k.test(g.q2)) k.flip(g.q0);
        return;
      case GateKind::MCX: {
        for (auto c : *g.multi)
          if (!k.test(c)) return;
        k.flip(g.q0);
        return;
      }
      case GateKind::SWAP: {
        if (k.test(g.q0) != k.test(g.q1)) {
          k.flip(g.q0);
          k.flip(g.q1);
        }
        return;
      }
      case GateKind::CSWAP: {
        if (k.test(g.q2) && k.test(g.q0) != k.test(g.q1)) {
          k.flip(g.q0);
          k.flip(g.q1);
        }
        return;
      }
      default: throw std::invalid_argument("not a permutation gate");
    }
  }

 private:
  RegisterMapPtr map_;
  Map amps_;
};

/// Mask-precompiled form of a permutation-only circuit for fast replay on
/// basis states. Oracle circuits contain no H/Z gates, so the whole
/// boolean oracle reduces to a bit permutation per basis index.
class CompiledPermutation {
 public:
  explicit CompiledPermutation(const Circuit& c) : words_((c.width() + 63) / 64) {
    ops_.reserve(c.size());
    c.for_each([&](const Gate& g) {
      Op op;
      op.kind = g.kind;
      op.t0 = g.target(0);
      op.t1 = g.num_targets() > 1 ? g.target(1) : g.target(0);
      for (unsigned k = 0; k < g.num_controls(); ++k) op.ctrl.set(g.control(k));
      switch (g.kind) {
        case GateKind::X:
        case GateKind::CX:
        case GateKind::CCX:
        case GateKind::MCX:
        case GateKind::SWAP:
        case GateKind::CSWAP: break;
        default: throw std::invalid_argument("circuit is not permutation-only");
      }
      ops_.push_back(std::move(op));
    });
  }

  void apply_to_basis(BitVec& k) const {
    for (const Op& op : ops_) {
      if (!contains(k, op.ctrl)) continue;
      if (op.kind == GateKind::SWAP || op.kind == GateKind::CSWAP) {
        if (k.test(op.t0) != k.test(op.t1)) {
          k.flip(op.t0);
          k.flip(op.t1);
        }
      } else {
        k.flip(op.t0);
      }
    }
  }

  std::size_t size() const { return ops_.size(); }

 private:
  struct Op {
    GateKind kind;
    std::uint32_t t0, t1;
    BitVec ctrl;
  };

  bool contains(const BitVec& k, const BitVec& mask) const {
    for (std::size_t i = 0; i < words_; ++i)
      if ((k.w[i] & mask.w[i]) != mask.w[i]) return false;
    return true;
  }

  std::size_t words_;
  std::vector<Op> ops_;
};

/// Applies a permutation-only circuit to a state, memoizing the key
/// permutation. Grover iterations revisit the same support keys, so after
/// the first pass every oracle application is a table lookup.
class BasisOracleCache {
 public:
  explicit BasisOracleCache(const Circuit& c) : perm_(c) {}

  void apply(SparseState& s) {
    SparseState::Map out;
    for (const auto& [k, a] : s.amplitudes()) {
      auto it = memo_.find(k);
      if (it == memo_.end()) {
        BitVec nk = k;
        perm_.apply_to_basis(nk);
        it = memo_.emplace(k, nk).first;
      }
      out[it->second] = a;
    }
    s.mutable_amplitudes() = std::move(out);
  }

  const CompiledPermutation& permutation() const { return perm_; }

 private:
  CompiledPermutation perm_;
  std::unordered_map<BitVec, BitVec, BitVecHash> memo_;
};

}  // namespace qlcs
