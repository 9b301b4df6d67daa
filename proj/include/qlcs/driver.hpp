#pragma once

// Hybrid classical/quantum driver: the binary search over the candidate
// length with the three-phase iterative test for LCS and the two-phase
// test for LPS. The gate backend simulates the assembled circuits; the
// abstract backend applies the same search with phase functions and exact
// reflections. Both consume identical random streams, derived from the
// top-level seed by (problem, iteration index, restart, phase).

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlcs/oracles.hpp"

namespace qlcs {

enum class SimMode { Gate, Abstract, Classical };

inline const char* mode_name(SimMode m) {
  switch (m) {
    case SimMode::Gate: return "gate";
    case SimMode::Abstract: return "abstract";
    case SimMode::Classical: return "classical";
  }
  return "?";
}

/// Raised when a requested size exceeds the mode's capacity guard.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kGateModeMaxN = 16;
constexpr std::size_t kAbstractModeMaxN = std::size_t{1} << 16;

struct TestOutcome {
  bool verified = false;
  std::optional<MatchWitness> witness;
  double search_prob = 0.0;
  double verify_prob = 0.0;
  int restarts_used = 0;
};

struct IterationTrace {
  std::size_t l = 0, r = 0, d = 0;
  bool verified = false;
  double search_success_prob = 0.0;
  double verify_success_prob = 0.0;
  int restarts = 0;
};

struct CircuitCost {
  std::uint32_t depth = 0;
  std::uint64_t size = 0;
  std::map<GateKind, std::uint64_t> counts;
};

inline CircuitCost circuit_cost(const Circuit& c) {
  return {c.depth(), c.size(), c.gate_counts()};
}

/// Aggregate gate resources over every circuit application of a run.
/// Depth sums the per-circuit depths in execution order.
struct ResourceTally {
  std::uint64_t qubits = 0;
  std::uint64_t depth = 0;
  std::map<GateKind, std::uint64_t> gates;
  std::uint64_t oracle_invocations = 0;

  void add(const CircuitCost& cost, std::uint64_t times) {
    if (times == 0) return;
    depth += static_cast<std::uint64_t>(cost.depth) * times;
    for (const auto& [kind, count] : cost.counts) gates[kind] += count * times;
  }
};

struct RunReport {
  std::string problem;
  std::size_t n = 0;
  std::size_t raw_len = 0;
  std::size_t answer = 0;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // x_pos, y_pos
  std::vector<IterationTrace> iterations;
  ResourceTally resources;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::Gate;
  GroverSchedule schedule = GroverSchedule::RandomizedDoubling;
};

namespace detail {

inline std::uint64_t problem_tag(bool lps) { return lps ? 2 : 1; }

/// One Grover phase in gate mode over the full register map.
struct GatePhase {
  RegisterMapPtr map;
  BitVec base;
  std::string search_reg;
  BasisOracleCache* oracle = nullptr;
  const CompiledPermutation* checker = nullptr;
  const Circuit* diffuser = nullptr;
  std::function<bool(std::uint64_t)> solution;
  std::size_t n = 0;
};

inline GroverPhaseResult run_gate_phase(const GatePhase& ph, GroverSchedule schedule,
                                        RngStream& rng) {
  GroverPhaseSpec spec;
  spec.prepare = [&] {
    auto s = SparseState::basis_key(ph.map, ph.base);
    const auto& reg = ph.map->reg(ph.search_reg);
    for (std::uint32_t q = 0; q < reg.width; ++q) s.apply_gate(Gate::h(reg.offset + q));
    prepare_kickback(s, "out");
    return s;
  };
  spec.apply_oracle = [&](SparseState& s) { ph.oracle->apply(s); };
  spec.apply_diffuser = [&](SparseState& s) { s.apply_circuit(*ph.diffuser); };
  spec.check = [&](std::uint64_t cand) {
    BitVec k = ph.base;
    const auto& reg = ph.map->reg(ph.search_reg);
    write_field(k, reg.offset, reg.width, cand);
    ph.checker->apply_to_basis(k);
    const auto& out = ph.map->reg("out");
    return k.test(out.offset);
  };
  spec.solution = ph.solution;
  spec.search_reg = ph.search_reg;
  spec.search_space = ph.n;
  spec.max_support = 2 * ph.n;
  return run_grover_phase(spec, schedule, rng);
}

/// The same phase over a single search register with the classical
/// predicate as phase oracle and the exact reflection as diffuser.
inline GroverPhaseResult run_abstract_phase(std::uint32_t width,
                                            const std::function<bool(std::uint64_t)>& pred,
                                            GroverSchedule schedule, RngStream& rng) {
  auto map = std::make_shared<RegisterMap>();
  map->add("s", width);
  RegisterMapPtr mp = map;
  GroverPhaseSpec spec;
  spec.prepare = [&, mp] {
    auto s = SparseState::basis(mp, {{"s", 0}});
    for (std::uint32_t q = 0; q < width; ++q) s.apply_gate(Gate::h(q));
    return s;
  };
  spec.apply_oracle = [&](SparseState& s) { s.apply_phase_function("s", pred); };
  spec.apply_diffuser = [&](SparseState& s) { s.reflect_about_uniform("s"); };
  spec.check = pred;
  spec.solution = pred;
  spec.search_reg = "s";
  spec.search_space = std::uint64_t{1} << width;
  spec.max_support = std::size_t{1} << width;
  return run_grover_phase(spec, schedule, rng);
}

/// Caches predicate evaluations; abstract phases may query the same value
/// across many iterations.
class MemoPredicate {
 public:
  MemoPredicate(std::function<bool(std::uint64_t)> fn, std::size_t domain)
      : fn_(std::move(fn)), memo_(domain, -1) {}

  bool operator()(std::uint64_t v) const {
    if (v >= memo_.size()) return false;
    if (memo_[v] < 0) memo_[v] = fn_(v) ? 1 : 0;
    return memo_[v] == 1;
  }

 private:
  std::function<bool(std::uint64_t)> fn_;
  mutable std::vector<signed char> memo_;
};

}  // namespace detail

/// Gate-level engine for one LCS instance: circuits are built once and
/// the oracle permutations memoize the support keys across iterations,
/// restarts and binary-search steps.
class LcsEngine {
 public:
  LcsEngine(PaddedText x, PaddedText y, unsigned c, SimMode mode)
      : x_(std::move(x)), y_(std::move(y)), c_(c), mode_(mode) {
    map_ = make_lcs_register_map(x_.n, c_);
    u_psi_ = build_u_psi_circuit(map_, c_);
    u_phi_ = build_u_phi_circuit(map_, c_);
    diff_j_ = build_diffuser(map_, "j").circuit;
    diff_i_ = build_diffuser(map_, "i").circuit;
    u_psi_cost_ = circuit_cost(u_psi_);
    u_phi_cost_ = circuit_cost(u_phi_);
    diff_cost_ = circuit_cost(diff_j_);
    if (mode_ == SimMode::Gate) {
      psi_cache_ = std::make_unique<BasisOracleCache>(u_psi_);
      phi_cache_ = std::make_unique<BasisOracleCache>(u_phi_);
      psi_perm_ = std::make_unique<CompiledPermutation>(u_psi_);
      phi_perm_ = std::make_unique<CompiledPermutation>(u_phi_);
    }
  }

  const RegisterMapPtr& map() const { return map_; }

  TestOutcome quantum_test(std::size_t d, std::size_t iter_index, const GroverConfig& cfg,
                           ResourceTally& tally) {
    const std::size_t n = x_.n;
    const unsigned p = map_->reg("j").width;
    detail::MemoPredicate psi_pred([&](std::uint64_t j) { return psi(x_, y_, j, d); }, n);

    TestOutcome outcome;
    for (int restart = 0; restart < cfg.restarts; ++restart) {
      outcome.restarts_used = restart + 1;

      RngStream search_rng(derive_seed(cfg.seed, {detail::problem_tag(false), iter_index,
                                                  static_cast<std::uint64_t>(restart), 0}));
      GroverPhaseResult search;
      if (mode_ == SimMode::Gate) {
        detail::GatePhase ph{map_, base_key(d), "j", psi_cache_.get(), psi_perm_.get(),
                             &diff_j_, [&](std::uint64_t j) { return psi_pred(j); }, n};
        search = detail::run_gate_phase(ph, cfg.schedule, search_rng);
      } else {
        search = detail::run_abstract_phase(p, [&](std::uint64_t j) { return psi_pred(j); },
                                            cfg.schedule, search_rng);
      }
      tally_phase(tally, u_psi_cost_, search);
      const std::uint64_t jstar = search.candidate;

      detail::MemoPredicate phi_pred(
          [&, jstar](std::uint64_t i) { return phi(x_, y_, i, jstar, d); }, n);
      RngStream verify_rng(derive_seed(cfg.seed, {detail::problem_tag(false), iter_index,
                                                  static_cast<std::uint64_t>(restart), 1}));
      GroverPhaseResult verify;
      if (mode_ == SimMode::Gate) {
        BitVec base = base_key(d);
        const auto& jreg = map_->reg("j");
        write_field(base, jreg.offset, jreg.width, jstar);
        detail::GatePhase ph{map_, base, "i", phi_cache_.get(), phi_perm_.get(),
                             &diff_i_, [&](std::uint64_t i) { return phi_pred(i); }, n};
        verify = detail::run_gate_phase(ph, cfg.schedule, verify_rng);
      } else {
        verify = detail::run_abstract_phase(p, [&](std::uint64_t i) { return phi_pred(i); },
                                            cfg.schedule, verify_rng);
      }
      tally_phase(tally, u_phi_cost_, verify);
      const std::uint64_t istar = verify.candidate;

      // Final check: a single boolean-oracle application on the basis
      // candidates, reading |out> directly.
      bool final_ok;
      if (mode_ == SimMode::Gate) {
        BitVec k = base_key(d);
        const auto& jreg = map_->reg("j");
        const auto& ireg = map_->reg("i");
        write_field(k, jreg.offset, jreg.width, jstar);
        write_field(k, ireg.offset, ireg.width, istar);
        phi_perm_->apply_to_basis(k);
        final_ok = k.test(map_->reg("out").offset);
      } else {
        final_ok = phi_pred(istar);
      }
      tally.add(u_phi_cost_, 1);
      tally.oracle_invocations += 1;

      outcome.search_prob = search.success_prob;
      outcome.verify_prob = verify.success_prob;
      if (final_ok) {
        outcome.verified = true;
        outcome.witness = MatchWitness{static_cast<std::size_t>(istar),
                                       static_cast<std::size_t>(jstar), d};
        break;
      }
    }
    return outcome;
  }

  const CircuitCost& u_psi_cost() const { return u_psi_cost_; }
  const CircuitCost& u_phi_cost() const { return u_phi_cost_; }
  const CircuitCost& diffuser_cost() const { return diff_cost_; }

 private:
  BitVec base_key(std::size_t d) const {
    BitVec k;
    const auto& xreg = map_->reg("x");
    const auto& yreg = map_->reg("y");
    for (std::size_t t = 0; t < x_.n; ++t) {
      write_field(k, xreg.offset + static_cast<std::uint32_t>(t * c_), c_, x_.symbols[t].code);
      write_field(k, yreg.offset + static_cast<std::uint32_t>(t * c_), c_, y_.symbols[t].code);
    }
    const auto& dreg = map_->reg("d");
    write_field(k, dreg.offset, dreg.width, d);
    return k;
  }

  void tally_phase(ResourceTally& tally, const CircuitCost& oracle_cost,
                   const GroverPhaseResult& res) {
    tally.add(oracle_cost, res.oracle_calls);
    tally.add(diff_cost_, res.iterations);
    tally.oracle_invocations += res.oracle_calls;
  }

  PaddedText x_, y_;
  unsigned c_;
  SimMode mode_;
  RegisterMapPtr map_;
  Circuit u_psi_, u_phi_, diff_j_, diff_i_;
  CircuitCost u_psi_cost_, u_phi_cost_, diff_cost_;
  std::unique_ptr<BasisOracleCache> psi_cache_, phi_cache_;
  std::unique_ptr<CompiledPermutation> psi_perm_, phi_perm_;
};

/// Gate-level engine for one LPS instance. The search oracle restricts
/// candidates to windows inside the raw text so that a verified witness
/// always corresponds to a palindrome the classical answer counts.
class LpsEngine {
 public:
  LpsEngine(PaddedText x, unsigned c, SimMode mode)
      : x_(std::move(x)), c_(c), mode_(mode) {
    map_ = make_lps_register_map(x_.n, c_);
    diff_i_ = build_diffuser(map_, "i").circuit;
    diff_cost_ = circuit_cost(diff_i_);
  }

  const RegisterMapPtr& map() const { return map_; }

  TestOutcome quantum_test(std::size_t d, std::size_t iter_index, const GroverConfig& cfg,
                           ResourceTally& tally) {
    const std::size_t n = x_.n;
    const unsigned p = map_->reg("i").width;
    const std::int64_t bound =
        static_cast<std::int64_t>(x_.raw_len) - static_cast<std::int64_t>(d);
    auto restricted = [&](std::uint64_t i) {
      return i + d <= x_.raw_len && rho(x_, i, d);
    };
    detail::MemoPredicate rho_pred(restricted, n);

    const Circuit* u = oracle_for(d, bound);
    const CircuitCost& cost = cost_for(d);

    BasisOracleCache* cache = nullptr;
    CompiledPermutation* perm = nullptr;
    if (mode_ == SimMode::Gate) {
      cache = cache_for(d);
      perm = perm_for(d);
    }
    (void)u;

    TestOutcome outcome;
    for (int restart = 0; restart < cfg.restarts; ++restart) {
      outcome.restarts_used = restart + 1;
      RngStream search_rng(derive_seed(cfg.seed, {detail::problem_tag(true), iter_index,
                                                  static_cast<std::uint64_t>(restart), 0}));
      GroverPhaseResult search;
      if (mode_ == SimMode::Gate) {
        detail::GatePhase ph{map_, base_key(d), "i", cache, perm, &diff_i_,
                             [&](std::uint64_t i) { return rho_pred(i); }, n};
        search = detail::run_gate_phase(ph, cfg.schedule, search_rng);
      } else {
        search = detail::run_abstract_phase(p, [&](std::uint64_t i) { return rho_pred(i); },
                                            cfg.schedule, search_rng);
      }
      tally.add(cost, search.oracle_calls);
      tally.add(diff_cost_, search.iterations);
      tally.oracle_invocations += search.oracle_calls;
      const std::uint64_t istar = search.candidate;

      bool final_ok;
      if (mode_ == SimMode::Gate) {
        BitVec k = base_key(d);
        const auto& ireg = map_->reg("i");
        write_field(k, ireg.offset, ireg.width, istar);
        perm->apply_to_basis(k);
        final_ok = k.test(map_->reg("out").offset);
      } else {
        final_ok = rho_pred(istar);
      }
      tally.add(cost, 1);
      tally.oracle_invocations += 1;

      outcome.search_prob = search.success_prob;
      outcome.verify_prob = 0.0;
      if (final_ok) {
        outcome.verified = true;
        outcome.witness = MatchWitness{static_cast<std::size_t>(istar), 0, d};
        break;
      }
    }
    return outcome;
  }

  const CircuitCost& cost_for(std::size_t d) {
    ensure_built(d);
    return built_.at(d).cost;
  }

 private:
  struct Built {
    Circuit circuit;
    CircuitCost cost;
    std::unique_ptr<BasisOracleCache> cache;
    std::unique_ptr<CompiledPermutation> perm;
  };

  void ensure_built(std::size_t d) {
    if (built_.count(d)) return;
    const std::int64_t bound =
        static_cast<std::int64_t>(x_.raw_len) - static_cast<std::int64_t>(d);
    Built b{build_u_rho_restricted_circuit(map_, c_, bound), {}, nullptr, nullptr};
    b.cost = circuit_cost(b.circuit);
    if (mode_ == SimMode::Gate) {
      b.cache = std::make_unique<BasisOracleCache>(b.circuit);
      b.perm = std::make_unique<CompiledPermutation>(b.circuit);
    }
    built_.emplace(d, std::move(b));
  }

  const Circuit* oracle_for(std::size_t d, std::int64_t) {
    ensure_built(d);
    return &built_.at(d).circuit;
  }
  BasisOracleCache* cache_for(std::size_t d) {
    ensure_built(d);
    return built_.at(d).cache.get();
  }
  CompiledPermutation* perm_for(std::size_t d) {
    ensure_built(d);
    return built_.at(d).perm.get();
  }

  BitVec base_key(std::size_t d) const {
    BitVec k;
    const auto& xreg = map_->reg("x");
    for (std::size_t t = 0; t < x_.n; ++t)
      write_field(k, xreg.offset + static_cast<std::uint32_t>(t * c_), c_, x_.symbols[t].code);
    const auto& dreg = map_->reg("d");
    write_field(k, dreg.offset, dreg.width, d);
    return k;
  }

  PaddedText x_;
  unsigned c_;
  SimMode mode_;
  RegisterMapPtr map_;
  Circuit diff_i_;
  CircuitCost diff_cost_;
  std::map<std::size_t, Built> built_;
};

/// Standalone form of the spec operation; builds a transient engine.
inline TestOutcome quantum_test_lcs(const PaddedText& x, const PaddedText& y, std::size_t d,
                                    const GroverConfig& cfg, SimMode mode = SimMode::Gate) {
  if (x.symbol_bits != y.symbol_bits) throw std::invalid_argument("symbol widths differ");
  LcsEngine engine(x, y, x.symbol_bits, mode);
  ResourceTally tally;
  return engine.quantum_test(d, 0, cfg, tally);
}

inline TestOutcome quantum_test_lps(const PaddedText& x, std::size_t d, const GroverConfig& cfg,
                                    SimMode mode = SimMode::Gate) {
  LpsEngine engine(x, x.symbol_bits, mode);
  ResourceTally tally;
  return engine.quantum_test(d, 0, cfg, tally);
}

namespace detail {

inline void check_capacity(std::size_t n, SimMode mode) {
  if (mode == SimMode::Gate && n > kGateModeMaxN)
    throw CapacityError("gate mode supports padded length up to 16; use --mode abstract "
                        "for larger inputs");
  if (mode == SimMode::Abstract && n > kAbstractModeMaxN)
    throw CapacityError("abstract mode supports padded length up to 65536");
}

inline unsigned ceil_log2_size(std::size_t n) {
  unsigned p = 0;
  while ((std::size_t{1} << p) < n) ++p;
  return p;
}

}  // namespace detail

/// Full LCS run: pads the inputs, runs the binary search with the
/// iterative quantum test, and reports the answer over the raw strings.
inline RunReport lcs(const std::string& x_raw, const std::string& y_raw, const Alphabet& alpha,
                     const GroverConfig& cfg, SimMode mode = SimMode::Gate) {
  if (x_raw.size() != y_raw.size())
    throw std::invalid_argument("lcs requires equal raw lengths");
  const PaddedText x = pad_input(x_raw, alpha, alpha.x_sentinel());
  const PaddedText y = pad_input(y_raw, alpha, alpha.y_sentinel());

  RunReport rep;
  rep.problem = "lcs";
  rep.n = x.n;
  rep.raw_len = x.raw_len;
  rep.seed = cfg.seed;
  rep.mode = mode;
  rep.schedule = cfg.schedule;

  if (mode == SimMode::Classical) {
    auto r = brute_lcs(x, y);
    rep.answer = r.length;
    if (r.length > 0) {
      const auto& w = r.witness;
      rep.witness = {{(w.i + x.n - w.j) % x.n, w.i}};
    }
    return rep;
  }
  detail::check_capacity(x.n, mode);
  if (x.raw_len == 0) return rep;

  LcsEngine engine(x, y, alpha.symbol_bits(), mode);
  rep.resources.qubits = engine.map()->total_width();

  std::size_t l = 0, r = x.raw_len;
  std::optional<MatchWitness> best;
  std::size_t iter_index = 0;
  const std::size_t max_iters = detail::ceil_log2_size(x.n) + 1;
  while (l < r) {
    if (iter_index >= max_iters) throw std::logic_error("binary search exceeded its bound");
    const std::size_t d = (l + r + 1) / 2;
    TestOutcome out = engine.quantum_test(d, iter_index, cfg, rep.resources);
    rep.iterations.push_back({l, r, d, out.verified, out.search_prob, out.verify_prob,
                              out.restarts_used});
    if (out.verified) {
      l = d;
      best = out.witness;
    } else {
      r = d - 1;
    }
    ++iter_index;
  }
  rep.answer = l;
  if (best && rep.answer > 0) {
    // Map the rotated coordinates back to raw positions.
    const std::size_t xpos = (best->i + x.n - best->j) % x.n;
    const std::size_t ypos = best->i;
    if (xpos + best->d > x.raw_len || ypos + best->d > y.raw_len)
      throw std::logic_error("verified witness escaped the raw text");
    rep.witness = {{xpos, ypos}};
  }
  return rep;
}

/// Full LPS run with the two-phase iterative test.
inline RunReport lps(const std::string& x_raw, const Alphabet& alpha, const GroverConfig& cfg,
                     SimMode mode = SimMode::Gate) {
  const PaddedText x = pad_input(x_raw, alpha, alpha.x_sentinel());

  RunReport rep;
  rep.problem = "lps";
  rep.n = x.n;
  rep.raw_len = x.raw_len;
  rep.seed = cfg.seed;
  rep.mode = mode;
  rep.schedule = cfg.schedule;

  if (mode == SimMode::Classical) {
    auto r = brute_lps(x);
    rep.answer = r.length;
    if (r.length > 0) rep.witness = {{r.start, r.start}};
    return rep;
  }
  detail::check_capacity(x.n, mode);
  if (x.raw_len == 0) return rep;

  LpsEngine engine(x, alpha.symbol_bits(), mode);
  rep.resources.qubits = engine.map()->total_width();

  std::size_t l = 0, r = x.raw_len;
  std::optional<MatchWitness> best;
  std::size_t iter_index = 0;
  const std::size_t max_iters = detail::ceil_log2_size(x.n) + 1;
  while (l < r) {
    if (iter_index >= max_iters) throw std::logic_error("binary search exceeded its bound");
    const std::size_t d = (l + r + 1) / 2;
    TestOutcome out = engine.quantum_test(d, iter_index, cfg, rep.resources);
    rep.iterations.push_back({l, r, d, out.verified, out.search_prob, out.verify_prob,
                              out.restarts_used});
    if (out.verified) {
      l = d;
      best = out.witness;
    } else {
      r = d - 1;
    }
    ++iter_index;
  }
  rep.answer = l;
  if (best && rep.answer > 0) {
    if (best->i + best->d > x.raw_len)
      throw std::logic_error("verified witness escaped the raw text");
    rep.witness = {{best->i, best->i}};
  }
  return rep;
}

}  // namespace qlcs
