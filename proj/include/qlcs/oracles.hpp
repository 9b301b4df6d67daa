#pragma once

// Boolean oracles assembled from the operator segments, phase-kickback
// preparation, and the Grover search phases with their iteration
// schedules.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qlcs/operators.hpp"
#include "qlcs/sparse_state.hpp"
#include "qlcs/text.hpp"

namespace qlcs {

enum class OracleKind { Psi, Phi, Rho };

/// A boolean oracle: gate-level circuit mapping |inputs>|b> to
/// |inputs>|b ^ f(inputs)> with all other registers restored, plus the
/// classical predicate of the same function for the abstract mode.
struct OracleSpec {
  OracleKind kind;
  std::size_t d = 0;
  std::string search_reg;
  Circuit circuit;
  std::function<bool(std::uint64_t)> predicate;
};

/// U_psi = ROT(j->x); SFC; CX(r->out); SFC^-1; ROT^-1.
inline Circuit build_u_psi_circuit(const RegisterMapPtr& map, unsigned c,
                                   const BuildOptions& opts = {}) {
  AncillaPool pool(*map);
  const auto& j = map->reg("j");
  const auto& x = map->reg("x");
  const std::size_t n = x.width / c;

  auto rot = std::make_shared<std::vector<Gate>>();
  detail::emit_ctrl_rot(*rot, pool, detail::register_rot_controls(j), x.offset, n, c,
                        RotDirection::Rightward);
  auto sfc = detail::seg_sfc(*map, pool, c, opts.corrupt_sfc);

  Circuit u(map, "u-psi");
  u.append_segment(rot);
  u.append_segment(sfc.forward);
  u.append_segment(sfc.extract);
  u.append_segment(sfc.forward, true);
  u.append(Gate::cx(map->reg("r").offset, map->reg("out").offset));
  u.append_segment(sfc.forward);
  u.append_segment(sfc.extract, true);
  u.append_segment(sfc.forward, true);
  u.append_segment(rot, true);
  return u;
}

/// U_phi = ROT(j->x); ROT(i->x); ROT(i->y); FPM; CX(r->out); FPM^-1;
/// ROT^-1(i->y); ROT^-1(i->x); ROT^-1(j->x). The i rotations are leftward
/// so the compared prefix is the circular window starting at i.
inline Circuit build_u_phi_circuit(const RegisterMapPtr& map, unsigned c) {
  AncillaPool pool(*map);
  const auto& i = map->reg("i");
  const auto& j = map->reg("j");
  const auto& x = map->reg("x");
  const auto& y = map->reg("y");
  const std::size_t n = x.width / c;

  auto rot_jx = std::make_shared<std::vector<Gate>>();
  detail::emit_ctrl_rot(*rot_jx, pool, detail::register_rot_controls(j), x.offset, n, c,
                        RotDirection::Rightward);
  auto rot_ix = std::make_shared<std::vector<Gate>>();
  detail::emit_ctrl_rot(*rot_ix, pool, detail::register_rot_controls(i), x.offset, n, c,
                        RotDirection::Leftward);
  auto rot_iy = std::make_shared<std::vector<Gate>>();
  detail::emit_ctrl_rot(*rot_iy, pool, detail::register_rot_controls(i), y.offset, n, c,
                        RotDirection::Leftward);
  auto fpm = detail::seg_fpm(*map, pool, c);

  Circuit u(map, "u-phi");
  u.append_segment(rot_jx);
  u.append_segment(rot_ix);
  u.append_segment(rot_iy);
  u.append_segment(fpm.forward);
  u.append_segment(fpm.extract);
  u.append_segment(fpm.forward, true);
  u.append(Gate::cx(map->reg("r").offset, map->reg("out").offset));
  u.append_segment(fpm.forward);
  u.append_segment(fpm.extract, true);
  u.append_segment(fpm.forward, true);
  u.append_segment(rot_iy, true);
  u.append_segment(rot_ix, true);
  u.append_segment(rot_jx, true);
  return u;
}

/// U_rho = ROT(i->x); IPM; CX(r->out); IPM^-1; ROT^-1 — the pure
/// palindrome-window oracle.
inline Circuit build_u_rho_circuit(const RegisterMapPtr& map, unsigned c) {
  AncillaPool pool(*map);
  const auto& i = map->reg("i");
  const auto& x = map->reg("x");
  const std::size_t n = x.width / c;

  auto rot = std::make_shared<std::vector<Gate>>();
  detail::emit_ctrl_rot(*rot, pool, detail::register_rot_controls(i), x.offset, n, c,
                        RotDirection::Leftward);
  auto ipm = detail::seg_ipm(*map, pool, c);

  Circuit u(map, "u-rho");
  u.append_segment(rot);
  u.append_segment(ipm.forward);
  u.append_segment(ipm.extract);
  u.append_segment(ipm.forward, true);
  u.append(Gate::cx(map->reg("r").offset, map->reg("out").offset));
  u.append_segment(ipm.forward);
  u.append_segment(ipm.extract, true);
  u.append_segment(ipm.forward, true);
  u.append_segment(rot, true);
  return u;
}

/// U_rho conjoined with the window bound [i <= raw_len - d]: out flips
/// only for palindromic windows lying inside the raw text. The bound is a
/// classical comparator constant fixed per binary-search step.
inline Circuit build_u_rho_restricted_circuit(const RegisterMapPtr& map, unsigned c,
                                              std::int64_t i_bound) {
  AncillaPool pool(*map);
  const auto& i = map->reg("i");
  const auto& x = map->reg("x");
  const std::size_t n = x.width / c;

  auto rot = std::make_shared<std::vector<Gate>>();
  detail::emit_ctrl_rot(*rot, pool, detail::register_rot_controls(i), x.offset, n, c,
                        RotDirection::Leftward);
  auto ipm = detail::seg_ipm(*map, pool, c);

  auto cmp = std::make_shared<std::vector<Gate>>();
  const std::uint32_t flag = pool.alloc(1);
  detail::emit_compare_le(*cmp, pool, i, i_bound, flag);

  Circuit u(map, "u-rho-restricted");
  u.append_segment(rot);
  u.append_segment(ipm.forward);
  u.append_segment(ipm.extract);
  u.append_segment(ipm.forward, true);
  u.append_segment(cmp);
  u.append(Gate::ccx(map->reg("r").offset, flag, map->reg("out").offset));
  u.append_segment(cmp, true);
  u.append_segment(ipm.forward);
  u.append_segment(ipm.extract, true);
  u.append_segment(ipm.forward, true);
  u.append_segment(rot, true);
  return u;
}

/// Puts the out register into |-> (X then H) so a boolean oracle acts as
/// a phase oracle through kickback.
inline void prepare_kickback(SparseState& s, const std::string& out_reg) {
  const auto& r = s.register_map()->reg(out_reg);
  s.apply_gate(Gate::x(r.offset));
  s.apply_gate(Gate::h(r.offset));
}

enum class GroverSchedule { Fixed, RandomizedDoubling };

inline const char* schedule_name(GroverSchedule s) {
  return s == GroverSchedule::Fixed ? "fixed" : "randomized-doubling";
}

/// GroverConfig: schedule, restart budget for the whole iterative test,
/// and the top-level seed every stream derives from.
struct GroverConfig {
  GroverSchedule schedule = GroverSchedule::RandomizedDoubling;
  int restarts = 5;
  std::uint64_t seed = 0;
};

inline std::uint64_t grover_fixed_iterations(std::uint64_t search_space) {
  const double k = std::floor((3.14159265358979323846 / 4.0) * std::sqrt(static_cast<double>(search_space)));
  return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
}

/// Attempts per phase under the randomized-doubling schedule. Candidates
/// are checked with one oracle query per attempt, so the phase failure
/// probability is at most (1 - 1/4)^attempts for saturated caps and the
/// restart loop compounds it further.
constexpr int kDoublingAttempts = 10;

struct GroverPhaseResult {
  std::uint64_t candidate = 0;
  bool checked = false;         // candidate confirmed by an oracle query
  double success_prob = 0.0;    // exact solution mass before the returned measurement
  int attempts = 0;
  std::uint64_t iterations = 0;
  std::uint64_t oracle_calls = 0;
};

/// One search phase: prepare, iterate (oracle, diffuser), measure, and —
/// under the doubling schedule — verify the candidate with a single
/// oracle query, retrying with a doubled iteration cap on failure.
struct GroverPhaseSpec {
  std::function<SparseState()> prepare;
  std::function<void(SparseState&)> apply_oracle;
  std::function<void(SparseState&)> apply_diffuser;
  std::function<bool(std::uint64_t)> check;     // deterministic, one oracle call
  std::function<bool(std::uint64_t)> solution;  // classical predicate for reporting
  std::string search_reg;
  std::uint64_t search_space = 0;
  std::size_t max_support = 0;  // invariant bound on the sparse support, 0 disables
};

inline GroverPhaseResult run_grover_phase(const GroverPhaseSpec& spec, GroverSchedule schedule,
                                          RngStream& rng) {
  GroverPhaseResult res;
  const std::uint64_t k_fixed = grover_fixed_iterations(spec.search_space);
  const int attempts = schedule == GroverSchedule::Fixed ? 1 : kDoublingAttempts;

  for (int a = 0; a < attempts; ++a) {
    std::uint64_t k;
    if (schedule == GroverSchedule::Fixed) {
      k = k_fixed;
    } else {
      std::uint64_t cap = std::uint64_t{1} << std::min<std::uint64_t>(a, 62);
      if (cap > k_fixed + 1) cap = k_fixed + 1;
      k = rng.next_u64() % cap;
    }

    SparseState state = spec.prepare();
    for (std::uint64_t it = 0; it < k; ++it) {
      spec.apply_oracle(state);
      spec.apply_diffuser(state);
      if (spec.max_support && state.support_size() > spec.max_support)
        throw std::logic_error("sparse support bound exceeded");
    }
    res.iterations += k;
    res.oracle_calls += k;
    res.success_prob = state.register_probability(spec.search_reg, spec.solution);
    const MeasurementOutcome m = state.measure_register(spec.search_reg, rng);
    res.candidate = m.value;
    ++res.attempts;

    if (schedule == GroverSchedule::Fixed) return res;
    ++res.oracle_calls;
    if (spec.check(res.candidate)) {
      res.checked = true;
      return res;
    }
  }
  return res;
}

}  // namespace qlcs
