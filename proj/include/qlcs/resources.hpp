#pragma once

// No-simulation resource estimation: builds the circuits a worst-case run
// would execute and sums depth and gate counts, for the scaling study
// against the sqrt(n) * polylog(n) targets.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlcs/driver.hpp"

namespace qlcs {

struct ResourceRow {
  std::size_t n = 0;
  std::string problem;
  std::uint64_t qubits = 0;
  std::map<GateKind, std::uint64_t> gates;
  std::uint64_t gate_total = 0;
  std::uint64_t depth = 0;
  std::uint64_t oracle_invocations = 0;
  double normalized_ratio = 0.0;  // depth / (sqrt(n) * log2(n)^k)
};

namespace detail {

/// Worst-case binary-search d sequence: the all-fail path over the
/// interval [0, n-1] (padding leaves raw length n-1 in the worst case).
inline std::vector<std::size_t> worst_case_d_sequence(std::size_t n) {
  std::vector<std::size_t> ds;
  std::size_t l = 0, r = n - 1;
  while (l < r) {
    const std::size_t d = (l + r + 1) / 2;
    ds.push_back(d);
    r = d - 1;
  }
  return ds;
}

inline CircuitCost phase_init_cost(const RegisterMapPtr& map, const std::string& search_reg) {
  Circuit c(map, "init");
  const auto& reg = map->reg(search_reg);
  for (std::uint32_t q = 0; q < reg.width; ++q) c.append(Gate::h(reg.offset + q));
  const auto& out = map->reg("out");
  c.append(Gate::x(out.offset));
  c.append(Gate::h(out.offset));
  return circuit_cost(c);
}

}  // namespace detail

/// Resources for one padded size, fixed schedule, binary alphabet. Builds
/// every distinct circuit the run executes and multiplies by the
/// worst-case iteration counts of Fig-style fixed-schedule Grover.
inline ResourceRow estimate_resources_row(std::size_t n, const std::string& problem) {
  if (n < 16 || n > 4096) throw std::invalid_argument("resource sweep covers 16 <= n <= 4096");
  if ((n & (n - 1)) != 0) throw std::invalid_argument("n must be a power of two");
  const unsigned c = 2;  // binary alphabet plus the two sentinels
  const unsigned p = detail::ceil_log2_size(n);
  const std::uint64_t k = grover_fixed_iterations(n);
  const auto ds = detail::worst_case_d_sequence(n);

  ResourceRow row;
  row.n = n;
  row.problem = problem;
  ResourceTally tally;

  if (problem == "lcs") {
    auto map = make_lcs_register_map(n, c);
    row.qubits = map->total_width();
    const CircuitCost u_psi = circuit_cost(build_u_psi_circuit(map, c));
    const CircuitCost u_phi = circuit_cost(build_u_phi_circuit(map, c));
    const CircuitCost diff_j = circuit_cost(build_diffuser(map, "j").circuit);
    const CircuitCost diff_i = circuit_cost(build_diffuser(map, "i").circuit);
    const CircuitCost init_j = detail::phase_init_cost(map, "j");
    const CircuitCost init_i = detail::phase_init_cost(map, "i");
    const std::uint64_t steps = ds.size();
    tally.add(init_j, steps);
    tally.add(u_psi, steps * k);
    tally.add(diff_j, steps * k);
    tally.add(init_i, steps);
    tally.add(u_phi, steps * k);
    tally.add(diff_i, steps * k);
    tally.add(u_phi, steps);  // final checks
    row.oracle_invocations = steps * (2 * k + 1);
    row.normalized_ratio = static_cast<double>(tally.depth) /
                           (std::sqrt(static_cast<double>(n)) * std::pow(p, 4));
  } else if (problem == "lps") {
    auto map = make_lps_register_map(n, c);
    row.qubits = map->total_width();
    const CircuitCost diff_i = circuit_cost(build_diffuser(map, "i").circuit);
    const CircuitCost init_i = detail::phase_init_cost(map, "i");
    for (std::size_t d : ds) {
      const std::int64_t bound =
          static_cast<std::int64_t>(n - 1) - static_cast<std::int64_t>(d);
      const CircuitCost u_rho = circuit_cost(build_u_rho_restricted_circuit(map, c, bound));
      tally.add(init_i, 1);
      tally.add(u_rho, k);
      tally.add(diff_i, k);
      tally.add(u_rho, 1);  // final check
    }
    row.oracle_invocations = ds.size() * (k + 1);
    row.normalized_ratio = static_cast<double>(tally.depth) /
                           (std::sqrt(static_cast<double>(n)) * std::pow(p, 3));
  } else {
    throw std::invalid_argument("problem must be lcs or lps");
  }

  row.gates = tally.gates;
  row.depth = tally.depth;
  for (const auto& [kind, count] : row.gates) row.gate_total += count;
  return row;
}

inline std::vector<ResourceRow> estimate_resources(std::size_t n_min, std::size_t n_max,
                                                   const std::string& problem) {
  std::vector<ResourceRow> rows;
  for (std::size_t n = n_min; n <= n_max; n <<= 1) rows.push_back(estimate_resources_row(n, problem));
  return rows;
}

}  // namespace qlcs
