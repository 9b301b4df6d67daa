#pragma once

// Machine-readable report serialization: JSON with a fixed key order so
// identical runs are byte-identical, CSV for resource sweeps, and a short
// text rendering.

#include <sstream>
#include <string>

#include <json.hpp>

#include "qlcs/driver.hpp"
#include "qlcs/resources.hpp"

namespace qlcs {

using ordered_json = nlohmann::ordered_json;

inline ordered_json gates_to_json(const std::map<GateKind, std::uint64_t>& gates) {
  ordered_json g;
  for (GateKind kind : {GateKind::H, GateKind::X, GateKind::Z, GateKind::CX, GateKind::CCX,
                        GateKind::MCX, GateKind::MCZ, GateKind::SWAP, GateKind::CSWAP}) {
    auto it = gates.find(kind);
    g[gate_kind_name(kind)] = it == gates.end() ? 0 : it->second;
  }
  return g;
}

inline ordered_json report_to_json(const RunReport& rep) {
  ordered_json j;
  j["problem"] = rep.problem;
  j["n"] = rep.n;
  j["raw_len"] = rep.raw_len;
  j["answer"] = rep.answer;
  if (rep.witness) {
    ordered_json w;
    w["x_pos"] = rep.witness->first;
    w["y_pos"] = rep.witness->second;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  ordered_json iters = ordered_json::array();
  for (const auto& it : rep.iterations) {
    ordered_json e;
    e["l"] = it.l;
    e["r"] = it.r;
    e["d"] = it.d;
    e["verified"] = it.verified;
    e["search_success_prob"] = it.search_success_prob;
    e["verify_success_prob"] = it.verify_success_prob;
    e["restarts"] = it.restarts;
    iters.push_back(e);
  }
  j["iterations"] = iters;
  ordered_json res;
  res["qubits"] = rep.resources.qubits;
  res["depth"] = rep.resources.depth;
  res["gates"] = gates_to_json(rep.resources.gates);
  j["resources"] = res;
  j["seed"] = rep.seed;
  j["mode"] = mode_name(rep.mode);
  j["schedule"] = schedule_name(rep.schedule);
  return j;
}

inline RunReport report_from_json(const ordered_json& j) {
  RunReport rep;
  rep.problem = j.at("problem").get<std::string>();
  rep.n = j.at("n").get<std::size_t>();
  rep.raw_len = j.at("raw_len").get<std::size_t>();
  rep.answer = j.at("answer").get<std::size_t>();
  if (!j.at("witness").is_null())
    rep.witness = {{j["witness"].at("x_pos").get<std::size_t>(),
                    j["witness"].at("y_pos").get<std::size_t>()}};
  for (const auto& e : j.at("iterations")) {
    IterationTrace t;
    t.l = e.at("l").get<std::size_t>();
    t.r = e.at("r").get<std::size_t>();
    t.d = e.at("d").get<std::size_t>();
    t.verified = e.at("verified").get<bool>();
    t.search_success_prob = e.at("search_success_prob").get<double>();
    t.verify_success_prob = e.at("verify_success_prob").get<double>();
    t.restarts = e.at("restarts").get<int>();
    rep.iterations.push_back(t);
  }
  rep.resources.qubits = j.at("resources").at("qubits").get<std::uint64_t>();
  rep.resources.depth = j.at("resources").at("depth").get<std::uint64_t>();
  for (GateKind kind : {GateKind::H, GateKind::X, GateKind::Z, GateKind::CX, GateKind::CCX,
                        GateKind::MCX, GateKind::MCZ, GateKind::SWAP, GateKind::CSWAP}) {
    auto v = j.at("resources").at("gates").at(gate_kind_name(kind)).get<std::uint64_t>();
    if (v) rep.resources.gates[kind] = v;
  }
  const std::string mode = j.at("mode").get<std::string>();
  rep.mode = mode == "gate" ? SimMode::Gate
             : mode == "abstract" ? SimMode::Abstract
                                  : SimMode::Classical;
  rep.schedule = j.at("schedule").get<std::string>() == "fixed"
                     ? GroverSchedule::Fixed
                     : GroverSchedule::RandomizedDoubling;
  rep.seed = j.at("seed").get<std::uint64_t>();
  return rep;
}

inline bool reports_equal(const RunReport& a, const RunReport& b) {
  return report_to_json(a) == report_to_json(b);
}

inline std::string report_to_text(const RunReport& rep) {
  std::ostringstream out;
  out << rep.problem << " n=" << rep.n << " raw_len=" << rep.raw_len
      << " answer=" << rep.answer;
  if (rep.witness) out << " witness=(" << rep.witness->first << "," << rep.witness->second << ")";
  out << " mode=" << mode_name(rep.mode) << " seed=" << rep.seed << "\n";
  for (const auto& it : rep.iterations)
    out << "  [" << it.l << "," << it.r << "] d=" << it.d
        << (it.verified ? " verified" : " rejected") << " p_search=" << it.search_success_prob
        << " p_verify=" << it.verify_success_prob << " restarts=" << it.restarts << "\n";
  out << "  qubits=" << rep.resources.qubits << " depth=" << rep.resources.depth
      << " oracle_calls=" << rep.resources.oracle_invocations << "\n";
  return out.str();
}

inline std::string resource_csv_header() {
  return "n,problem,qubits,depth,gate_total,H,X,Z,CX,CCX,MCX,MCZ,SWAP,CSWAP,"
         "oracle_invocations,normalized_ratio";
}

inline std::string resource_row_csv(const ResourceRow& row) {
  std::ostringstream out;
  out << row.n << ',' << row.problem << ',' << row.qubits << ',' << row.depth << ','
      << row.gate_total;
  for (GateKind kind : {GateKind::H, GateKind::X, GateKind::Z, GateKind::CX, GateKind::CCX,
                        GateKind::MCX, GateKind::MCZ, GateKind::SWAP, GateKind::CSWAP}) {
    auto it = row.gates.find(kind);
    out << ',' << (it == row.gates.end() ? 0 : it->second);
  }
  out << ',' << row.oracle_invocations << ',' << row.normalized_ratio;
  return out.str();
}

inline ordered_json resource_row_json(const ResourceRow& row) {
  ordered_json j;
  j["n"] = row.n;
  j["problem"] = row.problem;
  j["qubits"] = row.qubits;
  j["depth"] = row.depth;
  j["gates"] = gates_to_json(row.gates);
  j["gate_total"] = row.gate_total;
  j["oracle_invocations"] = row.oracle_invocations;
  j["normalized_ratio"] = row.normalized_ratio;
  return j;
}

}  // namespace qlcs
