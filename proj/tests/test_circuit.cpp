#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qlcs/bitvec.hpp"
#include "qlcs/circuit.hpp"
#include "qlcs/sparse_state.hpp"

using namespace qlcs;

namespace {

RegisterMapPtr small_map(std::uint32_t width) {
  auto m = std::make_shared<RegisterMap>();
  m->add("q", width);
  return m;
}

}  // namespace

TEST_CASE("append extends the gate list and validates gates") {
  auto map = small_map(4);
  Circuit c(map);
  CHECK(c.size() == 0);
  c.append(Gate::h(0));
  CHECK(c.size() == 1);
  for (int k = 0; k < 5; ++k) c.append(Gate::x(1));
  CHECK(c.size() == 6);
  CHECK(*c.map() == *map);

  CHECK_THROWS_AS(c.append(Gate::h(4)), std::invalid_argument);
  CHECK_THROWS_AS(c.append(Gate::cx(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(c.append(Gate::ccx(1, 1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(c.append(Gate::swap(3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(c.append(Gate::mcx({0, 1}, 1)), std::invalid_argument);
}

TEST_CASE("inverse reverses the gate order and is an involution") {
  auto map = small_map(2);
  Circuit c(map);
  c.append(Gate::h(0));
  c.append(Gate::cx(0, 1));

  Circuit inv = c.inverse();
  CHECK(inv.dump() == "CX 1 0\nH 0\n");
  CHECK(inv.inverse().dump() == c.dump());

  SECTION("c followed by inverse(c) is the identity on basis states") {
    for (std::uint64_t v = 0; v < 4; ++v) {
      auto s = SparseState::basis(map, {{"q", v}});
      s.apply_circuit(c);
      s.apply_circuit(inv);
      BitVec expect;
      write_field(expect, 0, 2, v);
      CHECK(std::abs(s.amplitude(expect) - std::complex<double>{1.0}) < 1e-12);
      CHECK(s.support_size() == 1);
    }
  }
}

TEST_CASE("depth counts greedy disjoint-qubit layers") {
  auto map = small_map(3);
  SECTION("disjoint single-qubit gates parallelize") {
    Circuit c(map);
    c.append(Gate::h(0));
    c.append(Gate::h(1));
    CHECK(c.depth() == 1);
  }
  SECTION("a dependent gate starts a new layer") {
    Circuit c(map);
    c.append(Gate::h(0));
    c.append(Gate::h(1));
    c.append(Gate::cx(0, 1));
    CHECK(c.depth() == 2);
  }
  SECTION("depth never exceeds size") {
    std::mt19937_64 rng(3);
    Circuit c(map);
    for (int k = 0; k < 40; ++k) {
      std::uint32_t a = rng() % 3, b = (a + 1 + rng() % 2) % 3;
      if (rng() % 2)
        c.append(Gate::h(a));
      else
        c.append(Gate::cx(a, b));
      CHECK(c.depth() <= c.size());
    }
  }
}

TEST_CASE("multi-controlled gates are charged their log-depth expansion") {
  auto map = small_map(9);
  Circuit c(map);
  c.append(Gate::mcx({0, 1, 2, 3, 4, 5, 6, 7}, 8));
  CHECK(c.depth() == 4);  // ceil(log2 8) + 1
  Circuit z(map);
  z.append(Gate::mcz({0, 1, 2}, 3));
  CHECK(z.depth() == 3);  // ceil(log2 3) + 1
}

TEST_CASE("greedy layering never schedules overlapping gates together") {
  auto map = small_map(6);
  std::mt19937_64 rng(17);
  Circuit c(map);
  for (int k = 0; k < 120; ++k) {
    std::uint32_t a = rng() % 6;
    std::uint32_t b = (a + 1 + rng() % 5) % 6;
    switch (rng() % 3) {
      case 0: c.append(Gate::h(a)); break;
      case 1: c.append(Gate::cx(a, b)); break;
      default: c.append(Gate::swap(a, b)); break;
    }
  }
  auto start = c.schedule();
  // Reconstruct layer occupancy and check disjointness per layer.
  std::map<std::uint32_t, std::vector<std::uint32_t>> layer_qubits;
  std::size_t idx = 0;
  bool ok = true;
  c.for_each([&](const Gate& g) {
    const std::uint32_t s = start[idx++];
    const std::uint32_t cost = gate_layer_cost(g);
    g.for_each_qubit([&](std::uint32_t q) {
      for (std::uint32_t l = s; l < s + cost; ++l) {
        auto& v = layer_qubits[l];
        for (auto existing : v)
          if (existing == q) ok = false;
        v.push_back(q);
      }
    });
  });
  CHECK(ok);
}

TEST_CASE("gate_counts are exact and additive under compose") {
  auto map = small_map(3);
  Circuit a(map), b(map);
  a.append(Gate::h(0));
  a.append(Gate::h(1));
  a.append(Gate::cx(0, 1));
  b.append(Gate::cx(1, 2));
  b.append(Gate::x(0));

  auto ca = a.gate_counts();
  CHECK(ca[GateKind::H] == 2);
  CHECK(ca[GateKind::CX] == 1);

  auto both = compose(a, b);
  auto cb = both.gate_counts();
  CHECK(cb[GateKind::H] == 2);
  CHECK(cb[GateKind::CX] == 2);
  CHECK(cb[GateKind::X] == 1);
  CHECK(both.size() == a.size() + b.size());
  CHECK(both.depth() <= a.depth() + b.depth());

  Circuit empty(map);
  CHECK(compose(a, empty).size() == a.size());
  CHECK(empty.gate_counts().empty());

  auto other = small_map(4);
  Circuit mismatched(other);
  CHECK_THROWS_AS(compose(a, mismatched), std::invalid_argument);
}

TEST_CASE("dump writes one gate per line in a stable format") {
  auto map = small_map(8);
  Circuit c(map);
  c.append(Gate::h(3));
  c.append(Gate::cx(5, 2));
  c.append(Gate::ccx(0, 3, 5));
  c.append(Gate::swap(1, 2));
  c.append(Gate::cswap(7, 1, 2));
  c.append(Gate::mcx({1, 2, 3, 4}, 0));
  CHECK(c.dump() ==
        "H 3\n"
        "CX 2 5\n"
        "CCX 5 0 3\n"
        "SWAP 1 2\n"
        "CSWAP 1 2 7\n"
        "MCX 0 1 2 3 4\n");
}

TEST_CASE("MCX expansion preserves permutation semantics exhaustively") {
  // Controls + target up to 6 qubits, ancillae above; 10 qubits total.
  for (unsigned k = 3; k <= 5; ++k) {
    auto map = small_map(10);
    std::vector<std::uint32_t> ctrls;
    for (unsigned q = 0; q < k; ++q) ctrls.push_back(q);
    Gate g = Gate::mcx(ctrls, k);
    auto expanded = expand_multi_controlled(g, k + 1, 10 - k - 1);
    for (std::uint64_t v = 0; v < (1u << (k + 1)); ++v) {
      BitVec key;
      write_field(key, 0, k + 1, v);
      BitVec direct = key;
      SparseState::permute_basis(g, direct);
      BitVec via = key;
      for (const Gate& eg : expanded) SparseState::permute_basis(eg, via);
      CHECK(via == direct);
    }
  }
}

TEST_CASE("bit fields read and write MSB-first") {
  BitVec b;
  write_field(b, 0, 4, 8);
  CHECK(b.test(0));
  CHECK_FALSE(b.test(1));
  CHECK_FALSE(b.test(2));
  CHECK_FALSE(b.test(3));
  CHECK(read_field(b, 0, 4) == 8);
  CHECK_THROWS_AS(write_field(b, 0, 2, 5), std::invalid_argument);
}
