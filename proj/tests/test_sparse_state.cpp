#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qlcs/sparse_state.hpp"

using namespace qlcs;

namespace {

RegisterMapPtr one_reg(std::uint32_t width, const char* name = "q") {
  auto m = std::make_shared<RegisterMap>();
  m->add(name, width);
  return m;
}

}  // namespace

TEST_CASE("init_basis produces a single MSB-first basis state") {
  auto map = one_reg(4);
  auto s = SparseState::basis(map, {{"q", 8}});
  CHECK(s.support_size() == 1);
  BitVec expect;
  expect.set(0);  // |8> on 4 qubits is |1000>
  CHECK(std::abs(s.amplitude(expect) - std::complex<double>{1.0}) < 1e-15);

  auto zero = SparseState::basis(map, {{"q", 0}});
  CHECK(std::abs(zero.amplitude(BitVec{}) - std::complex<double>{1.0}) < 1e-15);

  CHECK_THROWS_AS(SparseState::basis(map, {{"q", 16}}), std::invalid_argument);
}

TEST_CASE("H creates equal superposition and X permutes") {
  auto map = one_reg(1);
  auto s = SparseState::basis(map, {{"q", 0}});
  s.apply_gate(Gate::h(0));
  const double r = 1.0 / std::sqrt(2.0);
  BitVec k0, k1;
  k1.set(0);
  CHECK(std::abs(s.amplitude(k0) - std::complex<double>{r}) < 1e-12);
  CHECK(std::abs(s.amplitude(k1) - std::complex<double>{r}) < 1e-12);

  auto x = SparseState::basis(map, {{"q", 0}});
  x.apply_gate(Gate::x(0));
  CHECK(std::abs(x.amplitude(k1) - std::complex<double>{1.0}) < 1e-15);
}

TEST_CASE("unitarity: every gate preserves the norm") {
  auto map = one_reg(3);
  auto s = SparseState::basis(map, {{"q", 5}});
  for (const Gate& g : {Gate::h(0), Gate::cx(0, 1), Gate::h(2), Gate::ccx(0, 2, 1),
                        Gate::swap(0, 2), Gate::z(1), Gate::h(1), Gate::mcz({0, 1}, 2)}) {
    s.apply_gate(g);
    CHECK(std::abs(s.norm_sq() - 1.0) < 1e-12);
  }
}

TEST_CASE("apply_phase_function flips signs without changing support") {
  auto map = one_reg(2);
  auto s = SparseState::basis(map, {{"q", 0}});
  s.apply_gate(Gate::h(0));
  s.apply_gate(Gate::h(1));

  SECTION("all-false predicate is the identity") {
    auto before = s.amplitudes();
    s.apply_phase_function("q", [](std::uint64_t) { return false; });
    CHECK(s.amplitudes() == before);
  }
  SECTION("all-true predicate is a global phase") {
    s.apply_phase_function("q", [](std::uint64_t) { return true; });
    for (const auto& [k, a] : s.amplitudes()) CHECK(a.real() < 0);
    CHECK(std::abs(s.norm_sq() - 1.0) < 1e-12);
  }
  SECTION("single marked value flips exactly one amplitude") {
    s.apply_phase_function("q", [](std::uint64_t v) { return v == 2; });
    int negatives = 0;
    for (const auto& [k, a] : s.amplitudes())
      if (a.real() < 0) ++negatives;
    CHECK(negatives == 1);
  }
}

TEST_CASE("measurement is seeded, reproducible, and collapses") {
  auto map = one_reg(2);

  SECTION("a basis register measures to its value with certainty") {
    auto s = SparseState::basis(map, {{"q", 3}});
    RngStream rng(99);
    auto m = s.measure_register("q", rng);
    CHECK(m.value == 3);
    CHECK(m.probability == Catch::Approx(1.0));
  }
  SECTION("identical seeds give identical outcomes") {
    for (int rep = 0; rep < 4; ++rep) {
      auto s1 = SparseState::basis(map, {{"q", 0}});
      auto s2 = SparseState::basis(map, {{"q", 0}});
      for (auto q : {0u, 1u}) {
        s1.apply_gate(Gate::h(q));
        s2.apply_gate(Gate::h(q));
      }
      RngStream r1(42 + rep), r2(42 + rep);
      CHECK(s1.measure_register("q", r1).value == s2.measure_register("q", r2).value);
    }
  }
  SECTION("the post-measurement state is normalized and collapsed") {
    auto s = SparseState::basis(map, {{"q", 0}});
    s.apply_gate(Gate::h(0));
    s.apply_gate(Gate::h(1));
    RngStream rng(7);
    auto m = s.measure_register("q", rng);
    CHECK(std::abs(s.norm_sq() - 1.0) < 1e-9);
    CHECK(s.support_size() == 1);
    CHECK(s.register_probability("q", [&](std::uint64_t v) { return v == m.value; }) ==
          Catch::Approx(1.0));
  }
}

TEST_CASE("register_probability sums the Born weights") {
  auto map = one_reg(2);
  auto s = SparseState::basis(map, {{"q", 0}});
  s.apply_gate(Gate::h(0));
  s.apply_gate(Gate::h(1));
  CHECK(s.register_probability("q", [](std::uint64_t) { return true; }) == Catch::Approx(1.0));
  auto p2 = s.register_probability("q", [](std::uint64_t v) { return v == 2; });
  auto not2 = s.register_probability("q", [](std::uint64_t v) { return v != 2; });
  CHECK(p2 == Catch::Approx(0.25));
  CHECK(not2 == Catch::Approx(1.0 - p2));
}

TEST_CASE("reflect_about_uniform equals the dense reflection") {
  auto map = one_reg(2);
  auto s = SparseState::basis(map, {{"q", 0}});
  // amplitude pattern (1, 0, 0, 0): reflection gives (-1/2, 1/2, 1/2, 1/2)
  s.reflect_about_uniform("q");
  for (std::uint64_t v = 0; v < 4; ++v) {
    BitVec k;
    write_field(k, 0, 2, v);
    const double expect = v == 0 ? -0.5 : 0.5;
    CHECK(std::abs(s.amplitude(k).real() - expect) < 1e-12);
  }
}

TEST_CASE("permutation gates never change amplitude magnitudes") {
  auto map = one_reg(3);
  auto s = SparseState::basis(map, {{"q", 1}});
  s.apply_gate(Gate::h(0));
  s.apply_gate(Gate::h(1));
  auto mags_of = [](const SparseState& st) {
    std::vector<double> m;
    for (const auto& [k, a] : st.amplitudes()) m.push_back(std::abs(a));
    std::sort(m.begin(), m.end());
    return m;
  };
  auto before = mags_of(s);
  for (const Gate& g : {Gate::x(2), Gate::cx(0, 2), Gate::ccx(0, 1, 2), Gate::swap(0, 2),
                        Gate::cswap(1, 0, 2), Gate::mcx({0, 1}, 2)}) {
    s.apply_gate(g);
    CHECK(mags_of(s) == before);
  }
}

TEST_CASE("compiled permutation replays a circuit on basis keys") {
  auto map = one_reg(4);
  Circuit c(map);
  c.append(Gate::x(0));
  c.append(Gate::cx(0, 2));
  c.append(Gate::cswap(0, 1, 3));
  c.append(Gate::mcx({0, 2}, 1));
  CompiledPermutation perm(c);
  for (std::uint64_t v = 0; v < 16; ++v) {
    BitVec k;
    write_field(k, 0, 4, v);
    BitVec fast = k;
    perm.apply_to_basis(fast);
    auto s = SparseState::basis_key(map, k);
    s.apply_circuit(c);
    CHECK(std::abs(s.amplitude(fast) - std::complex<double>{1.0}) < 1e-15);
  }

  Circuit with_h(map);
  with_h.append(Gate::h(0));
  CHECK_THROWS_AS(CompiledPermutation(with_h), std::invalid_argument);
}

TEST_CASE("state dump lists basis index and amplitude per line") {
  auto map = one_reg(2);
  auto s = SparseState::basis(map, {{"q", 2}});
  CHECK(s.dump() == "10 1.000000 0.000000\n");
}
