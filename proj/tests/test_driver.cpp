#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "qlcs/driver.hpp"
#include "qlcs/report.hpp"

using namespace qlcs;

namespace {

GroverConfig cfg_with_seed(std::uint64_t seed) {
  GroverConfig cfg;
  cfg.schedule = GroverSchedule::RandomizedDoubling;
  cfg.restarts = 5;
  cfg.seed = seed;
  return cfg;
}

std::string random_binary(std::mt19937_64& rng, std::size_t len) {
  std::string s;
  for (std::size_t k = 0; k < len; ++k) s.push_back((rng() & 1) ? '1' : '0');
  return s;
}

}  // namespace

TEST_CASE("quantum_test_lcs verifies exactly the solvable lengths") {
  Alphabet bin("01");
  SECTION("identical strings verify at d = 1") {
    auto x = pad_input("01", bin, bin.x_sentinel());
    auto y = pad_input("01", bin, bin.y_sentinel());
    auto out = quantum_test_lcs(x, y, 1, cfg_with_seed(3));
    CHECK(out.verified);
    REQUIRE(out.witness.has_value());
    CHECK(phi(x, y, out.witness->i, out.witness->j, 1));
  }
  SECTION("disjoint alphabets never verify") {
    auto x = pad_input("000", bin, bin.x_sentinel());
    auto y = pad_input("111", bin, bin.y_sentinel());
    auto out = quantum_test_lcs(x, y, 1, cfg_with_seed(5));
    CHECK_FALSE(out.verified);
    CHECK(out.restarts_used == 5);
    CHECK(out.search_prob == 0.0);
  }
  SECTION("d = 0 always verifies") {
    auto x = pad_input("10", bin, bin.x_sentinel());
    auto y = pad_input("01", bin, bin.y_sentinel());
    CHECK(quantum_test_lcs(x, y, 0, cfg_with_seed(7)).verified);
  }
}

TEST_CASE("quantum_test_lps respects the raw-window restriction") {
  Alphabet ab("ab");
  SECTION("d = 1 verifies for any nonempty string") {
    auto x = pad_input("ab", ab, ab.x_sentinel());
    CHECK(quantum_test_lps(x, 1, cfg_with_seed(11)).verified);
  }
  SECTION("pad(ab) at d = 2 is rejected despite the padding palindrome") {
    auto x = pad_input("ab", ab, ab.x_sentinel());
    REQUIRE(rho(x, 2, 2));  // "$$" is a circular palindrome in the padding
    auto out = quantum_test_lps(x, 2, cfg_with_seed(13));
    CHECK_FALSE(out.verified);
  }
  SECTION("pad(aba) at d = 3 verifies with i = 0") {
    auto x = pad_input("aba", ab, ab.x_sentinel());
    auto out = quantum_test_lps(x, 3, cfg_with_seed(17));
    CHECK(out.verified);
    REQUIRE(out.witness.has_value());
    CHECK(out.witness->i == 0);
  }
}

TEST_CASE("lcs driver reproduces the spec examples") {
  Alphabet bin("01");
  Alphabet ab("ab");
  CHECK(lcs("0110", "0110", bin, cfg_with_seed(1)).answer == 4);
  CHECK(lcs("abab", "bbaa", ab, cfg_with_seed(2)).answer == 2);
  CHECK(lcs("000", "111", bin, cfg_with_seed(3)).answer == 0);
  CHECK_THROWS_AS(lcs("0", "01", bin, cfg_with_seed(4)), std::invalid_argument);
}

TEST_CASE("lps driver reproduces the spec examples") {
  Alphabet ab("ab");
  Alphabet abc("abc");
  CHECK(lps("aaaa", ab, cfg_with_seed(5)).answer == 4);
  CHECK(lps("ab", ab, cfg_with_seed(6)).answer == 1);
  auto rep = lps("abaacbcbbca", abc, cfg_with_seed(7), SimMode::Abstract);
  CHECK(rep.answer == brute_lps(pad_input("abaacbcbbca", abc, abc.x_sentinel())).length);
}

TEST_CASE("empty and unit inputs short-circuit") {
  Alphabet bin("01");
  auto rep = lcs("", "", bin, cfg_with_seed(8));
  CHECK(rep.answer == 0);
  CHECK(rep.iterations.empty());
  CHECK_FALSE(rep.witness.has_value());

  auto one = lcs("1", "1", bin, cfg_with_seed(9));
  CHECK(one.answer == 1);
  auto lone = lps("a", Alphabet("ab"), cfg_with_seed(10));
  CHECK(lone.answer == 1);
}

TEST_CASE("gate and abstract modes agree with brute force on random instances") {
  Alphabet bin("01");
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t len = 1 + rng() % 7;
    const std::string xs = random_binary(rng, len);
    const std::string ys = random_binary(rng, len);
    const auto cfg = cfg_with_seed(rng());
    const auto want =
        brute_lcs(pad_input(xs, bin, bin.x_sentinel()), pad_input(ys, bin, bin.y_sentinel()))
            .length;
    auto gate = lcs(xs, ys, bin, cfg, SimMode::Gate);
    auto abstract = lcs(xs, ys, bin, cfg, SimMode::Abstract);
    CHECK(gate.answer == want);
    CHECK(abstract.answer == want);
    CHECK(gate.answer == abstract.answer);
  }
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t len = 1 + rng() % 7;
    const std::string xs = random_binary(rng, len);
    const auto cfg = cfg_with_seed(rng());
    const auto want = brute_lps(pad_input(xs, bin, bin.x_sentinel())).length;
    auto gate = lps(xs, bin, cfg, SimMode::Gate);
    auto abstract = lps(xs, bin, cfg, SimMode::Abstract);
    CHECK(gate.answer == want);
    CHECK(abstract.answer == want);
  }
}

TEST_CASE("one-sided soundness: the driver never overshoots brute force") {
  Alphabet bin("01");
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t len = 1 + rng() % 7;
    const std::string xs = random_binary(rng, len);
    const std::string ys = random_binary(rng, len);
    const auto want =
        brute_lcs(pad_input(xs, bin, bin.x_sentinel()), pad_input(ys, bin, bin.y_sentinel()))
            .length;
    auto rep = lcs(xs, ys, bin, cfg_with_seed(rng()), SimMode::Gate);
    CHECK(rep.answer <= want);
    if (rep.witness) {
      // The reported witness is a genuine common substring.
      CHECK(xs.substr(rep.witness->first, rep.answer) ==
            ys.substr(rep.witness->second, rep.answer));
    }
  }
}

TEST_CASE("traces terminate within the iteration bound and shrink strictly") {
  Alphabet bin("01");
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t len = 1 + rng() % 15;
    auto rep = lcs(random_binary(rng, len), random_binary(rng, len), bin,
                   cfg_with_seed(rng()), SimMode::Abstract);
    unsigned p = 0;
    while ((std::size_t{1} << p) < rep.n) ++p;
    CHECK(rep.iterations.size() <= p + 1);
    std::size_t prev_span = rep.raw_len + 1;
    for (const auto& it : rep.iterations) {
      const std::size_t span = it.r - it.l + 1;
      CHECK(span < prev_span);
      prev_span = span;
      CHECK(it.d >= it.l + 1);
      CHECK(it.d <= it.r);
    }
  }
}

TEST_CASE("identical seeds yield identical reports") {
  Alphabet bin("01");
  for (SimMode mode : {SimMode::Gate, SimMode::Abstract}) {
    auto a = lcs("0110100", "1001011", bin, cfg_with_seed(321), mode);
    auto b = lcs("0110100", "1001011", bin, cfg_with_seed(321), mode);
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
    auto c = lcs("0110100", "1001011", bin, cfg_with_seed(322), mode);
    CHECK(report_to_json(a) != report_to_json(c));  // different seed, different trace
  }
}

TEST_CASE("classical mode bypasses simulation entirely") {
  Alphabet bin("01");
  auto rep = lcs("000", "111", bin, cfg_with_seed(1), SimMode::Classical);
  CHECK(rep.answer == 0);
  CHECK(rep.resources.qubits == 0);
  CHECK(rep.resources.depth == 0);
  CHECK(rep.iterations.empty());

  auto found = lcs("0110", "0110", bin, cfg_with_seed(1), SimMode::Classical);
  CHECK(found.answer == 4);
  REQUIRE(found.witness.has_value());
}

TEST_CASE("capacity guards reject oversized inputs per mode") {
  Alphabet bin("01");
  const std::string big(16, '0');  // pads to 32
  CHECK_THROWS_AS(lcs(big, big, bin, cfg_with_seed(1), SimMode::Gate), CapacityError);
  CHECK_NOTHROW(lcs(big, big, bin, cfg_with_seed(1), SimMode::Classical));
}

TEST_CASE("fixed schedule reproduces the literal circuit-model run") {
  Alphabet bin("01");
  GroverConfig cfg;
  cfg.schedule = GroverSchedule::Fixed;
  cfg.restarts = 5;
  cfg.seed = 42;
  auto rep = lcs("0101", "0101", bin, cfg, SimMode::Gate);
  CHECK(rep.answer == 4);
  CHECK(rep.schedule == GroverSchedule::Fixed);
}

TEST_CASE("resource tally accumulates and matches between modes") {
  Alphabet bin("01");
  const auto cfg = cfg_with_seed(777);
  auto gate = lcs("0110", "1010", bin, cfg, SimMode::Gate);
  auto abstract = lcs("0110", "1010", bin, cfg, SimMode::Abstract);
  CHECK(gate.resources.depth > 0);
  CHECK(gate.resources.qubits == abstract.resources.qubits);
  CHECK(gate.resources.depth == abstract.resources.depth);
  CHECK(gate.resources.oracle_invocations == abstract.resources.oracle_invocations);
}
