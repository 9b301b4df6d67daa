#pragma once

// Classical reference layer: symbol encoding, sentinel padding, cyclic
// rotation, and exact evaluation of the window predicates used as ground
// truth by the quantum circuits and the acceptance tests.

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlcs {

/// One text symbol, stored as a small integer code. Codes sigma and
/// sigma+1 are reserved for the two padding sentinels and never appear
/// in raw user input.
struct Symbol {
  std::uint32_t code = 0;

  friend bool operator==(Symbol a, Symbol b) { return a.code == b.code; }
  friend bool operator!=(Symbol a, Symbol b) { return a.code != b.code; }
};

/// Character alphabet plus the two sentinel codes. Symbol width is
/// c = ceil(log2(sigma + 2)) bits so that sentinels are always encodable.
class Alphabet {
 public:
  Alphabet() : Alphabet("01") {}

  explicit Alphabet(std::string chars) : chars_(std::move(chars)) {
    if (chars_.empty()) throw std::invalid_argument("alphabet must be non-empty");
    for (std::size_t a = 0; a < chars_.size(); ++a)
      for (std::size_t b = a + 1; b < chars_.size(); ++b)
        if (chars_[a] == chars_[b])
          throw std::invalid_argument("alphabet characters must be distinct");
    if (chars_.find('$') != std::string::npos || chars_.find('%') != std::string::npos)
      throw std::invalid_argument("'$' and '%' are reserved sentinel characters");
  }

  std::size_t sigma() const { return chars_.size(); }

  /// Bits per symbol.
  unsigned symbol_bits() const {
    unsigned c = 0;
    std::size_t v = sigma() + 2 - 1;
    while (v > 0) {
      ++c;
      v >>= 1;
    }
    return c;
  }

  Symbol x_sentinel() const { return Symbol{static_cast<std::uint32_t>(sigma())}; }
  Symbol y_sentinel() const { return Symbol{static_cast<std::uint32_t>(sigma() + 1)}; }

  bool is_sentinel(Symbol s) const { return s.code >= sigma(); }

  Symbol encode_char(char ch) const {
    auto pos = chars_.find(ch);
    if (pos == std::string::npos)
      throw std::invalid_argument(std::string("character '") + ch + "' not in alphabet");
    return Symbol{static_cast<std::uint32_t>(pos)};
  }

  std::vector<Symbol> encode(const std::string& s) const {
    std::vector<Symbol> out;
    out.reserve(s.size());
    for (char ch : s) out.push_back(encode_char(ch));
    return out;
  }

  char decode_char(Symbol s) const {
    if (s.code < sigma()) return chars_[s.code];
    if (s == x_sentinel()) return '$';
    if (s == y_sentinel()) return '%';
    throw std::invalid_argument("symbol code out of range");
  }

  const std::string& chars() const { return chars_; }

 private:
  std::string chars_;
};

/// Sentinel-padded text whose length is the least power of two strictly
/// greater than the raw length, so at least one trailing sentinel exists.
struct PaddedText {
  std::vector<Symbol> symbols;
  std::size_t raw_len = 0;
  std::size_t n = 0;   // padded length, n == 2^p
  unsigned p = 0;
  Symbol sentinel;
  unsigned symbol_bits = 0;  // c, bits per symbol

  Symbol at(std::size_t t) const { return symbols[t % n]; }

  std::string to_string(const Alphabet& alpha) const {
    std::string s;
    s.reserve(n);
    for (Symbol sym : symbols) s.push_back(alpha.decode_char(sym));
    return s;
  }
};

/// Position witness for a verified match: window start i, rotation j and
/// window length d.
struct MatchWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t d = 0;
};

inline PaddedText pad_input(const std::vector<Symbol>& raw, Symbol sentinel,
                            unsigned symbol_bits) {
  for (Symbol s : raw)
    if (s.code >= (1u << symbol_bits))
      throw std::invalid_argument("symbol code does not fit the declared width");
  for (Symbol s : raw)
    if (s == sentinel) throw std::invalid_argument("raw input contains the sentinel code");

  PaddedText t;
  t.raw_len = raw.size();
  t.p = 0;
  t.n = 1;
  while (t.n < t.raw_len + 1) {
    t.n <<= 1;
    ++t.p;
  }
  t.symbols = raw;
  t.symbols.resize(t.n, sentinel);
  t.sentinel = sentinel;
  t.symbol_bits = symbol_bits;
  return t;
}

inline PaddedText pad_input(const std::string& raw, const Alphabet& alpha, Symbol sentinel) {
  return pad_input(alpha.encode(raw), sentinel, alpha.symbol_bits());
}

/// Cyclic rightward rotation by j symbol positions:
/// rotate(x, j)[t] == x[(t - j) mod n].
inline PaddedText rotate(const PaddedText& x, std::size_t j) {
  if (j >= x.n) throw std::out_of_range("rotation amount must be < n");
  PaddedText out = x;
  for (std::size_t t = 0; t < x.n; ++t) out.symbols[t] = x.symbols[(t + x.n - j) % x.n];
  return out;
}

namespace detail {
inline void check_pair(const PaddedText& x, const PaddedText& y) {
  if (x.n != y.n) throw std::invalid_argument("texts must have equal padded length");
}
}  // namespace detail

/// phi(x, y, i, j, d): 1 iff the rotated string and y agree on the
/// circular window [i, i+d). Windows are circular in both arguments.
inline bool phi(const PaddedText& x, const PaddedText& y, std::size_t i, std::size_t j,
                std::size_t d) {
  detail::check_pair(x, y);
  if (i >= x.n || j >= x.n) throw std::out_of_range("i and j must be < n");
  if (d > x.n) throw std::invalid_argument("d must be <= n");
  for (std::size_t u = 0; u < d; ++u) {
    // rotate(x, j)[t] == x[(t - j) mod n]
    Symbol xs = x.symbols[(i + u + x.n - j) % x.n];
    Symbol ys = y.symbols[(i + u) % y.n];
    if (xs != ys) return false;
  }
  return true;
}

/// psi(x, y, j, d): 1 iff some window position i makes phi true.
inline bool psi(const PaddedText& x, const PaddedText& y, std::size_t j, std::size_t d) {
  detail::check_pair(x, y);
  if (j >= x.n) throw std::out_of_range("j must be < n");
  if (d > x.n) throw std::invalid_argument("d must be <= n");
  for (std::size_t i = 0; i < x.n; ++i)
    if (phi(x, y, i, j, d)) return true;
  return false;
}

/// rho(x, i, d): 1 iff the circular window x[i .. i+d-1] is a palindrome.
inline bool rho(const PaddedText& x, std::size_t i, std::size_t d) {
  if (i >= x.n) throw std::out_of_range("i must be < n");
  if (d > x.n) throw std::invalid_argument("d must be <= n");
  for (std::size_t u = 0; u < d / 2; ++u)
    if (x.symbols[(i + u) % x.n] != x.symbols[(i + d - 1 - u) % x.n]) return false;
  return true;
}

struct BruteLcsResult {
  std::size_t length = 0;
  MatchWitness witness;
};

/// Exhaustive ground-truth LCS over the padded circular predicates.
/// Sentinel padding guarantees this equals the classical LCS of the raw
/// strings: '$' never matches '%' or any alphabet symbol.
inline BruteLcsResult brute_lcs(const PaddedText& x, const PaddedText& y) {
  detail::check_pair(x, y);
  std::size_t dmax = std::min(x.raw_len, y.raw_len);
  for (std::size_t d = dmax; d > 0; --d)
    for (std::size_t j = 0; j < x.n; ++j)
      for (std::size_t i = 0; i < x.n; ++i)
        if (phi(x, y, i, j, d)) return {d, MatchWitness{i, j, d}};
  return {0, MatchWitness{0, 0, 0}};
}

struct BruteLpsResult {
  std::size_t length = 0;
  std::size_t start = 0;
};

/// Exhaustive ground-truth LPS over windows lying inside the raw text.
inline BruteLpsResult brute_lps(const PaddedText& x) {
  for (std::size_t d = x.raw_len; d > 0; --d)
    for (std::size_t i = 0; i + d <= x.raw_len; ++i)
      if (rho(x, i, d)) return {d, i};
  return {0, 0};
}

}  // namespace qlcs
