#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace qlcs {

/// Fixed-capacity bit vector used as a computational-basis index. The
/// capacity bounds the total qubit count of simulated circuits; resource
/// estimation never instantiates states and is not limited by it.
struct BitVec {
  static constexpr std::size_t kWords = 8;
  static constexpr std::size_t kMaxBits = kWords * 64;

  std::array<std::uint64_t, kWords> w{};

  bool test(std::uint32_t bit) const { return (w[bit >> 6] >> (bit & 63)) & 1u; }
  void set(std::uint32_t bit) { w[bit >> 6] |= std::uint64_t{1} << (bit & 63); }
  void clear(std::uint32_t bit) { w[bit >> 6] &= ~(std::uint64_t{1} << (bit & 63)); }
  void flip(std::uint32_t bit) { w[bit >> 6] ^= std::uint64_t{1} << (bit & 63); }
  void assign(std::uint32_t bit, bool v) {
    if (v)
      set(bit);
    else
      clear(bit);
  }

  friend bool operator==(const BitVec& a, const BitVec& b) { return a.w == b.w; }
  friend bool operator!=(const BitVec& a, const BitVec& b) { return !(a == b); }
  friend bool operator<(const BitVec& a, const BitVec& b) {
    for (std::size_t i = kWords; i-- > 0;)
      if (a.w[i] != b.w[i]) return a.w[i] < b.w[i];
    return false;
  }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t i = 0; i < kWords; ++i) w[i] ^= o.w[i];
    return *this;
  }
  BitVec& operator&=(const BitVec& o) {
    for (std::size_t i = 0; i < kWords; ++i) w[i] &= o.w[i];
    return *this;
  }
  BitVec& operator|=(const BitVec& o) {
    for (std::size_t i = 0; i < kWords; ++i) w[i] |= o.w[i];
    return *this;
  }

  bool contains(const BitVec& mask) const {
    for (std::size_t i = 0; i < kWords; ++i)
      if ((w[i] & mask.w[i]) != mask.w[i]) return false;
    return true;
  }

  bool any() const {
    for (auto v : w)
      if (v) return true;
    return false;
  }
};

struct BitVecHash {
  std::size_t operator()(const BitVec& b) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto v : b.w) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Reads `width` (<= 64) bits starting at `offset`, most significant
/// first, matching the register value convention |8> = |1000>.
inline std::uint64_t read_field(const BitVec& b, std::uint32_t offset, std::uint32_t width) {
  if (width > 64) throw std::invalid_argument("field wider than 64 bits");
  std::uint64_t v = 0;
  for (std::uint32_t k = 0; k < width; ++k) v = (v << 1) | (b.test(offset + k) ? 1u : 0u);
  return v;
}

inline void write_field(BitVec& b, std::uint32_t offset, std::uint32_t width,
                        std::uint64_t value) {
  if (width > 64) throw std::invalid_argument("field wider than 64 bits");
  if (width < 64 && (value >> width) != 0)
    throw std::invalid_argument("value does not fit register width");
  for (std::uint32_t k = 0; k < width; ++k)
    b.assign(offset + k, (value >> (width - 1 - k)) & 1u);
}

}  // namespace qlcs
