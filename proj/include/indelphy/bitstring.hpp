#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "indelphy/rng.hpp"

namespace indelphy {

// Packed 0/1 sequence, LSB-first within each 64-bit word. Bits above size()
// are kept zero so equality is a plain word compare.
class Bitstring {
 public:
  Bitstring() = default;
  explicit Bitstring(std::string_view ascii01);

  static Bitstring random(size_t n, RngStream& rng);

  size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

  void reserve(size_t nbits) { words_.reserve((nbits >> 6) + 2); }

  void append(bool bit);

  // Appends up to 64 bits (the low n bits of `bits`, which must have no
  // stray high bits set).
  void append_bits(uint64_t bits, unsigned n);

  // Appends src[pos, pos+len) to this string.
  void append_run(const Bitstring& src, size_t pos, size_t len);

  // Number of zero bits in [lo, hi).
  size_t count_zeros(size_t lo, size_t hi) const;
  size_t count_ones(size_t lo, size_t hi) const;

  std::string to_string() const;

  bool operator==(const Bitstring& other) const {
    return size_ == other.size_ && words_ == other.words_;
  }
  bool operator!=(const Bitstring& other) const { return !(*this == other); }

 private:
  uint64_t extract(size_t pos, unsigned n) const;

  std::vector<uint64_t> words_;
  size_t size_ = 0;
};

}  // namespace indelphy
