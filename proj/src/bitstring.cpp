#include "indelphy/bitstring.hpp"

#include <bit>
#include <stdexcept>

namespace indelphy {

Bitstring::Bitstring(std::string_view ascii01) {
  reserve(ascii01.size());
  for (char c : ascii01) {
    if (c == '0') {
      append(false);
    } else if (c == '1') {
      append(true);
    } else {
      throw std::invalid_argument("bitstring literal must contain only 0/1, got '" +
                                  std::string(1, c) + "'");
    }
  }
}

Bitstring Bitstring::random(size_t n, RngStream& rng) {
  Bitstring out;
  out.size_ = n;
  out.words_.resize((n + 63) >> 6);
  for (auto& w : out.words_) w = rng.next_u64();
  if (n & 63) out.words_.back() &= (uint64_t{1} << (n & 63)) - 1;
  return out;
}

void Bitstring::append(bool bit) {
  if ((size_ & 63) == 0) words_.push_back(0);
  words_[size_ >> 6] |= static_cast<uint64_t>(bit) << (size_ & 63);
  ++size_;
}

void Bitstring::append_bits(uint64_t bits, unsigned n) {
  if (n == 0) return;
  unsigned off = size_ & 63;
  if (off == 0) {
    words_.push_back(bits);
  } else {
    words_[size_ >> 6] |= bits << off;
    if (off + n > 64) words_.push_back(bits >> (64 - off));
  }
  size_ += n;
}

uint64_t Bitstring::extract(size_t pos, unsigned n) const {
  unsigned off = pos & 63;
  uint64_t w = words_[pos >> 6] >> off;
  if (off != 0 && off + n > 64) w |= words_[(pos >> 6) + 1] << (64 - off);
  if (n < 64) w &= (uint64_t{1} << n) - 1;
  return w;
}

void Bitstring::append_run(const Bitstring& src, size_t pos, size_t len) {
  while (len > 0) {
    unsigned chunk = static_cast<unsigned>(len < 64 ? len : 64);
    append_bits(src.extract(pos, chunk), chunk);
    pos += chunk;
    len -= chunk;
  }
}

size_t Bitstring::count_ones(size_t lo, size_t hi) const {
  if (lo >= hi) return 0;
  size_t wlo = lo >> 6, whi = (hi - 1) >> 6;
  uint64_t mask_lo = ~uint64_t{0} << (lo & 63);
  uint64_t mask_hi = (hi & 63) ? ((uint64_t{1} << (hi & 63)) - 1) : ~uint64_t{0};
  if (wlo == whi) return std::popcount(words_[wlo] & mask_lo & mask_hi);
  size_t ones = std::popcount(words_[wlo] & mask_lo);
  for (size_t w = wlo + 1; w < whi; ++w) ones += std::popcount(words_[w]);
  ones += std::popcount(words_[whi] & mask_hi);
  return ones;
}

size_t Bitstring::count_zeros(size_t lo, size_t hi) const {
  return (hi - lo) - count_ones(lo, hi);
}

std::string Bitstring::to_string() const {
  std::string s;
  s.reserve(size_);
  for (size_t i = 0; i < size_; ++i) s.push_back(get(i) ? '1' : '0');
  return s;
}

}  // namespace indelphy
