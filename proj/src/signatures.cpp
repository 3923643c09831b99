#include "indelphy/signatures.hpp"

#include <cmath>
#include <cstdio>

namespace indelphy {

BlockScheme block_scheme(uint64_t k, double zeta) {
  if (k < 4) throw std::invalid_argument("block_scheme: k must be >= 4");
  if (zeta <= 0.0 || zeta >= 0.5) throw std::invalid_argument("block_scheme: zeta must be in (0, 1/2)");
  BlockScheme s;
  s.k = k;
  s.zeta = zeta;
  // The nudge absorbs floating-point error when k^{1/2+zeta} is an integer.
  s.l = static_cast<uint64_t>(std::floor(std::pow(static_cast<double>(k), 0.5 + zeta) + 1e-6));
  if (s.l < 1) s.l = 1;
  s.L = (k / s.l) & ~uint64_t{1};  // round down to even
  if (s.L < 2) throw std::invalid_argument("block_scheme: k too small to yield two blocks");
  return s;
}

namespace {

double block_statistic(const Bitstring& bits, uint64_t block_len, uint64_t block_index) {
  uint64_t lo = (block_index - 1) * block_len;
  uint64_t hi = block_index * block_len;
  double zeros = static_cast<double>(bits.count_zeros(lo, hi));
  return (zeros - static_cast<double>(block_len) / 2.0) / std::sqrt(static_cast<double>(block_len));
}

}  // namespace

double signature(const Bitstring& bits, const BlockScheme& scheme, uint64_t block_index) {
  if (block_index < 1) throw std::invalid_argument("block index is 1-based");
  uint64_t needed = block_index * scheme.l;
  if (bits.size() < needed) throw InsufficientLength(needed, bits.size());
  return block_statistic(bits, scheme.l, block_index);
}

double internal_block_signature(const Bitstring& bits, uint64_t block_len, uint64_t block_index) {
  if (block_index < 1) throw std::invalid_argument("block index is 1-based");
  if (block_len < 1) throw std::invalid_argument("block length must be >= 1");
  uint64_t needed = block_index * block_len;
  if (bits.size() < needed) throw InsufficientLength(needed, bits.size());
  return block_statistic(bits, block_len, block_index);
}

uint64_t scaled_block_length(uint64_t l_ref, double eta) {
  return static_cast<uint64_t>(std::floor(static_cast<double>(l_ref) * eta + 1e-9));
}

PseudoSignature leaf_pseudo_signature(const Bitstring& bits, uint64_t block_count,
                                      uint64_t block_index) {
  if (block_index < 1 || block_index > block_count) {
    throw std::invalid_argument("pseudo-block index out of range");
  }
  if (bits.size() < block_count) throw InsufficientLength(block_count, bits.size());
  uint64_t l_prime = bits.size() / block_count;
  return {block_statistic(bits, l_prime, block_index), l_prime};
}

SignatureVector signature_vector(const Bitstring& bits, const BlockScheme& scheme, int node) {
  SignatureVector out;
  out.node = node;
  out.mode = SignatureMode::kTrueBlock;
  out.block_len_used = scheme.l;
  out.values.reserve(scheme.L);
  for (uint64_t i = 1; i <= scheme.L; ++i) out.values.push_back(signature(bits, scheme, i));
  return out;
}

SignatureVector pseudo_signature_vector(const Bitstring& bits, uint64_t block_count, int node) {
  SignatureVector out;
  out.node = node;
  out.mode = SignatureMode::kPseudoBlock;
  out.values.reserve(block_count);
  for (uint64_t i = 1; i <= block_count; ++i) {
    auto ps = leaf_pseudo_signature(bits, block_count, i);
    out.block_len_used = ps.block_len;
    out.values.push_back(ps.value);
  }
  return out;
}

SignatureVector scaled_signature_vector(const Bitstring& bits, uint64_t block_len,
                                        uint64_t block_count, int node) {
  SignatureVector out;
  out.node = node;
  out.mode = SignatureMode::kScaledBlock;
  out.block_len_used = block_len;
  out.values.reserve(block_count);
  for (uint64_t i = 1; i <= block_count; ++i) {
    out.values.push_back(internal_block_signature(bits, block_len, i));
  }
  return out;
}

std::string signature_dump_line(const SignatureVector& sig) {
  const char* mode = sig.mode == SignatureMode::kTrueBlock    ? "true-block"
                     : sig.mode == SignatureMode::kScaledBlock ? "scaled-block"
                                                                : "pseudo-block";
  std::string line = std::to_string(sig.node);
  line += '\t';
  line += mode;
  line += '\t';
  char buf[32];
  for (size_t i = 0; i < sig.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", sig.values[i]);
    if (i) line += ',';
    line += buf;
  }
  return line;
}

}  // namespace indelphy
