#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "indelphy/bitstring.hpp"

namespace indelphy {

// Disjoint-block layout over a reference sequence length k:
// block length l = floor(k^{1/2+zeta}), block count L = floor(k/l) rounded
// down to even so the odd-indexed blocks 1, 3, ..., L-1 number exactly L/2.
struct BlockScheme {
  uint64_t k = 0;
  double zeta = 0.0;
  uint64_t l = 0;
  uint64_t L = 0;
};

BlockScheme block_scheme(uint64_t k, double zeta);

enum class SignatureMode { kTrueBlock, kScaledBlock, kPseudoBlock };

struct SignatureVector {
  int node = -1;
  std::vector<double> values;     // values[i-1] holds block i (1-based blocks)
  uint64_t block_len_used = 0;    // l, l_a, or l_a'
  SignatureMode mode = SignatureMode::kTrueBlock;

  uint64_t block_count() const { return values.size(); }
};

struct InsufficientLength : std::runtime_error {
  InsufficientLength(uint64_t needed_, uint64_t have_)
      : std::runtime_error("insufficient length: need " + std::to_string(needed_) + " bits, have " +
                           std::to_string(have_)),
        needed(needed_),
        have(have_) {}
  uint64_t needed, have;
};

// Normalized excess of zeros in block i (1-based):
//   (zeros in bits (i-1)l+1 .. il  -  l/2) / sqrt(l).
// Throws InsufficientLength when the string is too short.
double signature(const Bitstring& bits, const BlockScheme& scheme, uint64_t block_index);

// Same statistic over an explicit per-node block length (validator use; the
// reconstruction path never sees internal bitstrings).
double internal_block_signature(const Bitstring& bits, uint64_t block_len, uint64_t block_index);

// Per-node block length floor(l_ref * eta) used by the scaled-block checks.
uint64_t scaled_block_length(uint64_t l_ref, double eta);

// Pseudo-block statistic for a leaf of unknown true block length: the leaf
// string is cut into L blocks of length l' = floor(len/L).
struct PseudoSignature {
  double value = 0.0;
  uint64_t block_len = 0;  // l'
};
PseudoSignature leaf_pseudo_signature(const Bitstring& bits, uint64_t block_count,
                                      uint64_t block_index);

// Whole-vector helpers. The true-block form throws InsufficientLength when
// the string is shorter than L*l (callers flag the trial degenerate).
SignatureVector signature_vector(const Bitstring& bits, const BlockScheme& scheme, int node = -1);
SignatureVector pseudo_signature_vector(const Bitstring& bits, uint64_t block_count,
                                        int node = -1);
SignatureVector scaled_signature_vector(const Bitstring& bits, uint64_t block_len,
                                        uint64_t block_count, int node = -1);

// Dump format: "node_id<TAB>mode<TAB>v1,v2,...,vL".
std::string signature_dump_line(const SignatureVector& sig);

}  // namespace indelphy
