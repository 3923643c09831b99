#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "indelphy/rng.hpp"
#include "indelphy/signatures.hpp"

using namespace indelphy;

TEST_CASE("block_scheme arithmetic") {
  BlockScheme s = block_scheme(10000, 0.25);
  CHECK(s.l == 1000);  // floor(10000^0.75)
  CHECK(s.L == 10);

  s = block_scheme(16, 0.25);
  CHECK(s.l == 8);
  CHECK(s.L == 2);

  s = block_scheme(4, 0.25);
  CHECK(s.l == 2);
  CHECK(s.L == 2);

  CHECK_THROWS(block_scheme(3, 0.25));
  CHECK_THROWS(block_scheme(5, 0.25));  // l = 3, L = 1 -> under two blocks
  CHECK_THROWS(block_scheme(10000, 0.0));
  CHECK_THROWS(block_scheme(10000, 0.5));
}

TEST_CASE("block_scheme count is even") {
  RngStream rng(3, 0);
  for (int rep = 0; rep < 100; ++rep) {
    uint64_t k = 256 + rng.below(100000);
    BlockScheme s = block_scheme(k, 0.1 + 0.2 * rng.uniform());
    CHECK(s.L % 2 == 0);
    CHECK(s.L >= 2);
    CHECK(s.L * s.l <= k);
  }
}

TEST_CASE("signature counts zeros per block") {
  BlockScheme s;
  s.k = 16;
  s.zeta = 0.25;
  s.l = 4;
  s.L = 4;
  CHECK(signature(Bitstring("0000111101100001"), s, 1) == doctest::Approx(1.0));   // "0000"
  CHECK(signature(Bitstring("0000111101100001"), s, 2) == doctest::Approx(-1.0));  // "1111"
  CHECK(signature(Bitstring("0000111101100001"), s, 3) == doctest::Approx(0.0));   // "0110"
  CHECK(signature(Bitstring("0001"), s, 1) == doctest::Approx(0.5));               // "0001"
}

TEST_CASE("signature reports the shortfall when the string is short") {
  BlockScheme s = block_scheme(16, 0.25);  // l = 8, L = 2
  Bitstring bits("0101");
  try {
    signature(bits, s, 2);
    FAIL("expected InsufficientLength");
  } catch (const InsufficientLength& e) {
    CHECK(e.needed == 16);
    CHECK(e.have == 4);
  }
}

TEST_CASE("pseudo-blocks cover floor(len/L) positions") {
  // Length 12, L = 3: l' = 4; block 2 covers positions 5..8 (1-based).
  Bitstring bits("111100001111");
  PseudoSignature ps = leaf_pseudo_signature(bits, 3, 2);
  CHECK(ps.block_len == 4);
  CHECK(ps.value == doctest::Approx(1.0));  // "0000"

  Bitstring zeros(std::string(12, '0'));
  for (uint64_t i = 1; i <= 3; ++i) {
    CHECK(leaf_pseudo_signature(zeros, 3, i).value == doctest::Approx(std::sqrt(4.0) / 2.0));
  }

  CHECK_THROWS_AS(leaf_pseudo_signature(Bitstring("01"), 3, 1), InsufficientLength);
}

TEST_CASE("pseudo-blocks coincide with true blocks at the reference length") {
  RngStream rng(7, 1);
  BlockScheme s = block_scheme(4096, 0.25);
  Bitstring bits = Bitstring::random(s.L * s.l, rng);
  for (uint64_t i = 1; i <= s.L; ++i) {
    PseudoSignature ps = leaf_pseudo_signature(bits, s.L, i);
    CHECK(ps.block_len == s.l);
    CHECK(ps.value == doctest::Approx(signature(bits, s, i)));
  }
}

TEST_CASE("scaled block lengths") {
  CHECK(scaled_block_length(100, 1.21) == 121);
  CHECK(scaled_block_length(100, 1.0) == 100);
  RngStream rng(8, 0);
  Bitstring bits = Bitstring::random(1000, rng);
  BlockScheme s;
  s.l = 50;
  s.L = 4;
  for (uint64_t i = 1; i <= 4; ++i) {
    CHECK(internal_block_signature(bits, 50, i) == doctest::Approx(signature(bits, s, i)));
  }
}

TEST_CASE("uniform strings: zero mean, quarter variance") {
  const uint64_t l = 256, L = 40;
  const int trials = 400;
  RngStream rng(99, 0);
  double sum = 0.0, sum2 = 0.0;
  int count = 0;
  BlockScheme s;
  s.l = l;
  s.L = L;
  for (int t = 0; t < trials; ++t) {
    Bitstring bits = Bitstring::random(l * L, rng);
    for (uint64_t i = 1; i <= L; ++i) {
      double v = signature(bits, s, i);
      sum += v;
      sum2 += v * v;
      ++count;
    }
  }
  double mean = sum / count;
  double second = sum2 / count;
  double se_mean = 0.5 / std::sqrt(static_cast<double>(count));
  CHECK(std::abs(mean) < 5.0 * se_mean);
  // Var(s^2) for +-1/2-scaled binomial sums is close to 2*(1/4)^2 / l ... use
  // a generous five-sigma window around the exact 1/4.
  CHECK(std::abs(second - 0.25) < 5.0 * 0.36 / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("hard bound |s| <= sqrt(l)/2") {
  RngStream rng(5, 5);
  BlockScheme s;
  s.l = 64;
  s.L = 2;
  double cap = std::sqrt(64.0) / 2.0;
  for (int rep = 0; rep < 50; ++rep) {
    Bitstring bits = Bitstring::random(128, rng);
    for (uint64_t i = 1; i <= 2; ++i) CHECK(std::abs(signature(bits, s, i)) <= cap);
  }
  CHECK(std::abs(signature(Bitstring(std::string(128, '0')), s, 1)) == doctest::Approx(cap));
  CHECK(std::abs(signature(Bitstring(std::string(128, '1')), s, 1)) == doctest::Approx(cap));
}

TEST_CASE("signature is invariant under within-block permutation") {
  RngStream rng(6, 0);
  std::string block(64, '0');
  for (auto& c : block) c = rng.bit() ? '1' : '0';
  std::string shuffled = block;
  // Deterministic shuffle.
  for (size_t i = shuffled.size() - 1; i > 0; --i) {
    std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
  }
  BlockScheme s;
  s.l = 64;
  s.L = 2;
  std::string tail(64, '1');
  CHECK(signature(Bitstring(block + tail), s, 1) ==
        doctest::Approx(signature(Bitstring(shuffled + tail), s, 1)));
  CHECK(signature(Bitstring(block + tail), s, 2) ==
        doctest::Approx(signature(Bitstring(shuffled + tail), s, 2)));
}

TEST_CASE("signature vectors and the dump format") {
  RngStream rng(4, 2);
  BlockScheme s = block_scheme(256, 0.25);
  Bitstring bits = Bitstring::random(256, rng);
  SignatureVector sv = signature_vector(bits, s, 3);
  CHECK(sv.block_count() == s.L);
  CHECK(sv.block_len_used == s.l);
  CHECK(sv.mode == SignatureMode::kTrueBlock);
  std::string line = signature_dump_line(sv);
  CHECK(line.substr(0, 2) == "3\t");
  CHECK(line.find("true-block\t") != std::string::npos);
  CHECK(std::count(line.begin(), line.end(), ',') == static_cast<long>(s.L - 1));
}
