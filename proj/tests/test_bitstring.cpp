#include "doctest.h"

#include <string>

#include "indelphy/bitstring.hpp"
#include "indelphy/rng.hpp"

using namespace indelphy;

namespace {

// Naive reference used as the oracle for the packed implementation.
std::string naive_append_run(const std::string& dst, const std::string& src, size_t pos,
                             size_t len) {
  return dst + src.substr(pos, len);
}

size_t naive_count_zeros(const std::string& s, size_t lo, size_t hi) {
  size_t zeros = 0;
  for (size_t i = lo; i < hi; ++i) zeros += s[i] == '0';
  return zeros;
}

std::string random_ascii(size_t n, RngStream& rng) {
  std::string s(n, '0');
  for (auto& c : s) c = rng.bit() ? '1' : '0';
  return s;
}

}  // namespace

TEST_CASE("ascii round trip") {
  std::string s = "01101000111010100000111";
  Bitstring b(s);
  CHECK(b.size() == s.size());
  CHECK(b.to_string() == s);
  CHECK_THROWS(Bitstring("01x"));
}

TEST_CASE("append and get across word boundaries") {
  Bitstring b;
  std::string ref;
  RngStream rng(7, 0);
  for (int i = 0; i < 300; ++i) {
    bool bit = rng.bit();
    b.append(bit);
    ref.push_back(bit ? '1' : '0');
  }
  CHECK(b.to_string() == ref);
  for (size_t i = 0; i < ref.size(); ++i) CHECK(b.get(i) == (ref[i] == '1'));
}

TEST_CASE("append_run matches the naive reference at random offsets") {
  RngStream rng(11, 0);
  for (int rep = 0; rep < 200; ++rep) {
    size_t src_len = 1 + rng.below(400);
    std::string src = random_ascii(src_len, rng);
    std::string dst = random_ascii(rng.below(130), rng);
    size_t pos = rng.below(src_len + 1);
    size_t len = rng.below(src_len - pos + 1);

    Bitstring packed_src(src);
    Bitstring packed_dst(dst);
    packed_dst.append_run(packed_src, pos, len);
    CHECK(packed_dst.to_string() == naive_append_run(dst, src, pos, len));
  }
}

TEST_CASE("count_zeros matches the naive reference") {
  RngStream rng(13, 0);
  for (int rep = 0; rep < 100; ++rep) {
    size_t n = 1 + rng.below(500);
    std::string s = random_ascii(n, rng);
    Bitstring b(s);
    size_t lo = rng.below(n + 1);
    size_t hi = lo + rng.below(n - lo + 1);
    CHECK(b.count_zeros(lo, hi) == naive_count_zeros(s, lo, hi));
  }
}

TEST_CASE("equality is content equality") {
  Bitstring a("10101"), b("10101"), c("10100");
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("random strings have uniform bit marginals") {
  RngStream rng(17, 3);
  const size_t n = 200000;
  Bitstring b = Bitstring::random(n, rng);
  double ones = static_cast<double>(b.count_ones(0, n));
  // 5/sqrt(N) window around 1/2.
  CHECK(std::abs(ones / n - 0.5) < 5.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 1), b(42, 1), c(42, 2);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
    all_equal = all_equal && va == vb;
    any_diff = any_diff || va != vc;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("geometric skip handles the certain-event case") {
  RngStream rng(3, 0);
  double log1p_neg_1 = std::log1p(-1.0);  // -inf: event at every position
  for (int i = 0; i < 10; ++i) CHECK(rng.geometric(log1p_neg_1) == 0);
}
