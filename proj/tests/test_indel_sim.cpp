#include "doctest.h"

#include <cmath>
#include <set>

#include "indelphy/indel_sim.hpp"

using namespace indelphy;

namespace {

// Per-bit reference implementation of one edge, used as the statistical
// oracle for the event-skip fast path.
Bitstring mutate_edge_naive(const Bitstring& parent, const EdgeParams& p, RngStream& rng) {
  Bitstring child;
  for (size_t i = 0; i < parent.size(); ++i) {
    bool flip = rng.bernoulli(p.p_sub);
    bool del = rng.bernoulli(p.p_del);
    bool ins = rng.bernoulli(p.p_ins);
    if (!del) child.append(parent.get(i) ^ flip);
    if (ins) child.append(rng.bit());
  }
  return child;
}

}  // namespace

TEST_CASE("mutate_edge identity and total deletion") {
  RngStream rng(1, 0);
  Bitstring s = Bitstring::random(500, rng);
  Bitstring same = mutate_edge(s, {0.0, 0.0, 0.0}, rng);
  CHECK(same == s);
  Bitstring gone = mutate_edge(s, {0.0, 1.0, 0.0}, rng);
  CHECK(gone.size() == 0);
}

TEST_CASE("child length moments match the binomial oracle") {
  // len 1000, p_ins 0.10, p_del 0.05: E = 1050, Var = 1000(0.09 + 0.0475).
  const int trials = 10000;
  const double expected_mean = 1050.0;
  const double var = 1000.0 * (0.10 * 0.90 + 0.05 * 0.95);
  RngStream root_rng(2024, 0);
  Bitstring parent = Bitstring::random(1000, root_rng);
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(2024, 100 + t);
    sum += static_cast<double>(mutate_edge(parent, {0.0, 0.05, 0.10}, rng).size());
  }
  double mean = sum / trials;
  CHECK(std::abs(mean - expected_mean) < 4.0 * std::sqrt(var) / 100.0);
}

TEST_CASE("event-skip path matches the per-bit path statistically") {
  const EdgeParams p{0.1, 0.07, 0.12};
  const size_t len = 20000;
  RngStream root_rng(5, 0);
  Bitstring parent = Bitstring::random(len, root_rng);
  double fast_len = 0.0, naive_len = 0.0, fast_ones = 0.0, naive_ones = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    RngStream r1(77, t), r2(78, t);
    Bitstring fast = mutate_edge(parent, p, r1);
    Bitstring naive = mutate_edge_naive(parent, p, r2);
    fast_len += static_cast<double>(fast.size());
    naive_len += static_cast<double>(naive.size());
    fast_ones += static_cast<double>(fast.count_ones(0, fast.size()));
    naive_ones += static_cast<double>(naive.count_ones(0, naive.size()));
  }
  // Means of length and content agree within a loose Monte Carlo window.
  CHECK(std::abs(fast_len - naive_len) / trials < 3.0 * std::sqrt(len * 0.2 / trials) + 2.0);
  CHECK(std::abs(fast_ones / fast_len - naive_ones / naive_len) < 0.01);
}

TEST_CASE("evolve_tree with zero rates copies the root everywhere") {
  ModelTree t = ModelTree::balanced(3, {0.0, 0.0, 0.0}, 1.0);
  auto assign = evolve_tree(t, 256, 5, 0, false);
  for (int v = 1; v < t.size(); ++v) CHECK(assign.bits[v] == assign.bits[0]);
}

TEST_CASE("near-critical substitution keeps the Bernoulli match rate") {
  // p_sub = 0.49: child bit matches parent with probability 0.51.
  std::string text = "1 0 0.49 0 0 A\n2 0 0 0 0 B\n";
  ModelTree t = ModelTree::from_edge_params_text(text, 1e-3);
  auto assign = evolve_tree(t, 100000, 31, 0, false);
  const Bitstring& root = assign.bits[0];
  const Bitstring& child = assign.bits[1];
  REQUIRE(child.size() == root.size());
  size_t match = 0;
  for (size_t i = 0; i < root.size(); ++i) match += root.get(i) == child.get(i);
  CHECK(std::abs(static_cast<double>(match) / root.size() - 0.51) < 0.005);
}

TEST_CASE("expected child length tracks (1 + p_ins - p_del) along the tree") {
  ModelTree t = ModelTree::balanced(2, {0.05, 0.03, 0.08}, edge_length({0.05, 0.03, 0.08}));
  const uint64_t k_root = 40000;
  const int trials = 60;
  double sum_leaf = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    auto assign = evolve_tree(t, k_root, 400, trial, false);
    for (int leaf : t.leaf_ids()) sum_leaf += static_cast<double>(assign.bits[leaf].size());
  }
  double expected = k_root * std::pow(1.05, 2);  // (1 + 0.08 - 0.03)^depth
  double mean = sum_leaf / (trials * t.n_leaves());
  double se = std::sqrt(k_root * 0.11 * 2.0 / (trials * 4.0));
  CHECK(std::abs(mean - expected) < 5.0 * se + 1.0);
}

TEST_CASE("lineage ids: identity edge, order preservation, fresh uniqueness") {
  ModelTree t = ModelTree::balanced(2, {0.1, 0.0, 0.0}, edge_length({0.1, 0.0, 0.0}));
  auto no_indel = evolve_tree(t, 512, 9, 0, true);
  for (int v = 1; v < t.size(); ++v) CHECK(no_indel.lineage[v] == no_indel.lineage[0]);

  ModelTree ti = ModelTree::balanced(3, {0.05, 0.06, 0.06}, edge_length({0.05, 0.06, 0.06}));
  auto assign = evolve_tree(ti, 2000, 10, 0, true);
  std::set<uint64_t> fresh_seen;
  for (int v = 0; v < ti.size(); ++v) {
    const auto& ids = assign.lineage[v];
    CHECK(ids.size() == assign.bits[v].size());
    // Root-descended ids appear in strictly increasing order.
    uint64_t last_root_id = 0;
    bool first = true;
    for (uint64_t id : ids) {
      if (id < assign.root_length) {
        if (!first) CHECK(id > last_root_id);
        last_root_id = id;
        first = false;
      }
    }
  }
  // A fresh id is used at most once within any single node's string.
  for (int v = 0; v < ti.size(); ++v) {
    std::set<uint64_t> seen;
    for (uint64_t id : assign.lineage[v]) CHECK(seen.insert(id).second);
  }
}

TEST_CASE("identical seeds reproduce identical assignments") {
  ModelTree t = ModelTree::balanced(3, {0.05, 0.02, 0.02}, edge_length({0.05, 0.02, 0.02}));
  auto a = evolve_tree(t, 4096, 123, 7, true);
  auto b = evolve_tree(t, 4096, 123, 7, true);
  for (int v = 0; v < t.size(); ++v) {
    CHECK(a.bits[v] == b.bits[v]);
    CHECK(a.lineage[v] == b.lineage[v]);
  }
  auto c = evolve_tree(t, 4096, 123, 8, true);
  bool differs = false;
  for (int v = 0; v < t.size(); ++v) differs = differs || !(a.bits[v] == c.bits[v]);
  CHECK(differs);

  // Lineage tracking does not perturb the generated bitstrings.
  auto untracked = evolve_tree(t, 4096, 123, 7, false);
  for (int v = 0; v < t.size(); ++v) CHECK(a.bits[v] == untracked.bits[v]);
}

TEST_CASE("shared_bits diagonal and indel-free cases") {
  ModelTree t = ModelTree::balanced(2, {0.2, 0.0, 0.0}, edge_length({0.2, 0.0, 0.0}));
  auto assign = evolve_tree(t, 300, 77, 0, true);
  int a = t.leaf_ids()[0], b = t.leaf_ids()[3];

  auto self_pairs = shared_bits(assign, a, a);
  REQUIRE(self_pairs.size() == assign.bits[a].size());
  for (size_t i = 0; i < self_pairs.size(); ++i) {
    CHECK(self_pairs[i].first == i);
    CHECK(self_pairs[i].second == i);
  }

  auto cross = shared_bits(assign, a, b);
  REQUIRE(cross.size() == 300);  // indel-free: full diagonal
  for (size_t i = 0; i < cross.size(); ++i) CHECK(cross[i].first == cross[i].second);

  auto untracked = evolve_tree(t, 300, 77, 0, false);
  CHECK_THROWS(shared_bits(untracked, a, b));
}

TEST_CASE("total deletion above one side empties the shared set") {
  std::string text =
      "1 0 0 1.0 0 \n"
      "2 0 0 0 0 \n"
      "3 1 0 0 0 A\n"
      "4 1 0 0 0 B\n"
      "5 2 0 0 0 C\n"
      "6 2 0 0 0 D\n";
  ModelTree t = ModelTree::from_edge_params_text(text, 1.0);
  auto assign = evolve_tree(t, 64, 13, 0, true);
  CHECK(assign.bits[3].size() == 0);  // everything above A was deleted
  CHECK(shared_bits(assign, 3, 5).empty());
}

TEST_CASE("normalized shift: zero without indels, raw shift when symmetric") {
  ModelTree clean = ModelTree::balanced(2, {0.3, 0.0, 0.0}, edge_length({0.3, 0.0, 0.0}));
  auto assign = evolve_tree(clean, 1000, 15, 0, true);
  CHECK(normalized_shift_max(clean, assign, clean.leaf_ids()[0], clean.leaf_ids()[3]) == 0.0);

  ModelTree sym = ModelTree::balanced(2, {0.0, 0.05, 0.05}, edge_length({0.0, 0.05, 0.05}));
  auto sym_assign = evolve_tree(sym, 1000, 16, 0, true);
  int a = sym.leaf_ids()[0], b = sym.leaf_ids()[2];
  double raw_max = 0.0;
  for (const auto& [pa, pb] : shared_bits(sym_assign, a, b)) {
    raw_max = std::max(raw_max, std::abs(static_cast<double>(pb) - static_cast<double>(pa)));
  }
  CHECK(normalized_shift_max(sym, sym_assign, a, b) == doctest::Approx(raw_max));
}

TEST_CASE("normalized shifts stay under the concentration bound") {
  // Balanced depth 4, k = 4096: bound 4 log2^2(16) sqrt(4096) = 4*16*64.
  ModelTree t = ModelTree::balanced(4, {0.0, 0.02, 0.02}, edge_length({0.0, 0.02, 0.02}));
  const double bound = 4.0 * 16.0 * 64.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto assign = evolve_tree(t, 2 * 4096, 99, trial, true);
    double worst = 0.0;
    const auto& leaves = t.leaf_ids();
    for (size_t i = 0; i < leaves.size(); i += 3) {
      for (size_t j = i + 1; j < leaves.size(); j += 3) {
        worst = std::max(worst, normalized_shift_max(t, assign, leaves[i], leaves[j]));
      }
    }
    CHECK(worst <= bound);
  }
}

TEST_CASE("bit marginals stay uniform at every node") {
  ModelTree t = ModelTree::balanced(2, {0.07, 0.03, 0.03}, edge_length({0.07, 0.03, 0.03}));
  const int trials = 40;
  std::vector<double> ones(t.size(), 0.0), total(t.size(), 0.0);
  for (int trial = 0; trial < trials; ++trial) {
    auto assign = evolve_tree(t, 4096, 57, trial, false);
    for (int v = 0; v < t.size(); ++v) {
      ones[v] += static_cast<double>(assign.bits[v].count_ones(0, assign.bits[v].size()));
      total[v] += static_cast<double>(assign.bits[v].size());
    }
  }
  for (int v = 0; v < t.size(); ++v) {
    CHECK(std::abs(ones[v] / total[v] - 0.5) < 5.0 / std::sqrt(total[v]));
  }
}
