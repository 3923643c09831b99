#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "indelphy/estimators.hpp"
#include "indelphy/newick.hpp"
#include "indelphy/signatures.hpp"

namespace indelphy {

enum class QuartetTopology { kABxCD, kACxBD, kADxBC };

struct QuartetSplit {
  std::array<int, 4> taxa{-1, -1, -1, -1};
  QuartetTopology split = QuartetTopology::kABxCD;
  double margin = 0.0;  // gap between the smallest and second-smallest pair sum
};

// Four Point Method over a symmetric zero-diagonal 4x4 dissimilarity matrix:
// the split with the minimal within-pair sum wins; ties prefer ab|cd, then
// ac|bd, then ad|bc. Throws on non-finite entries.
QuartetSplit four_point_method(const std::array<std::array<double, 4>, 4>& D);

// One pairwise estimate inside a quartet: the headline value plus the
// samples behind it (a single entry for shallow estimates, the d~ list for
// deep ones).
struct QuartetPairEstimate {
  double value = kInfDistance;
  std::vector<double> entries;
};

// r-short test for a quartet given its six pairwise estimates (order
// irrelevant). At level 0 every value must be finite and <= r; above the
// shallow phase every pair must pass the diameter test at r. Non-finite
// sentinel values make the quartet not short.
bool is_short_quartet(const std::array<QuartetPairEstimate, 6>& pairs, int level,
                      int phase1_height, double r);

// Distance from a to the meeting point of paths from a, b, c.
double three_point(double d_ab, double d_ac, double d_bc);

// Nearest positive multiple of lambda_min (minimum 1); halfway ties round up.
long long grid_multiple(double x, double lambda_min);
double round_to_grid(double x, double lambda_min);

struct StallError : std::runtime_error {
  StallError(int level_, int roots_)
      : std::runtime_error("reconstruction stall at level h=" + std::to_string(level_) + " with " +
                           std::to_string(roots_) + " subtrees and no cherry"),
        level(level_),
        roots(roots_) {}
  int level, roots;
};

struct ReconstructionConfig {
  double lambda_min = 0.0;
  double delta = 1.0;
  double r = 0.0;        // 0 -> 2 * delta * log2(log2 n)
  int deep_offset = 0;   // 0 -> ceil(delta * log2(log2 n))
  // Balanced trees only ever pair equal-height subtrees; keeping that
  // constraint stops a stray singleton from merging into its uncle while
  // its true partner is temporarily vetoed.
  bool require_balanced = true;
};

// Pairwise estimate source driving the reconstruction loop. Leaves are
// indexed by their KnownDistances node id (assigned in sorted label order).
class PairSource {
 public:
  virtual ~PairSource() = default;
  virtual double leaf_distance(int x, int y) = 0;
  virtual DeepEstimate root_estimate(int u, int v, const KnownDistances& dists, int offset) = 0;
};

// Estimates from leaf signature vectors: shallow -ln(4C) between leaves,
// median-radius deep estimates between internal roots.
class SignatureSource : public PairSource {
 public:
  explicit SignatureSource(std::vector<SignatureVector> leaf_sigs);
  double leaf_distance(int x, int y) override;
  DeepEstimate root_estimate(int u, int v, const KnownDistances& dists, int offset) override;

 private:
  std::vector<SignatureVector> sigs_;
};

// Noiseless plug-in source backed by a caller-supplied leaf metric.
class OracleSource : public PairSource {
 public:
  explicit OracleSource(std::function<double(int, int)> leaf_metric)
      : metric_(std::move(leaf_metric)) {}
  double leaf_distance(int x, int y) override { return metric_(x, y); }
  DeepEstimate root_estimate(int u, int v, const KnownDistances& dists, int offset) override;

 private:
  std::function<double(int, int)> metric_;
};

// Unrooted result: the forest of built subtrees plus the terminal join.
// Two remaining subtrees share one edge (top_taus = {tau, 0}); three meet at
// a degree-3 vertex with one edge each (the only possible completion, since
// a path vertex between them would need a fourth subtree).
struct ReconstructedTree {
  KnownDistances forest;
  std::vector<int> top_roots;
  std::vector<long long> top_taus;

  LabeledTree to_labeled_tree() const;
  std::string to_newick() const;
};

struct ReconstructionResult {
  ReconstructedTree tree;
};

// Pairs of current roots never separated by any short-quartet split and
// witnessed together by at least one; greedy maximal disjoint pairing in
// deterministic order (most-witnessed candidates first). `splits` are
// evaluated short quartets over root indices 0..n_roots-1; `pairable`
// optionally restricts which pairs may form (balanced-mode height filter).
std::vector<std::pair<int, int>> pick_cherries(
    int n_roots, const std::vector<QuartetSplit>& splits,
    const std::function<bool(int, int)>& pairable = {});

// Full reconstruction loop (both phases). Labels must be unique; at least 4.
// When decision_log is non-null, one line per evaluated quartet is appended
// ("h=<level> quartet=<ids> split=<..> short=<0/1>"); a stalled level also
// dumps its pairwise state before StallError is thrown.
ReconstructionResult tree_reconstruct(const std::vector<std::string>& labels, PairSource& source,
                                      const ReconstructionConfig& config,
                                      std::vector<std::string>* decision_log = nullptr);

// Convenience wrappers for the two estimate sources.
ReconstructionResult tree_reconstruct_from_signatures(const std::vector<std::string>& labels,
                                                      std::vector<SignatureVector> leaf_sigs,
                                                      const ReconstructionConfig& config,
                                                      std::vector<std::string>* decision_log = nullptr);
ReconstructionResult tree_reconstruct_oracle(const std::vector<std::string>& labels,
                                             std::function<double(int, int)> leaf_metric,
                                             const ReconstructionConfig& config,
                                             std::vector<std::string>* decision_log = nullptr);

}  // namespace indelphy
