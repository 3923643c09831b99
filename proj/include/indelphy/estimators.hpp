#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "indelphy/signatures.hpp"
#include "indelphy/tree_model.hpp"

namespace indelphy {

inline constexpr double kInfDistance = std::numeric_limits<double>::infinity();

enum class EstimateSource { kTrueSig, kLeafPseudoSig, kReconstructedSig };

struct CorrelationEstimate {
  double value = 0.0;
  EstimateSource source = EstimateSource::kTrueSig;
  std::array<int, 2> pair{-1, -1};
};

// (2/L) * sum over odd blocks i in {1, 3, ..., L-1} of sa[i]*sb[i].
CorrelationEstimate shallow_correlation(const SignatureVector& sa, const SignatureVector& sb);

// -ln(4c); +inf sentinel for non-positive correlations (callers treat the
// pair as unusably far and drop it from short-quartet sets).
double shallow_distance(const CorrelationEstimate& c);

// Distance oracle over rooted subtrees built so far. Edge lengths are stored
// as a double plus an optional integer multiple of lambda_min (set by the
// reconstruction path, which only ever records grid-rounded lengths).
class KnownDistances {
 public:
  KnownDistances() = default;
  explicit KnownDistances(double lambda_min) : lambda_min_(lambda_min) {}

  int add_leaf(const std::string& label);
  // New parent over two current roots; lengths are child->parent edges.
  int join(int left, int right, double len_left, double len_right, long long tau_left = 0,
           long long tau_right = 0);

  int size() const { return static_cast<int>(nodes_.size()); }
  double lambda_min() const { return lambda_min_; }
  bool is_leaf(int v) const { return nodes_[v].children[0] < 0; }
  int parent(int v) const { return nodes_[v].parent; }
  const std::array<int, 2>& children(int v) const { return nodes_[v].children; }
  const std::string& label(int v) const { return nodes_[v].label; }
  double edge_len(int v) const { return nodes_[v].len; }
  long long edge_tau(int v) const { return nodes_[v].tau; }

  // Sum of edge lengths from `descendant` up to `ancestor`; throws if
  // ancestor is not on the root path of descendant.
  double distance(int ancestor, int descendant) const;

  // Descendants exactly `offset` edges below a, in BFS order.
  std::vector<int> descendants_at_offset(int a, int offset) const;
  std::vector<int> leaves_under(int a) const;
  // Largest offset h such that 2^h descendants exist at offset h below a.
  int min_leaf_offset(int a) const;
  // Smallest leaf label in a's subtree (canonical representative).
  const std::string& smallest_label(int a) const;
  int representative_leaf(int a) const;

  // Mirror of a model tree with exact edge lengths (validator use).
  static KnownDistances from_model_tree(const ModelTree& tree);

 private:
  struct NodeRec {
    int parent = -1;
    std::array<int, 2> children{-1, -1};
    double len = 0.0;
    long long tau = 0;
    std::string label;
    std::string smallest;
  };
  double lambda_min_ = 0.0;
  std::vector<NodeRec> nodes_;
};

// d~(a_j, b_j) = -(d_aj_a + d_bj_b) - ln(4 chat); +inf for chat <= 0.
double pair_estimate(const CorrelationEstimate& chat, double d_aj_a, double d_bj_b);

// shat_{a,i} = (1/|A|) sum_{x in A} e^{d(x,a)} s_{x,i}, coordinate-wise.
SignatureVector reconstruct_signature(const std::vector<SignatureVector>& leaf_sigs,
                                      const std::vector<int>& leaves_of_a,
                                      const std::vector<double>& dist_to_a, int a);

CorrelationEstimate deep_correlation(const SignatureVector& sa_hat, const SignatureVector& sb_hat);

struct DeepAggregate {
  int winner = -1;            // 0-based index into entries
  double d_hat = kInfDistance;
  std::vector<double> radii;
};

// Median-radius rule: r_j is the smallest radius around entry j capturing at
// least ceil(2m/3) other entries; the winner minimizes r_j (ties -> lowest
// index). Two +inf entries count as distance 0 apart, so a majority of
// failed estimates propagates +inf rather than electing a stray finite one.
DeepAggregate aggregate_deep(const std::vector<double>& entries);

// 1 iff at least ceil(m/2) entries satisfy |e| <= r.
int diameter_test(const std::vector<double>& entries, double r);

struct DeepEstimate {
  double d_hat = kInfDistance;
  std::vector<double> entries;  // the d~(a_j, b_j) samples
  int offset_used = 0;
};

// Full deep distance between subtree roots a and b: enumerate descendants at
// depth offset h (BFS order, matched by index), reconstruct signatures from
// leaf data, aggregate the 2^h pair estimates. Leaf signature vectors are
// indexed by the KnownDistances node id of the leaf.
DeepEstimate deep_distance(int a, int b, int h, const std::vector<SignatureVector>& leaf_sigs,
                           const KnownDistances& dists);

std::string distance_dump_line(const std::string& a, const std::string& b, double estimate,
                               EstimateSource source);

}  // namespace indelphy
