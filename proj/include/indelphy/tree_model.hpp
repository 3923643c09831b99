#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "indelphy/rng.hpp"

namespace indelphy {

// Per-edge mutation probabilities of the two-state indel process.
struct EdgeParams {
  double p_sub = 0.0;
  double p_del = 0.0;
  double p_ins = 0.0;
};

// True iff the probabilities are in range and the edge has a finite length:
// 0 <= p_sub < 1/2, 0 <= p_del < 1, 0 <= p_ins < 1, 1 + p_ins - p_del > 0.
bool edge_params_valid(const EdgeParams& p);

// Length (decay rate) of an edge:
//   -[ln(1 - 2 p_sub) + ln(1 - p_del) - (1/2) ln(1 + p_ins - p_del)]
// Throws std::domain_error outside the valid domain.
double edge_length(const EdgeParams& p);

// Given a target length and fixed indel rates, the p_sub that achieves it.
// Throws std::domain_error if the target is below the indel-only floor.
double p_sub_for_length(double lambda_target, double p_del, double p_ins);

struct RegimeReport {
  double lambda_max = 0.0;
  bool ks_ok = false;         // e^{2 lambda_max} < 2, i.e. lambda_max < ln(sqrt 2)
  bool symmetric = false;     // p_ins == p_del on every edge
  bool asym_bound_ok = false; // max |p_ins - p_del| within the supplied bound
  double max_indel_gap = 0.0; // max |p_ins - p_del| over edges
};

// Rooted binary model tree. Node 0 is the root; ids are dense in BFS order.
// Every non-root node stores the parameters of the edge to its parent.
class ModelTree {
 public:
  struct Node {
    int parent = -1;
    std::array<int, 2> children{-1, -1};
    EdgeParams edge;        // meaningless at the root
    std::string label;      // nonempty for leaves
    int depth = 0;
  };

  int size() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int id) const { return nodes_.at(id); }
  bool is_leaf(int id) const { return nodes_[id].children[0] < 0; }
  int root() const { return 0; }
  int depth_max() const { return depth_max_; }
  double lambda_min() const { return lambda_min_; }

  int n_leaves() const { return static_cast<int>(leaves_.size()); }
  const std::vector<int>& leaf_ids() const { return leaves_; }
  int leaf_by_label(const std::string& label) const;

  // Length of the edge from node `child` to its parent.
  double edge_lambda(int child) const;

  // Sum of edge lengths on the unique a-b path; 0 when a == b.
  double path_distance(int a, int b) const;

  // Product over the root->a path of (1 + p_ins - p_del); 1 at the root.
  double eta(int a) const;

  RegimeReport check_regime(double asym_bound) const;

  // Structural and Delta-branch invariants; throws std::runtime_error with a
  // description of the first violation. `balanced` additionally requires all
  // leaves at equal depth.
  void validate(bool balanced = false) const;

  std::string to_newick() const;

  // One line per edge: "child_id parent_id p_sub p_del p_ins [label]".
  std::string to_edge_params_text() const;
  static ModelTree from_edge_params_text(const std::string& text, double lambda_min);

  static ModelTree balanced(int depth, const EdgeParams& params, double lambda_min);
  // Per-edge tau drawn uniformly from {1..tau_max}; p_sub scaled per edge so
  // that lambda(e) = tau_e * lambda_min while indel rates stay fixed.
  static ModelTree balanced_jittered(int depth, double p_del, double p_ins, double lambda_min,
                                     int tau_max, RngStream& rng);
  // All edges at lambda_target = round multiple of lambda_min, p_sub solved.
  static ModelTree balanced_lambda(int depth, double lambda_target, double p_del, double p_ins,
                                   double lambda_min);

 private:
  static ModelTree balanced_skeleton(int depth, double lambda_min);

  std::vector<Node> nodes_;
  std::vector<int> leaves_;
  double lambda_min_ = 0.0;
  int depth_max_ = 0;
};

}  // namespace indelphy
