#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace indelphy {

// Generic rooted tree with labels and branch lengths, as read from Newick.
struct LabeledTree {
  struct Node {
    std::string label;
    double length = 0.0;  // edge to parent; 0 at the root
    int parent = -1;
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  int root = -1;

  bool is_leaf(int v) const { return nodes[v].children.empty(); }
  std::vector<std::string> leaf_labels() const;
};

LabeledTree parse_newick(const std::string& text);

// Canonical form: children ordered by smallest descendant leaf label,
// branch lengths printed with 12 significant digits. Emitting is idempotent:
// emit(parse(emit(t))) == emit(t).
std::string emit_newick_canonical(const LabeledTree& tree);

// Canonical bipartition key: the sorted label list of the side that does not
// contain the lexicographically smallest leaf.
using Bipartition = std::vector<std::string>;

// Every unrooted edge with its length; the two edges of a degree-2 root are
// merged into one with summed length. Includes the trivial (leaf) edges.
std::map<Bipartition, double> unrooted_edge_lengths(const LabeledTree& tree);

// Nontrivial bipartitions only (both sides of size >= 2).
std::set<Bipartition> nontrivial_bipartitions(const LabeledTree& tree);

// Robinson-Foulds distance: size of the symmetric difference of nontrivial
// bipartition sets. Throws on leaf-set mismatch.
int rf_distance(const LabeledTree& a, const LabeledTree& b);

}  // namespace indelphy
