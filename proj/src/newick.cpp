#include "indelphy/newick.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace indelphy {

std::vector<std::string> LabeledTree::leaf_labels() const {
  std::vector<std::string> out;
  for (const auto& n : nodes) {
    if (n.children.empty()) out.push_back(n.label);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;
  LabeledTree tree;

  explicit Parser(const std::string& text) : s(text) {}

  char peek() const { return pos < s.size() ? s[pos] : '\0'; }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("newick parse error at position " + std::to_string(pos) + ": " +
                             what);
  }

  int parse_node(int parent) {
    int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[id].parent = parent;
    if (peek() == '(') {
      ++pos;
      while (true) {
        int child = parse_node(id);
        tree.nodes[id].children.push_back(child);
        if (peek() == ',') {
          ++pos;
          continue;
        }
        if (peek() == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    // Optional label.
    size_t start = pos;
    while (pos < s.size() && s[pos] != ':' && s[pos] != ',' && s[pos] != ')' && s[pos] != ';' &&
           s[pos] != '(') {
      ++pos;
    }
    tree.nodes[id].label = s.substr(start, pos - start);
    if (peek() == ':') {
      ++pos;
      size_t consumed = 0;
      try {
        tree.nodes[id].length = std::stod(s.substr(pos), &consumed);
      } catch (const std::exception&) {
        fail("bad branch length");
      }
      pos += consumed;
    }
    return id;
  }

  LabeledTree run() {
    tree.root = parse_node(-1);
    if (peek() != ';') fail("expected ';'");
    ++pos;
    while (pos < s.size() && (s[pos] == '\n' || s[pos] == '\r' || s[pos] == ' ')) ++pos;
    if (pos != s.size()) fail("trailing characters after ';'");
    for (const auto& n : tree.nodes) {
      if (n.children.empty() && n.label.empty()) fail("unlabeled leaf");
    }
    return std::move(tree);
  }
};

std::string smallest_leaf(const LabeledTree& t, int v) {
  if (t.is_leaf(v)) return t.nodes[v].label;
  std::string best;
  for (int c : t.nodes[v].children) {
    std::string s = smallest_leaf(t, c);
    if (best.empty() || s < best) best = s;
  }
  return best;
}

void emit(const LabeledTree& t, int v, std::string& out) {
  const auto& n = t.nodes[v];
  if (!n.children.empty()) {
    std::vector<int> order = n.children;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return smallest_leaf(t, a) < smallest_leaf(t, b);
    });
    out.push_back('(');
    for (size_t i = 0; i < order.size(); ++i) {
      if (i) out.push_back(',');
      emit(t, order[i], out);
    }
    out.push_back(')');
  }
  out += n.label;
  if (v != t.root) {
    char buf[40];
    std::snprintf(buf, sizeof buf, ":%.12g", n.length);
    out += buf;
  }
}

void collect_side(const LabeledTree& t, int v, std::vector<std::string>& out) {
  if (t.is_leaf(v)) {
    out.push_back(t.nodes[v].label);
    return;
  }
  for (int c : t.nodes[v].children) collect_side(t, c, out);
}

}  // namespace

LabeledTree parse_newick(const std::string& text) { return Parser(text).run(); }

std::string emit_newick_canonical(const LabeledTree& tree) {
  std::string out;
  emit(tree, tree.root, out);
  out.push_back(';');
  return out;
}

std::map<Bipartition, double> unrooted_edge_lengths(const LabeledTree& tree) {
  auto all = tree.leaf_labels();
  if (all.empty()) return {};
  const std::string& global_smallest = all.front();

  std::map<Bipartition, double> out;
  for (int v = 0; v < static_cast<int>(tree.nodes.size()); ++v) {
    if (v == tree.root) continue;
    std::vector<std::string> side;
    collect_side(tree, v, side);
    std::sort(side.begin(), side.end());
    if (side.size() == all.size()) continue;  // spurious unary root edge
    if (std::binary_search(side.begin(), side.end(), global_smallest)) {
      // Canonical side is the complement.
      Bipartition comp;
      std::set_difference(all.begin(), all.end(), side.begin(), side.end(),
                          std::back_inserter(comp));
      side = std::move(comp);
    }
    out[side] += tree.nodes[v].length;  // degree-2 root edges merge here
  }
  return out;
}

std::set<Bipartition> nontrivial_bipartitions(const LabeledTree& tree) {
  size_t n = tree.leaf_labels().size();
  std::set<Bipartition> out;
  for (const auto& [side, len] : unrooted_edge_lengths(tree)) {
    if (side.size() >= 2 && side.size() <= n - 2) out.insert(side);
  }
  return out;
}

int rf_distance(const LabeledTree& a, const LabeledTree& b) {
  if (a.leaf_labels() != b.leaf_labels()) {
    throw std::runtime_error("rf_distance: trees have different leaf sets");
  }
  auto sa = nontrivial_bipartitions(a);
  auto sb = nontrivial_bipartitions(b);
  int diff = 0;
  for (const auto& s : sa) diff += sb.count(s) ? 0 : 1;
  for (const auto& s : sb) diff += sa.count(s) ? 0 : 1;
  return diff;
}

}  // namespace indelphy
