#include "indelphy/tree_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace indelphy {

bool edge_params_valid(const EdgeParams& p) {
  return p.p_sub >= 0.0 && p.p_sub < 0.5 && p.p_del >= 0.0 && p.p_del < 1.0 && p.p_ins >= 0.0 &&
         p.p_ins < 1.0 && 1.0 + p.p_ins - p.p_del > 0.0;
}

double edge_length(const EdgeParams& p) {
  if (1.0 - 2.0 * p.p_sub <= 0.0 || 1.0 - p.p_del <= 0.0 || 1.0 + p.p_ins - p.p_del <= 0.0) {
    throw std::domain_error("edge_length: parameters outside the finite-length domain");
  }
  return -(std::log(1.0 - 2.0 * p.p_sub) + std::log(1.0 - p.p_del) -
           0.5 * std::log(1.0 + p.p_ins - p.p_del));
}

double p_sub_for_length(double lambda_target, double p_del, double p_ins) {
  double indel_floor = edge_length({0.0, p_del, p_ins});
  double residual = lambda_target - indel_floor;
  if (residual < -1e-12) {
    throw std::domain_error("target edge length below the indel-only floor");
  }
  if (residual < 0.0) residual = 0.0;
  return 0.5 * (1.0 - std::exp(-residual));
}

int ModelTree::leaf_by_label(const std::string& label) const {
  for (int id : leaves_) {
    if (nodes_[id].label == label) return id;
  }
  throw std::runtime_error("unknown leaf label: " + label);
}

double ModelTree::edge_lambda(int child) const {
  if (child <= 0 || child >= size()) throw std::out_of_range("edge_lambda: bad node id");
  return edge_length(nodes_[child].edge);
}

double ModelTree::path_distance(int a, int b) const {
  if (a < 0 || a >= size() || b < 0 || b >= size()) {
    throw std::out_of_range("path_distance: unknown node id");
  }
  double d = 0.0;
  while (nodes_[a].depth > nodes_[b].depth) {
    d += edge_lambda(a);
    a = nodes_[a].parent;
  }
  while (nodes_[b].depth > nodes_[a].depth) {
    d += edge_lambda(b);
    b = nodes_[b].parent;
  }
  while (a != b) {
    d += edge_lambda(a) + edge_lambda(b);
    a = nodes_[a].parent;
    b = nodes_[b].parent;
  }
  return d;
}

double ModelTree::eta(int a) const {
  if (a < 0 || a >= size()) throw std::out_of_range("eta: unknown node id");
  double prod = 1.0;
  while (a != 0) {
    prod *= 1.0 + nodes_[a].edge.p_ins - nodes_[a].edge.p_del;
    a = nodes_[a].parent;
  }
  return prod;
}

RegimeReport ModelTree::check_regime(double asym_bound) const {
  RegimeReport rep;
  rep.symmetric = true;
  for (int id = 1; id < size(); ++id) {
    const EdgeParams& e = nodes_[id].edge;
    rep.lambda_max = std::max(rep.lambda_max, edge_length(e));
    double gap = std::abs(e.p_ins - e.p_del);
    rep.max_indel_gap = std::max(rep.max_indel_gap, gap);
    if (gap > 0.0) rep.symmetric = false;
  }
  rep.ks_ok = rep.lambda_max < 0.5 * std::log(2.0) - 1e-12;
  rep.asym_bound_ok = rep.max_indel_gap <= asym_bound + 1e-12;
  return rep;
}

void ModelTree::validate(bool balanced) const {
  if (size() < 3) throw std::runtime_error("tree must have at least a root and two children");
  if (lambda_min_ <= 0.0) throw std::runtime_error("lambda_min must be positive");
  int leaf_depth = -1;
  for (int id = 0; id < size(); ++id) {
    const Node& n = nodes_[id];
    bool has0 = n.children[0] >= 0, has1 = n.children[1] >= 0;
    if (has0 != has1) throw std::runtime_error("node " + std::to_string(id) + " has one child");
    if (!has0) {
      if (n.label.empty()) throw std::runtime_error("leaf " + std::to_string(id) + " unlabeled");
      if (balanced) {
        if (leaf_depth < 0) leaf_depth = n.depth;
        if (n.depth != leaf_depth) throw std::runtime_error("leaves at unequal depth");
      }
    }
    if (id > 0) {
      if (!edge_params_valid(n.edge)) {
        throw std::runtime_error("invalid edge parameters above node " + std::to_string(id));
      }
      double lam = edge_length(n.edge);
      if (lam <= 0.0) throw std::runtime_error("zero-length edge above node " + std::to_string(id));
      double ratio = lam / lambda_min_;
      if (std::abs(ratio - std::round(ratio)) > 1e-9) {
        throw std::runtime_error("edge above node " + std::to_string(id) +
                                 " is not an integer multiple of lambda_min");
      }
    }
  }
}

namespace {

void newick_emit(const ModelTree& t, int id, std::string& out) {
  const auto& n = t.node(id);
  if (n.children[0] >= 0) {
    // Children ordered by smallest descendant leaf label.
    auto smallest = [&t](int v) {
      while (t.node(v).children[0] >= 0) v = t.node(v).children[0];
      return t.node(v).label;
    };
    int c0 = n.children[0], c1 = n.children[1];
    if (smallest(c1) < smallest(c0)) std::swap(c0, c1);
    out.push_back('(');
    newick_emit(t, c0, out);
    out.push_back(',');
    newick_emit(t, c1, out);
    out.push_back(')');
  } else {
    out += n.label;
  }
  if (id != t.root()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, ":%.12g", t.edge_lambda(id));
    out += buf;
  }
}

}  // namespace

std::string ModelTree::to_newick() const {
  std::string out;
  newick_emit(*this, root(), out);
  out.push_back(';');
  return out;
}

std::string ModelTree::to_edge_params_text() const {
  std::ostringstream os;
  for (int id = 1; id < size(); ++id) {
    const Node& n = nodes_[id];
    os << id << ' ' << n.parent << ' ' << n.edge.p_sub << ' ' << n.edge.p_del << ' '
       << n.edge.p_ins;
    if (is_leaf(id)) os << ' ' << n.label;
    os << '\n';
  }
  return os.str();
}

ModelTree ModelTree::from_edge_params_text(const std::string& text, double lambda_min) {
  struct Row {
    int child, parent;
    EdgeParams e;
    std::string label;
  };
  std::vector<Row> rows;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    Row r;
    if (!(ls >> r.child >> r.parent >> r.e.p_sub >> r.e.p_del >> r.e.p_ins)) {
      if (ls.eof() && line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::runtime_error("tree parameter file: parse error on line " +
                               std::to_string(lineno));
    }
    ls >> r.label;
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error("tree parameter file: no edges");

  int max_id = 0;
  for (const auto& r : rows) max_id = std::max(max_id, std::max(r.child, r.parent));
  ModelTree t;
  t.lambda_min_ = lambda_min;
  t.nodes_.resize(max_id + 1);
  for (const auto& r : rows) {
    if (r.child <= 0 || r.child > max_id || r.parent < 0) {
      throw std::runtime_error("tree parameter file: bad node ids");
    }
    Node& n = t.nodes_[r.child];
    n.parent = r.parent;
    n.edge = r.e;
    n.label = r.label;
    Node& p = t.nodes_[r.parent];
    if (p.children[0] < 0) {
      p.children[0] = r.child;
    } else if (p.children[1] < 0) {
      p.children[1] = r.child;
    } else {
      throw std::runtime_error("node " + std::to_string(r.parent) + " has more than two children");
    }
  }
  // Depths and leaf registry in id (BFS) order.
  int leaf_count = 0;
  for (int id = 0; id < t.size(); ++id) {
    Node& n = t.nodes_[id];
    if (id > 0) {
      if (n.parent < 0) throw std::runtime_error("node " + std::to_string(id) + " has no parent");
      if (n.parent >= id) throw std::runtime_error("node ids must increase from the root (BFS)");
      n.depth = t.nodes_[n.parent].depth + 1;
      t.depth_max_ = std::max(t.depth_max_, n.depth);
    }
    if (n.children[0] < 0) {
      if (n.label.empty()) n.label = "L" + std::to_string(leaf_count);
      ++leaf_count;
      t.leaves_.push_back(id);
    }
  }
  return t;
}

ModelTree ModelTree::balanced_skeleton(int depth, double lambda_min) {
  if (depth < 1) throw std::invalid_argument("balanced tree depth must be >= 1");
  ModelTree t;
  t.lambda_min_ = lambda_min;
  t.depth_max_ = depth;
  int total = (1 << (depth + 1)) - 1;
  t.nodes_.resize(total);
  for (int id = 0; id < total; ++id) {
    Node& n = t.nodes_[id];
    if (id > 0) {
      n.parent = (id - 1) / 2;
      n.depth = t.nodes_[n.parent].depth + 1;
    }
    if (2 * id + 2 < total) {
      n.children = {2 * id + 1, 2 * id + 2};
    }
  }
  int n_leaves = 1 << depth;
  // Zero-padded labels so lexicographic order matches leaf order.
  size_t width = std::to_string(n_leaves - 1).size();
  int leaf0 = total - n_leaves;
  for (int i = 0; i < n_leaves; ++i) {
    std::string idx = std::to_string(i);
    t.nodes_[leaf0 + i].label = "L" + std::string(width - idx.size(), '0') + idx;
    t.leaves_.push_back(leaf0 + i);
  }
  return t;
}

ModelTree ModelTree::balanced(int depth, const EdgeParams& params, double lambda_min) {
  ModelTree t = balanced_skeleton(depth, lambda_min);
  for (int id = 1; id < t.size(); ++id) t.nodes_[id].edge = params;
  return t;
}

ModelTree ModelTree::balanced_lambda(int depth, double lambda_target, double p_del, double p_ins,
                                     double lambda_min) {
  EdgeParams e{p_sub_for_length(lambda_target, p_del, p_ins), p_del, p_ins};
  return balanced(depth, e, lambda_min);
}

ModelTree ModelTree::balanced_jittered(int depth, double p_del, double p_ins, double lambda_min,
                                       int tau_max, RngStream& rng) {
  if (tau_max < 1) throw std::invalid_argument("tau_max must be >= 1");
  ModelTree t = balanced_skeleton(depth, lambda_min);
  for (int id = 1; id < t.size(); ++id) {
    int tau = 1 + static_cast<int>(rng.below(tau_max));
    t.nodes_[id].edge = {p_sub_for_length(tau * lambda_min, p_del, p_ins), p_del, p_ins};
  }
  return t;
}

}  // namespace indelphy
