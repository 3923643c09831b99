#include "indelphy/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace indelphy {

CorrelationEstimate shallow_correlation(const SignatureVector& sa, const SignatureVector& sb) {
  if (sa.block_count() != sb.block_count()) {
    throw std::invalid_argument("shallow_correlation: mismatched block counts");
  }
  const uint64_t L = sa.block_count();
  double sum = 0.0;
  for (uint64_t i = 0; i + 1 < L; i += 2) sum += sa.values[i] * sb.values[i];  // blocks 1,3,...,L-1
  CorrelationEstimate c;
  c.value = 2.0 * sum / static_cast<double>(L);
  c.pair = {sa.node, sb.node};
  if (sa.mode == SignatureMode::kPseudoBlock || sb.mode == SignatureMode::kPseudoBlock) {
    c.source = EstimateSource::kLeafPseudoSig;
  }
  return c;
}

double shallow_distance(const CorrelationEstimate& c) {
  if (!(c.value > 0.0)) return kInfDistance;
  return -std::log(4.0 * c.value);
}

int KnownDistances::add_leaf(const std::string& label) {
  NodeRec rec;
  rec.label = label;
  rec.smallest = label;
  nodes_.push_back(std::move(rec));
  return size() - 1;
}

int KnownDistances::join(int left, int right, double len_left, double len_right,
                         long long tau_left, long long tau_right) {
  NodeRec rec;
  rec.children = {left, right};
  rec.smallest = std::min(nodes_[left].smallest, nodes_[right].smallest);
  int id = size();
  nodes_.push_back(std::move(rec));
  nodes_[left].parent = id;
  nodes_[left].len = len_left;
  nodes_[left].tau = tau_left;
  nodes_[right].parent = id;
  nodes_[right].len = len_right;
  nodes_[right].tau = tau_right;
  return id;
}

double KnownDistances::distance(int ancestor, int descendant) const {
  double d = 0.0;
  int v = descendant;
  while (v != ancestor) {
    if (v < 0) throw std::runtime_error("KnownDistances: node is not a descendant of ancestor");
    d += nodes_[v].len;
    v = nodes_[v].parent;
  }
  return d;
}

std::vector<int> KnownDistances::descendants_at_offset(int a, int offset) const {
  std::vector<int> frontier{a};
  for (int step = 0; step < offset; ++step) {
    std::vector<int> next;
    next.reserve(frontier.size() * 2);
    for (int v : frontier) {
      if (is_leaf(v)) continue;
      next.push_back(nodes_[v].children[0]);
      next.push_back(nodes_[v].children[1]);
    }
    frontier = std::move(next);
  }
  return frontier;
}

std::vector<int> KnownDistances::leaves_under(int a) const {
  std::vector<int> out, stack{a};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (is_leaf(v)) {
      out.push_back(v);
    } else {
      stack.push_back(nodes_[v].children[1]);
      stack.push_back(nodes_[v].children[0]);
    }
  }
  return out;
}

int KnownDistances::min_leaf_offset(int a) const {
  if (is_leaf(a)) return 0;
  return 1 + std::min(min_leaf_offset(nodes_[a].children[0]),
                      min_leaf_offset(nodes_[a].children[1]));
}

const std::string& KnownDistances::smallest_label(int a) const { return nodes_[a].smallest; }

int KnownDistances::representative_leaf(int a) const {
  while (!is_leaf(a)) {
    const auto& c = nodes_[a].children;
    a = nodes_[c[0]].smallest <= nodes_[c[1]].smallest ? c[0] : c[1];
  }
  return a;
}

KnownDistances KnownDistances::from_model_tree(const ModelTree& tree) {
  KnownDistances kd(tree.lambda_min());
  kd.nodes_.resize(tree.size());
  for (int id = 0; id < tree.size(); ++id) {
    const auto& n = tree.node(id);
    kd.nodes_[id].parent = n.parent;
    kd.nodes_[id].children = n.children;
    kd.nodes_[id].label = n.label;
    if (id > 0) kd.nodes_[id].len = tree.edge_lambda(id);
  }
  for (int id = tree.size() - 1; id >= 0; --id) {
    auto& rec = kd.nodes_[id];
    rec.smallest = rec.children[0] < 0
                       ? rec.label
                       : std::min(kd.nodes_[rec.children[0]].smallest,
                                  kd.nodes_[rec.children[1]].smallest);
  }
  return kd;
}

double pair_estimate(const CorrelationEstimate& chat, double d_aj_a, double d_bj_b) {
  if (!(chat.value > 0.0)) return kInfDistance;
  return -(d_aj_a + d_bj_b) - std::log(4.0 * chat.value);
}

SignatureVector reconstruct_signature(const std::vector<SignatureVector>& leaf_sigs,
                                      const std::vector<int>& leaves_of_a,
                                      const std::vector<double>& dist_to_a, int a) {
  if (leaves_of_a.empty()) throw std::invalid_argument("reconstruct_signature: empty leaf set");
  if (leaves_of_a.size() != dist_to_a.size()) {
    throw std::invalid_argument("reconstruct_signature: missing distance entry");
  }
  const SignatureVector& first = leaf_sigs.at(leaves_of_a[0]);
  SignatureVector out;
  out.node = a;
  out.mode = first.mode;
  out.block_len_used = first.block_len_used;
  out.values.assign(first.block_count(), 0.0);
  for (size_t xi = 0; xi < leaves_of_a.size(); ++xi) {
    const SignatureVector& sx = leaf_sigs.at(leaves_of_a[xi]);
    if (sx.block_count() != out.block_count()) {
      throw std::invalid_argument("reconstruct_signature: mismatched block counts");
    }
    double w = std::exp(dist_to_a[xi]);
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += w * sx.values[i];
  }
  double inv = 1.0 / static_cast<double>(leaves_of_a.size());
  for (double& v : out.values) v *= inv;
  return out;
}

CorrelationEstimate deep_correlation(const SignatureVector& sa_hat,
                                     const SignatureVector& sb_hat) {
  CorrelationEstimate c = shallow_correlation(sa_hat, sb_hat);
  c.source = EstimateSource::kReconstructedSig;
  return c;
}

namespace {

double entry_gap(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return kInfDistance;
  return std::abs(a - b);
}

}  // namespace

DeepAggregate aggregate_deep(const std::vector<double>& entries) {
  const size_t m = entries.size();
  if (m < 3) throw std::invalid_argument("aggregate_deep: need at least 3 entries");
  bool any_finite = false;
  for (double e : entries) any_finite |= std::isfinite(e);
  if (!any_finite) throw std::runtime_error("aggregate_deep: all entries infinite");

  const size_t need = (2 * m + 2) / 3;  // ceil(2m/3)
  DeepAggregate out;
  out.radii.resize(m);
  std::vector<double> gaps;
  gaps.reserve(m - 1);
  for (size_t j = 0; j < m; ++j) {
    gaps.clear();
    for (size_t j2 = 0; j2 < m; ++j2) {
      if (j2 != j) gaps.push_back(entry_gap(entries[j], entries[j2]));
    }
    std::sort(gaps.begin(), gaps.end());
    out.radii[j] = gaps[need - 1];  // achieved minimum radius
    if (out.winner < 0 || out.radii[j] < out.radii[out.winner]) out.winner = static_cast<int>(j);
  }
  // No entry captured the quorum within a finite radius: the aggregate has
  // no certified value and propagates the failure sentinel.
  out.d_hat = std::isfinite(out.radii[out.winner]) ? entries[out.winner] : kInfDistance;
  return out;
}

int diameter_test(const std::vector<double>& entries, double r) {
  if (entries.empty()) throw std::invalid_argument("diameter_test: empty entry list");
  size_t within = 0;
  for (double e : entries) {
    if (std::abs(e) <= r) ++within;
  }
  return within >= (entries.size() + 1) / 2 ? 1 : 0;
}

DeepEstimate deep_distance(int a, int b, int h, const std::vector<SignatureVector>& leaf_sigs,
                           const KnownDistances& dists) {
  auto reconstructed = [&](int v) {
    std::vector<int> leaves = dists.leaves_under(v);
    std::vector<double> d(leaves.size());
    for (size_t i = 0; i < leaves.size(); ++i) d[i] = dists.distance(v, leaves[i]);
    return reconstruct_signature(leaf_sigs, leaves, d, v);
  };

  DeepEstimate out;
  out.offset_used = h;
  if (h == 0) {
    CorrelationEstimate chat = deep_correlation(reconstructed(a), reconstructed(b));
    out.entries = {pair_estimate(chat, 0.0, 0.0)};
    out.d_hat = out.entries[0];
    return out;
  }

  std::vector<int> as = dists.descendants_at_offset(a, h);
  std::vector<int> bs = dists.descendants_at_offset(b, h);
  const size_t expected = size_t{1} << h;
  if (as.size() != expected || bs.size() != expected) {
    throw std::runtime_error("deep_distance: insufficient depth below one of the nodes");
  }
  out.entries.resize(expected);
  size_t finite = 0;
  for (size_t j = 0; j < expected; ++j) {
    CorrelationEstimate chat = deep_correlation(reconstructed(as[j]), reconstructed(bs[j]));
    out.entries[j] =
        pair_estimate(chat, dists.distance(a, as[j]), dists.distance(b, bs[j]));
    finite += std::isfinite(out.entries[j]);
  }
  if (finite == 0) {
    out.d_hat = kInfDistance;  // every pair estimate failed; nothing to aggregate
  } else if (expected >= 3) {
    out.d_hat = aggregate_deep(out.entries).d_hat;
  } else {
    // Too few samples for the radius rule; fall back to the finite mean.
    double sum = 0.0;
    size_t n_finite = 0;
    for (double e : out.entries) {
      if (std::isfinite(e)) {
        sum += e;
        ++n_finite;
      }
    }
    out.d_hat = n_finite > 0 ? sum / static_cast<double>(n_finite) : kInfDistance;
  }
  return out;
}

std::string distance_dump_line(const std::string& a, const std::string& b, double estimate,
                               EstimateSource source) {
  const char* src = source == EstimateSource::kTrueSig          ? "true-sig"
                    : source == EstimateSource::kLeafPseudoSig ? "leaf-pseudo-sig"
                                                                : "reconstructed-sig";
  char buf[64];
  if (std::isfinite(estimate)) {
    std::snprintf(buf, sizeof buf, "%.9g", estimate);
  } else {
    std::snprintf(buf, sizeof buf, "inf");
  }
  return a + "\t" + b + "\t" + buf + "\t" + src;
}

}  // namespace indelphy
