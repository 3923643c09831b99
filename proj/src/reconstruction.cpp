#include "indelphy/reconstruction.hpp"

#include <algorithm>
#include <cmath>

namespace indelphy {

QuartetSplit four_point_method(const std::array<std::array<double, 4>, 4>& D) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (!std::isfinite(D[i][j])) {
        throw std::invalid_argument("four_point_method: non-finite dissimilarity entry");
      }
    }
  }
  double sums[3] = {D[0][1] + D[2][3], D[0][2] + D[1][3], D[0][3] + D[1][2]};
  int best = 0;
  if (sums[1] < sums[best]) best = 1;
  if (sums[2] < sums[best]) best = 2;
  double second = kInfDistance;
  for (int i = 0; i < 3; ++i) {
    if (i != best) second = std::min(second, sums[i]);
  }
  QuartetSplit q;
  q.split = static_cast<QuartetTopology>(best);
  q.margin = second - sums[best];
  return q;
}

bool is_short_quartet(const std::array<QuartetPairEstimate, 6>& pairs, int level,
                      int phase1_height, double r) {
  for (const auto& pe : pairs) {
    if (!std::isfinite(pe.value)) return false;
    if (level < phase1_height) {
      if (pe.value > r) return false;
    } else {
      if (diameter_test(pe.entries, r) != 1) return false;
    }
  }
  return true;
}

double three_point(double d_ab, double d_ac, double d_bc) {
  return 0.5 * (d_ab + d_ac - d_bc);
}

long long grid_multiple(double x, double lambda_min) {
  if (lambda_min <= 0.0) throw std::invalid_argument("grid_multiple: lambda_min must be positive");
  if (!std::isfinite(x)) throw std::invalid_argument("grid_multiple: non-finite length");
  // The nudge makes decimal halfway cases round up despite binary rounding.
  long long m = static_cast<long long>(std::floor(x / lambda_min + 0.5 + 1e-9));
  return m < 1 ? 1 : m;
}

double round_to_grid(double x, double lambda_min) {
  return static_cast<double>(grid_multiple(x, lambda_min)) * lambda_min;
}

SignatureSource::SignatureSource(std::vector<SignatureVector> leaf_sigs)
    : sigs_(std::move(leaf_sigs)) {}

double SignatureSource::leaf_distance(int x, int y) {
  return shallow_distance(shallow_correlation(sigs_.at(x), sigs_.at(y)));
}

DeepEstimate SignatureSource::root_estimate(int u, int v, const KnownDistances& dists,
                                            int offset) {
  return deep_distance(u, v, offset, sigs_, dists);
}

DeepEstimate OracleSource::root_estimate(int u, int v, const KnownDistances& dists,
                                         int /*offset*/) {
  int ru = dists.representative_leaf(u), rv = dists.representative_leaf(v);
  DeepEstimate de;
  de.d_hat = metric_(ru, rv) - dists.distance(u, ru) - dists.distance(v, rv);
  de.entries = {de.d_hat};
  return de;
}

std::vector<std::pair<int, int>> pick_cherries(int n_roots,
                                               const std::vector<QuartetSplit>& splits,
                                               const std::function<bool(int, int)>& pairable) {
  std::vector<int> witnessed(static_cast<size_t>(n_roots) * n_roots, 0);
  std::vector<uint8_t> separated(static_cast<size_t>(n_roots) * n_roots, 0);
  auto wit = [&witnessed, n_roots](int i, int j) -> int& {
    return witnessed[static_cast<size_t>(i) * n_roots + j];
  };
  auto sep = [&separated, n_roots](int i, int j) -> uint8_t& {
    return separated[static_cast<size_t>(i) * n_roots + j];
  };
  for (const auto& q : splits) {
    int a = q.taxa[0], b = q.taxa[1], c = q.taxa[2], d = q.taxa[3];
    std::pair<int, int> same1, same2;
    switch (q.split) {
      case QuartetTopology::kABxCD: same1 = {a, b}; same2 = {c, d}; break;
      case QuartetTopology::kACxBD: same1 = {a, c}; same2 = {b, d}; break;
      case QuartetTopology::kADxBC: same1 = {a, d}; same2 = {b, c}; break;
    }
    for (auto [x, y] : {same1, same2}) {
      ++wit(x, y);
      ++wit(y, x);
    }
    for (int x : {same1.first, same1.second}) {
      for (int y : {same2.first, same2.second}) {
        sep(x, y) = sep(y, x) = 1;
      }
    }
  }
  // Candidates in decreasing witness support, then index order; greedy
  // disjoint selection.
  std::vector<std::pair<int, int>> candidates;
  for (int i = 0; i < n_roots; ++i) {
    for (int j = i + 1; j < n_roots; ++j) {
      if (wit(i, j) > 0 && !sep(i, j) && (!pairable || pairable(i, j))) {
        candidates.emplace_back(i, j);
      }
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const std::pair<int, int>& p, const std::pair<int, int>& q) {
                     return wit(p.first, p.second) > wit(q.first, q.second);
                   });
  std::vector<std::pair<int, int>> cherries;
  std::vector<uint8_t> used(n_roots, 0);
  for (auto [i, j] : candidates) {
    if (used[i] || used[j]) continue;
    cherries.emplace_back(i, j);
    used[i] = used[j] = 1;
  }
  return cherries;
}

namespace {

using PairData = QuartetPairEstimate;

std::string side_string(const KnownDistances& kd, int u, int v) {
  std::string a = kd.smallest_label(u), b = kd.smallest_label(v);
  if (b < a) std::swap(a, b);
  return a + "," + b;
}

}  // namespace

ReconstructionResult tree_reconstruct(const std::vector<std::string>& labels, PairSource& source,
                                      const ReconstructionConfig& config,
                                      std::vector<std::string>* decision_log) {
  const int n = static_cast<int>(labels.size());
  if (n < 4) throw std::invalid_argument("tree_reconstruct: need at least 4 leaves");
  if (config.lambda_min <= 0.0) throw std::invalid_argument("tree_reconstruct: lambda_min");
  for (int i = 1; i < n; ++i) {
    if (!(labels[i - 1] < labels[i])) {
      throw std::invalid_argument("tree_reconstruct: labels must be sorted and unique");
    }
  }

  const double log2log2n = std::log2(std::log2(static_cast<double>(n)));
  const int phase1_height =
      std::max(1, static_cast<int>(std::ceil(config.delta * log2log2n - 1e-12)));
  const int deep_offset = config.deep_offset > 0 ? config.deep_offset : phase1_height;
  const double r = config.r > 0.0 ? config.r : 2.0 * config.delta * log2log2n;
  const double lam = config.lambda_min;

  ReconstructionResult result;
  KnownDistances kd(lam);
  std::vector<int> roots;
  roots.reserve(n);
  for (const auto& label : labels) roots.push_back(kd.add_leaf(label));

  const bool keep_decision_log = decision_log != nullptr;
  auto log_line = [&](std::string s) {
    if (decision_log != nullptr) decision_log->push_back(std::move(s));
  };

  int h = 0;
  auto pair_data = [&](int u, int v, bool phase1) {
    PairData pd;
    if (phase1) {
      // Root-to-root distance from the coherent reconstructed-signature
      // correlation (offset-0 deep estimate): legs enter as e^{d} weights
      // inside Chat rather than as per-pair log corrections.
      DeepEstimate de = source.root_estimate(u, v, kd, 0);
      pd.value = de.d_hat;
      pd.entries = std::move(de.entries);
    } else {
      int off = std::min({deep_offset, kd.min_leaf_offset(u), kd.min_leaf_offset(v)});
      DeepEstimate de = source.root_estimate(u, v, kd, off);
      pd.value = de.d_hat;
      pd.entries = std::move(de.entries);
    }
    return pd;
  };

  while (roots.size() > 3) {
    const int nr = static_cast<int>(roots.size());
    std::sort(roots.begin(), roots.end(), [&kd](int a, int b) {
      return kd.smallest_label(a) < kd.smallest_label(b);
    });
    const bool phase1 = h < phase1_height;

    std::vector<PairData> pairs(static_cast<size_t>(nr) * nr);
    auto pair_at = [&](int i, int j) -> PairData& {
      return pairs[static_cast<size_t>(std::min(i, j)) * nr + std::max(i, j)];
    };
    for (int i = 0; i < nr; ++i) {
      for (int j = i + 1; j < nr; ++j) pair_at(i, j) = pair_data(roots[i], roots[j], phase1);
    }

    std::vector<QuartetSplit> splits;
    for (int a = 0; a < nr; ++a) {
      for (int b = a + 1; b < nr; ++b) {
        for (int c = b + 1; c < nr; ++c) {
          for (int d = c + 1; d < nr; ++d) {
            const std::array<int, 4> q{a, b, c, d};
            std::array<QuartetPairEstimate, 6> qpairs;
            int qi = 0;
            for (int i = 0; i < 4; ++i) {
              for (int j = i + 1; j < 4; ++j) qpairs[qi++] = pair_at(q[i], q[j]);
            }
            bool is_short = is_short_quartet(qpairs, h, phase1_height, r);
            std::string ids;
            if (keep_decision_log) {
              for (int i = 0; i < 4; ++i) {
                if (i) ids += ',';
                ids += kd.smallest_label(roots[q[i]]);
              }
            }
            if (!is_short) {
              log_line("h=" + std::to_string(h) + " quartet=" + ids + " split=- short=0");
              continue;
            }
            std::array<std::array<double, 4>, 4> D{};
            for (int i = 0; i < 4; ++i) {
              for (int j = i + 1; j < 4; ++j) {
                D[i][j] = D[j][i] = pair_at(q[i], q[j]).value;
              }
            }
            QuartetSplit qs = four_point_method(D);
            qs.taxa = q;
            splits.push_back(qs);
            if (keep_decision_log) {
              static const char* kSplitNames[] = {"ab|cd", "ac|bd", "ad|bc"};
              log_line("h=" + std::to_string(h) + " quartet=" + ids +
                       " split=" + kSplitNames[static_cast<int>(qs.split)] + " short=1");
            }
          }
        }
      }
    }

    std::function<bool(int, int)> pairable;
    if (config.require_balanced) {
      pairable = [&](int i, int j) {
        return kd.min_leaf_offset(roots[i]) == kd.min_leaf_offset(roots[j]);
      };
    }
    std::vector<std::pair<int, int>> cherries = pick_cherries(nr, splits, pairable);
    if (cherries.empty()) {
      if (keep_decision_log) {
        std::vector<uint8_t> witnessed(static_cast<size_t>(nr) * nr, 0);
        std::vector<uint8_t> separated(static_cast<size_t>(nr) * nr, 0);
        for (const auto& qs : splits) {
          const auto& t = qs.taxa;
          std::pair<int, int> same1, same2;
          switch (qs.split) {
            case QuartetTopology::kABxCD: same1 = {t[0], t[1]}; same2 = {t[2], t[3]}; break;
            case QuartetTopology::kACxBD: same1 = {t[0], t[2]}; same2 = {t[1], t[3]}; break;
            case QuartetTopology::kADxBC: same1 = {t[0], t[3]}; same2 = {t[1], t[2]}; break;
          }
          for (auto [x, y] : {same1, same2}) {
            witnessed[x * nr + y] = witnessed[y * nr + x] = 1;
          }
          for (int x : {same1.first, same1.second}) {
            for (int y : {same2.first, same2.second}) {
              separated[x * nr + y] = separated[y * nr + x] = 1;
            }
          }
        }
        for (int i = 0; i < nr; ++i) {
          for (int j = i + 1; j < nr; ++j) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " D=%.4f witnessed=%d separated=%d",
                          pair_at(i, j).value, witnessed[i * nr + j], separated[i * nr + j]);
            log_line("h=" + std::to_string(h) + " pair=" +
                     side_string(kd, roots[i], roots[j]) + buf);
          }
        }
      }
      log_line("h=" + std::to_string(h) + " stall: no cherry among " + std::to_string(nr) +
               " subtrees");
      throw StallError(h, nr);
    }

    // Three-point edge lengths for each cherry, averaged over every third
    // node offered by a witnessing short quartet before grid rounding.
    auto cherry_edges = [&](int i, int j, long long* tau_i, long long* tau_j) {
      double sum_i = 0.0, sum_j = 0.0;
      int count = 0;
      const double d_uv = pair_at(i, j).value;
      for (const auto& qs : splits) {
        const auto& t = qs.taxa;
        std::pair<int, int> same1, same2;
        switch (qs.split) {
          case QuartetTopology::kABxCD: same1 = {t[0], t[1]}; same2 = {t[2], t[3]}; break;
          case QuartetTopology::kACxBD: same1 = {t[0], t[2]}; same2 = {t[1], t[3]}; break;
          case QuartetTopology::kADxBC: same1 = {t[0], t[3]}; same2 = {t[1], t[2]}; break;
        }
        auto matches = [&](std::pair<int, int> p) {
          return (p.first == i && p.second == j) || (p.first == j && p.second == i);
        };
        std::pair<int, int> thirds{-1, -1};
        if (matches(same1)) {
          thirds = same2;
        } else if (matches(same2)) {
          thirds = same1;
        } else {
          continue;
        }
        for (int w : {thirds.first, thirds.second}) {
          const double d_uw = pair_at(i, w).value;
          const double d_vw = pair_at(j, w).value;
          sum_i += three_point(d_uv, d_uw, d_vw);
          sum_j += three_point(d_uv, d_vw, d_uw);
          ++count;
        }
      }
      *tau_i = grid_multiple(sum_i / count, lam);
      *tau_j = grid_multiple(sum_j / count, lam);
    };

    std::vector<int> next_roots;
    std::vector<uint8_t> paired(nr, 0);
    for (auto [i, j] : cherries) {
      long long tau_u = 0, tau_v = 0;
      cherry_edges(i, j, &tau_u, &tau_v);
      int p = kd.join(roots[i], roots[j], static_cast<double>(tau_u) * lam,
                      static_cast<double>(tau_v) * lam, tau_u, tau_v);
      next_roots.push_back(p);
      paired[i] = paired[j] = 1;
    }
    for (int i = 0; i < nr; ++i) {
      if (!paired[i]) next_roots.push_back(roots[i]);
    }
    roots = std::move(next_roots);
    ++h;
  }

  // Terminal join: two subtrees share one edge; three meet at one vertex
  // whose edge lengths come from the three-point rule.
  std::sort(roots.begin(), roots.end(), [&kd](int a, int b) {
    return kd.smallest_label(a) < kd.smallest_label(b);
  });
  const bool phase1 = h < phase1_height;
  ReconstructedTree rt;
  rt.top_roots = roots;
  if (roots.size() == 2) {
    PairData fin = pair_data(roots[0], roots[1], phase1);
    if (!std::isfinite(fin.value)) {
      log_line("h=" + std::to_string(h) + " stall: non-finite terminal estimate between " +
               side_string(kd, roots[0], roots[1]));
      throw StallError(h, 2);
    }
    rt.top_taus = {grid_multiple(fin.value, lam), 0};
  } else {
    double d01 = pair_data(roots[0], roots[1], phase1).value;
    double d02 = pair_data(roots[0], roots[2], phase1).value;
    double d12 = pair_data(roots[1], roots[2], phase1).value;
    if (!std::isfinite(d01) || !std::isfinite(d02) || !std::isfinite(d12)) {
      log_line("h=" + std::to_string(h) + " stall: non-finite terminal estimate among three "
               "subtrees");
      throw StallError(h, 3);
    }
    rt.top_taus = {grid_multiple(three_point(d01, d02, d12), lam),
                   grid_multiple(three_point(d01, d12, d02), lam),
                   grid_multiple(three_point(d02, d12, d01), lam)};
  }
  rt.forest = std::move(kd);
  result.tree = std::move(rt);
  return result;
}

LabeledTree ReconstructedTree::to_labeled_tree() const {
  LabeledTree t;
  const double lam = forest.lambda_min();
  std::function<int(int, double)> build = [&](int v, double edge_len) {
    int id = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    t.nodes[id].length = edge_len;
    if (forest.is_leaf(v)) {
      t.nodes[id].label = forest.label(v);
    } else {
      const auto& c = forest.children(v);
      for (int child : {c[0], c[1]}) {
        int cid = build(child, forest.edge_len(child));
        t.nodes[id].children.push_back(cid);
        t.nodes[cid].parent = id;
      }
    }
    return id;
  };

  if (top_roots.size() == 3) {
    // Root the emission at the terminal degree-3 vertex.
    t.nodes.emplace_back();
    t.root = 0;
    for (size_t i = 0; i < 3; ++i) {
      int cid = build(top_roots[i], static_cast<double>(top_taus[i]) * lam);
      t.nodes[t.root].children.push_back(cid);
      t.nodes[cid].parent = t.root;
    }
    return t;
  }

  // Two subtrees: root at an internal endpoint of the shared edge,
  // preferring the side holding the smallest leaf label.
  int top = top_roots[0], other = top_roots[1];
  long long tau = top_taus[0] + top_taus[1];
  if (forest.smallest_label(other) < forest.smallest_label(top)) std::swap(top, other);
  if (forest.is_leaf(top)) std::swap(top, other);
  t.root = build(top, 0.0);
  int oid = build(other, static_cast<double>(tau) * lam);
  t.nodes[t.root].children.push_back(oid);
  t.nodes[oid].parent = t.root;
  return t;
}

std::string ReconstructedTree::to_newick() const { return emit_newick_canonical(to_labeled_tree()); }

ReconstructionResult tree_reconstruct_from_signatures(const std::vector<std::string>& labels,
                                                      std::vector<SignatureVector> leaf_sigs,
                                                      const ReconstructionConfig& config,
                                                      std::vector<std::string>* decision_log) {
  if (labels.size() != leaf_sigs.size()) {
    throw std::invalid_argument("labels and signature vectors must align");
  }
  std::vector<int> order(labels.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&labels](int a, int b) { return labels[a] < labels[b]; });
  std::vector<std::string> sorted_labels;
  std::vector<SignatureVector> sorted_sigs;
  sorted_labels.reserve(labels.size());
  sorted_sigs.reserve(labels.size());
  for (int idx : order) {
    sorted_labels.push_back(labels[idx]);
    sorted_sigs.push_back(std::move(leaf_sigs[idx]));
  }
  SignatureSource source(std::move(sorted_sigs));
  return tree_reconstruct(sorted_labels, source, config, decision_log);
}

ReconstructionResult tree_reconstruct_oracle(const std::vector<std::string>& labels,
                                             std::function<double(int, int)> leaf_metric,
                                             const ReconstructionConfig& config,
                                             std::vector<std::string>* decision_log) {
  std::vector<int> order(labels.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&labels](int a, int b) { return labels[a] < labels[b]; });
  std::vector<std::string> sorted_labels;
  sorted_labels.reserve(labels.size());
  for (int idx : order) sorted_labels.push_back(labels[idx]);
  OracleSource source([order, metric = std::move(leaf_metric)](int x, int y) {
    return metric(order[x], order[y]);
  });
  return tree_reconstruct(sorted_labels, source, config, decision_log);
}

}  // namespace indelphy
