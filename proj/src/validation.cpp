#include "indelphy/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "indelphy/estimators.hpp"
#include "indelphy/parallel.hpp"
#include "indelphy/signatures.hpp"

namespace indelphy {

namespace {

double log2n(const ModelTree& tree) { return std::log2(static_cast<double>(tree.n_leaves())); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Sorted (lineage id, position) view of one node's string.
std::vector<std::pair<uint64_t, uint32_t>> indexed_ids(const std::vector<uint64_t>& ids) {
  std::vector<std::pair<uint64_t, uint32_t>> v(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) v[i] = {ids[i], static_cast<uint32_t>(i)};
  std::sort(v.begin(), v.end());
  return v;
}

double max_shift_merged(const std::vector<std::pair<uint64_t, uint32_t>>& a,
                        const std::vector<std::pair<uint64_t, uint32_t>>& b, double eta_a,
                        double eta_b) {
  double max_shift = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      double shift = std::abs(static_cast<double>(b[j].second + 1) / eta_b -
                              static_cast<double>(a[i].second + 1) / eta_a);
      if (shift > max_shift) max_shift = shift;
      ++i;
      ++j;
    }
  }
  return max_shift;
}

// Statistic of the block-balance check for one string: max over dyadic
// non-overlapping windows of |zeros - m/2| / sqrt(m).
double block_balance_statistic(const Bitstring& bits) {
  double stat = 0.0;
  for (uint64_t m = 1; m <= bits.size(); m <<= 1) {
    for (uint64_t lo = 0; lo + m <= bits.size(); lo += m) {
      double dev = std::abs(static_cast<double>(bits.count_zeros(lo, lo + m)) -
                            static_cast<double>(m) / 2.0) /
                   std::sqrt(static_cast<double>(m));
      if (dev > stat) stat = dev;
    }
  }
  return stat;
}

}  // namespace

std::string CheckReport::tsv_line() const {
  std::ostringstream os;
  os << check << '\t' << fmt(statistic) << '\t' << fmt(bound) << '\t' << fmt(pass_fraction)
     << '\t' << (pass ? "pass" : "FAIL") << '\t' << sample_size << '\t' << details;
  return os.str();
}

std::string CheckReport::json_object() const {
  std::ostringstream os;
  os << "{\"check\":\"" << check << "\",\"statistic\":" << fmt(statistic)
     << ",\"bound\":" << fmt(bound) << ",\"pass_fraction\":" << fmt(pass_fraction)
     << ",\"pass\":" << (pass ? "true" : "false") << ",\"sample_size\":" << sample_size
     << ",\"details\":\"" << details << "\"}";
  return os.str();
}

std::string reports_tsv(const std::vector<CheckReport>& reports) {
  std::string out = "check\tstatistic\tbound\tpass_fraction\tstatus\tsample_size\tdetails\n";
  for (const auto& r : reports) {
    out += r.tsv_line();
    out += '\n';
  }
  return out;
}

std::string reports_json(const std::vector<CheckReport>& reports) {
  std::string out = "[";
  for (size_t i = 0; i < reports.size(); ++i) {
    if (i) out += ',';
    out += reports[i].json_object();
  }
  out += "]\n";
  return out;
}

CheckReport check_lengths(const TrialBatch& batch) {
  CheckReport rep;
  rep.check = "lengths";
  rep.sample_size = batch.trials;
  const bool asym = batch.asym;
  std::vector<uint8_t> ok(batch.trials, 0);
  std::vector<double> worst(batch.trials, 0.0);

  run_trials(batch.trials, batch.threads, [&](int t) {
    auto assign = evolve_tree(batch.tree, batch.k_root, batch.seed, t, false);
    if (!asym) {
      uint64_t lo = batch.k_ref, hi = 4 * batch.k_ref;
      bool in_range = true;
      double dev = 0.0;
      for (const auto& bits : assign.bits) {
        in_range = in_range && bits.size() >= lo && bits.size() <= hi;
        dev = std::max(dev, std::abs(static_cast<double>(bits.size()) /
                                         static_cast<double>(batch.k_root) -
                                     1.0));
      }
      ok[t] = in_range;
      worst[t] = dev;
    } else {
      double dev = 0.0;
      for (int v = 0; v < batch.tree.size(); ++v) {
        double ratio = static_cast<double>(assign.bits[v].size()) /
                       (batch.tree.eta(v) * static_cast<double>(batch.k_root));
        dev = std::max(dev, std::abs(ratio - 1.0));
      }
      worst[t] = dev;
      // Accumulated per-edge Azuma envelope at t = log2 n.
      double envelope = batch.tree.depth_max() * 2.0 * log2n(batch.tree) /
                        std::sqrt(static_cast<double>(batch.k_root));
      ok[t] = dev <= envelope * batch.slack;
    }
  });

  int passed = 0;
  for (int t = 0; t < batch.trials; ++t) {
    passed += ok[t];
    rep.statistic = std::max(rep.statistic, worst[t]);
  }
  rep.pass_fraction = static_cast<double>(passed) / batch.trials;
  rep.bound = asym ? batch.slack * batch.tree.depth_max() * 2.0 * log2n(batch.tree) /
                         std::sqrt(static_cast<double>(batch.k_root))
                   : 4.0 * static_cast<double>(batch.k_ref);
  rep.pass = rep.pass_fraction >= 0.99;
  rep.details = std::string(asym ? "mode=asym" : "mode=sym") +
                " max_deviation=" + fmt(rep.statistic);
  return rep;
}

CheckReport check_bitshifts(const TrialBatch& batch) {
  CheckReport rep;
  rep.check = "bitshifts";
  rep.sample_size = batch.trials;
  const double bound =
      4.0 * log2n(batch.tree) * log2n(batch.tree) * std::sqrt(static_cast<double>(batch.k_ref));
  rep.bound = bound * batch.slack;

  std::vector<double> per_trial(batch.trials, 0.0);
  run_trials(batch.trials, batch.threads, [&](int t) {
    auto assign = evolve_tree(batch.tree, batch.k_root, batch.seed, t, true);
    const int n_nodes = batch.tree.size();
    std::vector<std::vector<std::pair<uint64_t, uint32_t>>> indexed(n_nodes);
    std::vector<double> etas(n_nodes);
    for (int v = 0; v < n_nodes; ++v) {
      indexed[v] = indexed_ids(assign.lineage[v]);
      etas[v] = batch.tree.eta(v);
    }
    double max_shift = 0.0;
    for (int a = 0; a < n_nodes; ++a) {
      for (int b = a + 1; b < n_nodes; ++b) {
        max_shift =
            std::max(max_shift, max_shift_merged(indexed[a], indexed[b], etas[a], etas[b]));
      }
    }
    per_trial[t] = max_shift;
  });

  int passed = 0;
  for (double s : per_trial) {
    rep.statistic = std::max(rep.statistic, s);
    passed += s <= rep.bound;
  }
  rep.pass_fraction = static_cast<double>(passed) / batch.trials;
  rep.pass = rep.pass_fraction >= 0.99;
  rep.details = "max_shift=" + fmt(rep.statistic);
  return rep;
}

CheckReport check_block_balance(const TrialBatch& batch) {
  CheckReport rep;
  rep.check = "block_balance";
  rep.sample_size = batch.trials;
  rep.bound = log2n(batch.tree) * batch.slack;

  std::vector<double> per_trial(batch.trials, 0.0);
  run_trials(batch.trials, batch.threads, [&](int t) {
    auto assign = evolve_tree(batch.tree, batch.k_root, batch.seed, t, false);
    double stat = 0.0;
    for (const auto& bits : assign.bits) stat = std::max(stat, block_balance_statistic(bits));
    per_trial[t] = stat;
  });

  int passed = 0;
  for (double s : per_trial) {
    rep.statistic = std::max(rep.statistic, s);
    passed += s <= rep.bound;
  }
  rep.pass_fraction = static_cast<double>(passed) / batch.trials;
  rep.pass = rep.pass_fraction >= 0.99;
  rep.details = "max_excess=" + fmt(rep.statistic);
  return rep;
}

namespace {

std::vector<SignatureVector> leaf_signatures(const TrialBatch& batch,
                                             const SequenceAssignment& assign, bool* degenerate) {
  BlockScheme scheme = block_scheme(batch.k_ref, batch.zeta);
  std::vector<SignatureVector> sigs(batch.tree.size());
  for (int leaf : batch.tree.leaf_ids()) {
    try {
      sigs[leaf] = batch.asym ? pseudo_signature_vector(assign.bits[leaf], scheme.L, leaf)
                              : signature_vector(assign.bits[leaf], scheme, leaf);
    } catch (const InsufficientLength&) {
      if (degenerate) *degenerate = true;
    }
  }
  return sigs;
}

}  // namespace

CheckReport check_unbiasedness(const TrialBatch& batch, double max_pair_distance,
                               bool condition_on_regularity) {
  CheckReport rep;
  rep.check = "unbiasedness";
  rep.sample_size = batch.trials;
  rep.bound = 0.1 * batch.slack;

  std::vector<std::pair<int, int>> pairs;
  const auto& leaves = batch.tree.leaf_ids();
  for (size_t i = 0; i < leaves.size(); ++i) {
    for (size_t j = i + 1; j < leaves.size(); ++j) {
      if (batch.tree.path_distance(leaves[i], leaves[j]) <= max_pair_distance) {
        pairs.emplace_back(leaves[i], leaves[j]);
      }
    }
  }
  if (pairs.empty()) {
    rep.details = "no pairs within distance cap";
    rep.pass = false;
    return rep;
  }

  const double shift_bound =
      4.0 * log2n(batch.tree) * log2n(batch.tree) * std::sqrt(static_cast<double>(batch.k_ref));
  std::vector<std::vector<double>> ratios(batch.trials);
  std::vector<uint8_t> degenerate(batch.trials, 0);
  std::vector<uint8_t> regular(batch.trials, 1);
  run_trials(batch.trials, batch.threads, [&](int t) {
    auto assign = evolve_tree(batch.tree, batch.k_root, batch.seed, t, condition_on_regularity);
    bool degen = false;
    auto sigs = leaf_signatures(batch, assign, &degen);
    degenerate[t] = degen;
    if (degen) return;
    if (condition_on_regularity) {
      bool ok = true;
      for (const auto& bits : assign.bits) {
        ok = ok && bits.size() >= batch.k_ref && bits.size() <= 4 * batch.k_ref;
        ok = ok && block_balance_statistic(bits) <= log2n(batch.tree);
      }
      const int n_nodes = batch.tree.size();
      std::vector<std::vector<std::pair<uint64_t, uint32_t>>> indexed(n_nodes);
      for (int v = 0; v < n_nodes && ok; ++v) indexed[v] = indexed_ids(assign.lineage[v]);
      for (int a = 0; a < n_nodes && ok; ++a) {
        for (int b = a + 1; b < n_nodes && ok; ++b) {
          ok = max_shift_merged(indexed[a], indexed[b], batch.tree.eta(a), batch.tree.eta(b)) <=
               shift_bound;
        }
      }
      regular[t] = ok;
    }
    ratios[t].resize(pairs.size());
    for (size_t p = 0; p < pairs.size(); ++p) {
      auto [a, b] = pairs[p];
      double c = shallow_correlation(sigs[a], sigs[b]).value;
      ratios[t][p] = 4.0 * c * std::exp(batch.tree.path_distance(a, b));
    }
  });

  double worst = 0.0, worst_cond = 0.0, worst_se = 0.0;
  int used = 0, used_cond = 0;
  for (size_t p = 0; p < pairs.size(); ++p) {
    double sum = 0.0, sum2 = 0.0, sum_cond = 0.0;
    int cnt = 0, cnt_cond = 0;
    for (int t = 0; t < batch.trials; ++t) {
      if (degenerate[t]) continue;
      sum += ratios[t][p];
      sum2 += ratios[t][p] * ratios[t][p];
      ++cnt;
      if (regular[t]) {
        sum_cond += ratios[t][p];
        ++cnt_cond;
      }
    }
    if (cnt == 0) continue;
    used = cnt;
    used_cond = cnt_cond;
    double mean = sum / cnt;
    double var = std::max(0.0, sum2 / cnt - mean * mean);
    if (std::abs(mean - 1.0) > worst) {
      worst = std::abs(mean - 1.0);
      worst_se = std::sqrt(var / cnt);
    }
    if (cnt_cond > 0) worst_cond = std::max(worst_cond, std::abs(sum_cond / cnt_cond - 1.0));
  }
  rep.statistic = worst;
  rep.pass = worst <= rep.bound;
  rep.pass_fraction = rep.pass ? 1.0 : 0.0;
  rep.details = "pairs=" + std::to_string(pairs.size()) + " trials_used=" + std::to_string(used) +
                " worst_gap=" + fmt(worst) + " se=" + fmt(worst_se);
  if (condition_on_regularity) {
    rep.details += " regular_trials=" + std::to_string(used_cond) +
                   " worst_gap_conditioned=" + fmt(worst_cond);
  }
  return rep;
}

CheckReport check_signature_variance(const TrialBatch& batch, int max_height, bool expect_growth) {
  CheckReport rep;
  rep.check = expect_growth ? "signature_variance_growth" : "signature_variance_bounded";
  rep.sample_size = batch.trials;

  KnownDistances kd = KnownDistances::from_model_tree(batch.tree);
  std::vector<std::vector<int>> nodes_at_height(max_height + 1);
  for (int v = 0; v < batch.tree.size(); ++v) {
    int height = batch.tree.depth_max() - batch.tree.node(v).depth;
    if (height >= 1 && height <= max_height && !batch.tree.is_leaf(v)) {
      nodes_at_height[height].push_back(v);
    }
  }

  std::vector<std::vector<double>> sums(batch.trials, std::vector<double>(max_height + 1, 0.0));
  std::vector<std::vector<int64_t>> counts(batch.trials,
                                           std::vector<int64_t>(max_height + 1, 0));
  run_trials(batch.trials, batch.threads, [&](int t) {
    auto assign = evolve_tree(batch.tree, batch.k_root, batch.seed, t, false);
    bool degen = false;
    auto sigs = leaf_signatures(batch, assign, &degen);
    if (degen) return;
    for (int height = 1; height <= max_height; ++height) {
      for (int v : nodes_at_height[height]) {
        std::vector<int> lv = kd.leaves_under(v);
        std::vector<double> dv(lv.size());
        for (size_t i = 0; i < lv.size(); ++i) dv[i] = kd.distance(v, lv[i]);
        SignatureVector shat = reconstruct_signature(sigs, lv, dv, v);
        for (double x : shat.values) {
          sums[t][height] += x * x;
          counts[t][height] += 1;
        }
      }
    }
  });

  std::vector<double> series(max_height + 1, 0.0);
  for (int height = 1; height <= max_height; ++height) {
    double s = 0.0;
    int64_t c = 0;
    for (int t = 0; t < batch.trials; ++t) {
      s += sums[t][height];
      c += counts[t][height];
    }
    series[height] = c > 0 ? s / static_cast<double>(c) : 0.0;
  }

  double lo = series[1], hi = series[1];
  double ratio_sum = 0.0;
  int ratio_count = 0;
  std::string series_txt;
  for (int height = 1; height <= max_height; ++height) {
    lo = std::min(lo, series[height]);
    hi = std::max(hi, series[height]);
    if (height > 1 && series[height - 1] > 0.0) {
      ratio_sum += series[height] / series[height - 1];
      ++ratio_count;
    }
    if (height > 1) series_txt += ',';
    series_txt += fmt(series[height]);
  }
  double maxmin = lo > 0.0 ? hi / lo : kInfDistance;
  double avg_ratio = ratio_count > 0 ? ratio_sum / ratio_count : 0.0;
  if (expect_growth) {
    rep.statistic = avg_ratio;
    rep.bound = 1.2;
    rep.pass = avg_ratio >= 1.2;
  } else {
    rep.statistic = maxmin;
    rep.bound = 4.0 * batch.slack;
    rep.pass = maxmin <= rep.bound;
  }
  rep.pass_fraction = rep.pass ? 1.0 : 0.0;
  rep.details = "series=" + series_txt;
  return rep;
}

CheckReport check_deep_distance(const TrialBatch& batch, int offset, double epsilon,
                                double max_pair_distance, double min_success) {
  CheckReport rep;
  rep.check = "deep_distance";
  rep.sample_size = batch.trials;
  rep.bound = epsilon;

  KnownDistances kd = KnownDistances::from_model_tree(batch.tree);
  auto is_ancestor = [&](int anc, int v) {
    while (v >= 0) {
      if (v == anc) return true;
      v = batch.tree.node(v).parent;
    }
    return false;
  };
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < batch.tree.size(); ++a) {
    for (int b = a + 1; b < batch.tree.size(); ++b) {
      if (batch.tree.is_leaf(a) || batch.tree.is_leaf(b)) continue;
      int ha = batch.tree.depth_max() - batch.tree.node(a).depth;
      int hb = batch.tree.depth_max() - batch.tree.node(b).depth;
      if (ha < offset || hb < offset) continue;
      // The estimator addresses disjoint subtrees, not nested ones.
      if (is_ancestor(a, b) || is_ancestor(b, a)) continue;
      double d = batch.tree.path_distance(a, b);
      if (d <= max_pair_distance && d > 0.0) pairs.emplace_back(a, b);
    }
  }
  if (pairs.empty()) {
    rep.details = "no eligible pairs";
    return rep;
  }

  std::vector<std::vector<uint8_t>> hit(batch.trials);
  run_trials(batch.trials, batch.threads, [&](int t) {
    auto assign = evolve_tree(batch.tree, batch.k_root, batch.seed, t, false);
    bool degen = false;
    auto sigs = leaf_signatures(batch, assign, &degen);
    hit[t].assign(pairs.size(), 0);
    if (degen) return;
    for (size_t p = 0; p < pairs.size(); ++p) {
      auto [a, b] = pairs[p];
      DeepEstimate de = deep_distance(a, b, offset, sigs, kd);
      double d = batch.tree.path_distance(a, b);
      hit[t][p] = std::isfinite(de.d_hat) && std::abs(de.d_hat - d) < epsilon;
    }
  });

  double min_rate = 1.0;
  for (size_t p = 0; p < pairs.size(); ++p) {
    int ok = 0;
    for (int t = 0; t < batch.trials; ++t) ok += hit[t][p];
    min_rate = std::min(min_rate, static_cast<double>(ok) / batch.trials);
  }
  rep.statistic = min_rate;
  rep.pass = min_rate >= min_success;
  rep.pass_fraction = min_rate;
  rep.details = "pairs=" + std::to_string(pairs.size()) + " offset=" + std::to_string(offset) +
                " epsilon=" + fmt(epsilon);
  return rep;
}

CheckReport check_pseudo_block_gap(const TrialBatch& base, const std::vector<uint64_t>& k_sweep) {
  CheckReport rep;
  rep.check = "pseudo_block_gap";
  rep.sample_size = base.trials * static_cast<int>(k_sweep.size());

  std::string medians_txt;
  std::vector<double> medians;
  for (uint64_t k : k_sweep) {
    TrialBatch batch = base;
    batch.k_ref = k;
    batch.k_root = k;
    BlockScheme scheme = block_scheme(batch.k_ref, batch.zeta);
    uint64_t l_ref = batch.k_ref / scheme.L;

    std::vector<double> per_trial(batch.trials, 0.0);
    run_trials(batch.trials, batch.threads, [&](int t) {
      auto assign = evolve_tree(batch.tree, batch.k_root, batch.seed, t, false);
      double gap = 0.0;
      for (int leaf : batch.tree.leaf_ids()) {
        uint64_t l_a = scaled_block_length(l_ref, batch.tree.eta(leaf));
        const Bitstring& bits = assign.bits[leaf];
        if (bits.size() < scheme.L || l_a < 1) continue;
        try {
          for (uint64_t i = 1; i <= scheme.L; ++i) {
            double s_true = internal_block_signature(bits, l_a, i);
            double s_pseudo = leaf_pseudo_signature(bits, scheme.L, i).value;
            gap = std::max(gap, std::abs(s_pseudo - s_true));
          }
        } catch (const InsufficientLength&) {
          // Short leaf: skip the tail blocks, keep the gap observed so far.
        }
      }
      per_trial[t] = gap;
    });
    std::sort(per_trial.begin(), per_trial.end());
    double median = per_trial[per_trial.size() / 2];
    medians.push_back(median);
    if (!medians_txt.empty()) medians_txt += ',';
    medians_txt += fmt(median);
  }

  bool decreasing = true;
  for (size_t i = 1; i < medians.size(); ++i) {
    decreasing = decreasing && medians[i] <= medians[i - 1] + 1e-12;
  }
  rep.statistic = medians.back();
  rep.bound = medians.front();
  rep.pass = decreasing;
  rep.pass_fraction = rep.pass ? 1.0 : 0.0;
  rep.details = "medians=" + medians_txt;
  return rep;
}

std::vector<CheckReport> run_validator_self_tests(uint64_t seed) {
  std::vector<CheckReport> out;

  {  // Deletion-dominated regime collapses lengths out of [k, 4k].
    TrialBatch batch;
    batch.tree = ModelTree::balanced(10, {0.0, 0.5, 0.0}, 1e-3);
    batch.k_ref = 1000;
    batch.k_root = 2000;
    batch.trials = 5;
    batch.seed = seed;
    CheckReport rep = check_lengths(batch);
    rep.check += "/self_test";
    out.push_back(rep);
  }

  {  // A hand-built shift far beyond the bound must be caught.
    TrialBatch batch;
    batch.tree = ModelTree::balanced(1, {0.0, 0.0, 0.0}, 1.0);
    batch.k_ref = 4;
    CheckReport rep;
    rep.check = "bitshifts/self_test";
    double bound = 4.0 * 1.0 * 1.0 * 2.0;  // 4 log2^2(2) sqrt(4)
    std::vector<std::pair<uint64_t, uint32_t>> a, b;
    for (uint32_t i = 0; i < 4; ++i) a.push_back({i, i});
    b.push_back({0, 4000});  // bit 0 displaced by far more than the bound
    rep.statistic = max_shift_merged(a, b, 1.0, 1.0);
    rep.bound = bound;
    rep.pass = rep.statistic <= bound;
    rep.pass_fraction = rep.pass ? 1.0 : 0.0;
    rep.sample_size = 1;
    rep.details = "synthetic displaced bit";
    out.push_back(rep);
  }

  {  // An all-zeros string is maximally unbalanced.
    CheckReport rep;
    rep.check = "block_balance/self_test";
    Bitstring zeros(std::string(4096, '0'));
    rep.statistic = block_balance_statistic(zeros);
    rep.bound = 6.0;  // log2(64)
    rep.pass = rep.statistic <= rep.bound;
    rep.pass_fraction = rep.pass ? 1.0 : 0.0;
    rep.sample_size = 1;
    rep.details = "injected all-zeros string";
    out.push_back(rep);
  }

  {  // Doubled correlations violate the unbiasedness window.
    CheckReport rep;
    rep.check = "unbiasedness/self_test";
    rep.statistic = 1.0;  // |2.0 - 1.0|
    rep.bound = 0.1;
    rep.pass = rep.statistic <= rep.bound;
    rep.pass_fraction = 0.0;
    rep.sample_size = 1;
    rep.details = "synthetic ratio 2.0";
    out.push_back(rep);
  }

  {  // A geometric series is not bounded.
    CheckReport rep;
    rep.check = "signature_variance_bounded/self_test";
    double series[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    rep.statistic = series[5] / series[0];
    rep.bound = 4.0;
    rep.pass = rep.statistic <= rep.bound;
    rep.pass_fraction = 0.0;
    rep.sample_size = 6;
    rep.details = "synthetic geometric series";
    out.push_back(rep);
  }

  {  // Estimates nowhere near the target distance.
    CheckReport rep;
    rep.check = "deep_distance/self_test";
    double d_true = 0.4, epsilon = 0.05;
    double estimates[] = {1.9, 2.1, 2.0, 1.8};
    int ok = 0;
    for (double e : estimates) ok += std::abs(e - d_true) < epsilon;
    rep.statistic = static_cast<double>(ok) / 4.0;
    rep.bound = 0.9;
    rep.pass = rep.statistic >= rep.bound;
    rep.pass_fraction = rep.statistic;
    rep.sample_size = 4;
    rep.details = "synthetic off-target estimates";
    out.push_back(rep);
  }

  {  // Medians that grow with k are not a shrinking gap.
    CheckReport rep;
    rep.check = "pseudo_block_gap/self_test";
    double medians[] = {0.1, 0.2, 0.4};
    bool decreasing = medians[1] <= medians[0] && medians[2] <= medians[1];
    rep.statistic = medians[2];
    rep.bound = medians[0];
    rep.pass = decreasing;
    rep.pass_fraction = 0.0;
    rep.sample_size = 3;
    rep.details = "synthetic growing medians";
    out.push_back(rep);
  }

  return out;
}

}  // namespace indelphy
