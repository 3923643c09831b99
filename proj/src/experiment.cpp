#include "indelphy/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "indelphy/indel_sim.hpp"
#include "indelphy/newick.hpp"
#include "indelphy/parallel.hpp"

namespace indelphy {

std::string ResultRecord::tsv_line() const {
  char buf[160];
  const char* status_txt = status == TrialStatus::kOk          ? "ok"
                           : status == TrialStatus::kStall     ? "stall"
                                                                : "degenerate";
  std::snprintf(buf, sizeof buf, "%d\t%llu\t%s\t%d\t%d\t%.6g", trial,
                static_cast<unsigned long long>(k), status_txt, rf, success ? 1 : 0,
                mean_leaf_len);
  return buf;
}

std::string experiment_tsv_header() { return "trial\tk\tstatus\trf\tsuccess\tmean_leaf_len"; }

bool leaf_signature_vectors(const ModelTree& tree, const SequenceAssignment& assign, uint64_t k_ref,
                            double zeta, bool asym, std::vector<std::string>* labels,
                            std::vector<SignatureVector>* sigs) {
  BlockScheme scheme = block_scheme(k_ref, zeta);
  labels->clear();
  sigs->clear();
  for (int leaf : tree.leaf_ids()) {
    labels->push_back(tree.node(leaf).label);
    try {
      sigs->push_back(asym ? pseudo_signature_vector(assign.bits[leaf], scheme.L, leaf)
                           : signature_vector(assign.bits[leaf], scheme, leaf));
    } catch (const InsufficientLength&) {
      return false;
    }
  }
  return true;
}

ResultRecord run_reconstruction_trial(const ModelTree& tree, const ExperimentConfig& cfg,
                                      uint64_t trial) {
  auto start = std::chrono::steady_clock::now();
  ResultRecord rec;
  rec.trial = static_cast<int>(trial);
  rec.k = cfg.k;

  ReconstructionConfig rc;
  rc.lambda_min = cfg.effective_lambda_min();
  rc.delta = cfg.delta;
  rc.r = cfg.r;

  LabeledTree truth = parse_newick(tree.to_newick());

  try {
    if (cfg.oracle_tree) {
      std::vector<std::string> labels;
      for (int leaf : tree.leaf_ids()) labels.push_back(tree.node(leaf).label);
      const auto& leaf_ids = tree.leaf_ids();
      auto metric = [&tree, &leaf_ids](int x, int y) {
        return tree.path_distance(leaf_ids[x], leaf_ids[y]);
      };
      auto result = tree_reconstruct_oracle(labels, metric, rc);
      rec.rf = rf_distance(truth, result.tree.to_labeled_tree());
    } else {
      auto assign = evolve_tree(tree, cfg.k_root(), cfg.seed, trial, false);
      double len_sum = 0.0;
      for (int leaf : tree.leaf_ids()) len_sum += static_cast<double>(assign.bits[leaf].size());
      rec.mean_leaf_len = len_sum / tree.n_leaves();

      std::vector<std::string> labels;
      std::vector<SignatureVector> sigs;
      if (!leaf_signature_vectors(tree, assign, cfg.k, cfg.zeta, cfg.mode == "asym", &labels,
                                  &sigs)) {
        rec.status = TrialStatus::kDegenerate;
        return rec;
      }
      auto result = tree_reconstruct_from_signatures(labels, std::move(sigs), rc);
      rec.rf = rf_distance(truth, result.tree.to_labeled_tree());
    }
    rec.success = rec.rf == 0;
  } catch (const StallError&) {
    rec.status = TrialStatus::kStall;
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

std::vector<ResultRecord> run_experiment(const ModelTree& tree, const ExperimentConfig& cfg,
                                         const std::vector<int>& skip) {
  // One row per (k, trial), over cfg.k plus any sweep values; trial ids run
  // consecutively across the sweep so resume bookkeeping stays flat.
  std::vector<uint64_t> ks{cfg.k};
  for (uint64_t k : cfg.k_sweep) {
    if (k != cfg.k) ks.push_back(k);
  }
  const int per_k = cfg.trials;
  const int total = per_k * static_cast<int>(ks.size());
  std::vector<ResultRecord> records(total);
  std::vector<uint8_t> skipped(total, 0);
  for (int t : skip) {
    if (t >= 0 && t < total) skipped[t] = 1;
  }
  run_trials(total, 0, [&](int t) {
    if (skipped[t]) return;
    ExperimentConfig trial_cfg = cfg;
    trial_cfg.k = ks[t / per_k];
    records[t] = run_reconstruction_trial(tree, trial_cfg, t);
    records[t].trial = t;
  });
  std::vector<ResultRecord> out;
  out.reserve(total);
  for (int t = 0; t < total; ++t) {
    if (!skipped[t]) out.push_back(records[t]);
  }
  return out;
}

}  // namespace indelphy
