#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indelphy/indel_sim.hpp"
#include "indelphy/tree_model.hpp"

namespace indelphy {

// One Monte Carlo experiment: a model tree simulated `trials` times with
// per-trial seeds derived from `seed`. Checkers aggregate statistics over
// the batch and decide pass/fail against the concentration-bound thresholds
// (base-2 logs, literal constants, times a configurable slack).
struct TrialBatch {
  ModelTree tree;
  uint64_t k_ref = 0;   // reference length k entering block/bound formulas
  uint64_t k_root = 0;  // root string length used by the simulation
  double zeta = 0.25;
  int trials = 10;
  uint64_t seed = 1;
  double slack = 1.0;
  double beta = 1.0;    // asymmetry exponent for the length envelope
  int threads = 0;      // 0 -> default_thread_count()
  bool asym = false;    // use pseudo-block leaf signatures
};

struct CheckReport {
  std::string check;
  double statistic = 0.0;      // headline observed value
  double bound = 0.0;          // threshold compared against
  double pass_fraction = 1.0;  // per-trial pass rate where applicable
  bool pass = false;
  int sample_size = 0;
  std::string details;

  std::string tsv_line() const;
  std::string json_object() const;
};

// Fraction of trials with every node length in [k, 4k] (root length 2k).
// Asymmetric trees are judged on max |k_a/(eta(a) k_r) - 1| against the
// accumulated per-edge Azuma envelope sum_e 2 log2(n) sqrt(k_r)/k_r.
CheckReport check_lengths(const TrialBatch& batch);

// Max normalized shift over all node pairs vs 4 log2^2(n) sqrt(k_ref).
CheckReport check_bitshifts(const TrialBatch& batch);

// Max over nodes and dyadic windows of |zeros - m/2|/sqrt(m) vs log2(n).
CheckReport check_block_balance(const TrialBatch& batch);

// Mean of 4 C(a,b) e^{d(a,b)} per leaf pair with d <= max_pair_distance;
// pass iff every pair mean is within 1 +- 0.1*slack. With
// condition_on_regularity the per-trial conjunction of the three regularity
// events (lengths, shifts, block balance) is materialized via lineage
// tracking and the conditioned mean is reported alongside.
CheckReport check_unbiasedness(const TrialBatch& batch, double max_pair_distance = 1.0,
                               bool condition_on_regularity = false);

// E[shat^2] per height 1..max_height. expect_growth=false passes when the
// series is bounded (max/min <= 4); expect_growth=true passes when the mean
// consecutive ratio is >= 1.2.
CheckReport check_signature_variance(const TrialBatch& batch, int max_height, bool expect_growth);

// P(|dhat - d| < epsilon) per internal pair at the given offset; pass iff
// every pair succeeds in >= min_success of trials.
CheckReport check_deep_distance(const TrialBatch& batch, int offset, double epsilon,
                                double max_pair_distance, double min_success = 0.9);

// Median over trials of max |pseudo - true block signature| per k in the
// sweep; pass iff the medians are non-increasing in k.
CheckReport check_pseudo_block_gap(const TrialBatch& base, const std::vector<uint64_t>& k_sweep);

// Adversarial inputs that each checker must reject (pass == false), guarding
// against vacuous passes.
std::vector<CheckReport> run_validator_self_tests(uint64_t seed);

std::string reports_tsv(const std::vector<CheckReport>& reports);
std::string reports_json(const std::vector<CheckReport>& reports);

}  // namespace indelphy
