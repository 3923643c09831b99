#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indelphy/config.hpp"
#include "indelphy/indel_sim.hpp"
#include "indelphy/reconstruction.hpp"
#include "indelphy/tree_model.hpp"

namespace indelphy {

enum class TrialStatus { kOk = 0, kStall = 2, kDegenerate = 3 };

struct ResultRecord {
  int trial = 0;
  uint64_t k = 0;
  TrialStatus status = TrialStatus::kOk;
  int rf = -1;              // -1 when no tree was produced
  bool success = false;     // topology recovered exactly (rf == 0)
  double mean_leaf_len = 0.0;
  double wall_ms = 0.0;     // in-memory diagnostic; never serialized

  std::string tsv_line() const;
};

// Leaf signature vectors for one assignment under the configured scheme.
// Returns false (degenerate trial) when some leaf is too short.
bool leaf_signature_vectors(const ModelTree& tree, const SequenceAssignment& assign, uint64_t k_ref,
                            double zeta, bool asym, std::vector<std::string>* labels,
                            std::vector<SignatureVector>* sigs);

// One simulate -> signatures -> reconstruct -> compare trial.
ResultRecord run_reconstruction_trial(const ModelTree& tree, const ExperimentConfig& cfg,
                                      uint64_t trial);

// All trials of the config (parallel, deterministic by trial index).
// `skip` entries are completed trial ids from a resumed run.
std::vector<ResultRecord> run_experiment(const ModelTree& tree, const ExperimentConfig& cfg,
                                         const std::vector<int>& skip = {});

std::string experiment_tsv_header();

}  // namespace indelphy
