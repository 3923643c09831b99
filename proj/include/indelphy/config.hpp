#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "indelphy/tree_model.hpp"

namespace indelphy {

// Flat key=value experiment configuration. Unknown keys are rejected;
// serialization is canonical (sorted by key) so the hash is stable.
struct ExperimentConfig {
  // Tree source: either a parameter file or the balanced generator.
  std::string tree_file;              // "child parent p_sub p_del p_ins [label]" lines
  int depth = 3;                      // generator depth (n = 2^depth leaves)
  double p_sub = 0.05;
  double p_del = 0.0;
  double p_ins = 0.0;
  double lambda = 0.0;                // >0: per-edge target length, p_sub solved
  int jitter_tau_max = 1;             // >1: per-edge tau drawn from {1..tau_max}

  std::string mode = "sym";           // sym | asym
  uint64_t k = 10000;                 // reference length; root gets 2k (sym) or k (asym)
  std::vector<uint64_t> k_sweep;      // optional extra k values for experiment tables
  double zeta = 0.25;
  double delta = 1.0;
  double r = 0.0;                     // 0 -> 2*delta*log2(log2 n)
  double epsilon = 0.0;               // 0 -> lambda_min/3 (validator tolerance)
  double lambda_min = 0.0;            // 0 -> single-edge length of the generator
  int trials = 1;
  uint64_t seed = 1;
  bool track_lineage = false;
  bool oracle_tree = false;           // reconstruct from noiseless plug-in distances
  std::string out_dir = ".";

  uint64_t k_root() const { return mode == "asym" ? k : 2 * k; }

  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  std::string to_canonical_text() const;
  uint64_t hash() const;

  // Builds the model tree this config describes (generator or file).
  ModelTree build_tree() const;
  // Effective lambda_min (explicit value or derived from the generator).
  double effective_lambda_min() const;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace indelphy
