// indelphy: simulate two-state indel sequence evolution down a model tree,
// reconstruct the tree from leaf bitstrings via signature correlations, and
// validate the concentration properties the estimators rely on.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "indelphy/config.hpp"
#include "indelphy/experiment.hpp"
#include "indelphy/indel_sim.hpp"
#include "indelphy/newick.hpp"
#include "indelphy/parallel.hpp"
#include "indelphy/reconstruction.hpp"
#include "indelphy/validation.hpp"

namespace fs = std::filesystem;
using namespace indelphy;

namespace {

std::string hash_header(const ExperimentConfig& cfg) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "# config_hash=%016" PRIx64 "\n", cfg.hash());
  return buf;
}

void ensure_out_dir(const ExperimentConfig& cfg) {
  if (!cfg.out_dir.empty() && cfg.out_dir != ".") fs::create_directories(cfg.out_dir);
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

struct SequenceFile {
  std::vector<std::string> labels;
  std::vector<Bitstring> bits;
};

SequenceFile read_sequence_file(const std::string& path) {
  SequenceFile out;
  std::istringstream is(read_text_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'label<TAB>bits'");
    }
    out.labels.push_back(line.substr(0, tab));
    try {
      out.bits.emplace_back(std::string_view(line).substr(tab + 1));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (out.labels.empty()) throw std::runtime_error(path + ": no sequences");
  return out;
}

int cmd_simulate(const ExperimentConfig& cfg) {
  ModelTree tree = cfg.build_tree();
  tree.validate();
  ensure_out_dir(cfg);
  auto assign = evolve_tree(tree, cfg.k_root(), cfg.seed, 0, cfg.track_lineage);

  std::string leaves = hash_header(cfg);
  for (int leaf : tree.leaf_ids()) {
    leaves += tree.node(leaf).label;
    leaves += '\t';
    leaves += assign.bits[leaf].to_string();
    leaves += '\n';
  }
  write_text_file(out_path(cfg, "leaves.tsv"), leaves);

  if (cfg.track_lineage) {
    std::string sidecar = hash_header(cfg);
    for (int leaf : tree.leaf_ids()) {
      sidecar += tree.node(leaf).label;
      sidecar += '\t';
      const auto& ids = assign.lineage[leaf];
      for (size_t i = 0; i < ids.size(); ++i) {
        if (i) sidecar += ',';
        sidecar += std::to_string(ids[i]);
      }
      sidecar += '\n';
    }
    write_text_file(out_path(cfg, "lineage.tsv"), sidecar);
  }

  write_text_file(out_path(cfg, "tree.nwk"), tree.to_newick() + "\n");
  write_text_file(out_path(cfg, "params.tree"), tree.to_edge_params_text());
  std::cerr << "simulate: wrote " << tree.n_leaves() << " leaf sequences to " << cfg.out_dir
            << "\n";
  return 0;
}

int cmd_reconstruct(const ExperimentConfig& cfg, const std::string& sequences_path,
                    bool dump_signatures, bool dump_distances) {
  ensure_out_dir(cfg);
  ReconstructionConfig rc;
  rc.lambda_min = cfg.effective_lambda_min();
  rc.delta = cfg.delta;
  rc.r = cfg.r;

  ReconstructionResult result;
  std::vector<std::string> decision_log;
  auto write_log = [&]() {
    std::string log;
    for (const auto& line : decision_log) {
      log += line;
      log += '\n';
    }
    write_text_file(out_path(cfg, "decisions.log"), log);
  };
  try {
    if (cfg.oracle_tree) {
      ModelTree tree = cfg.build_tree();
      tree.validate();
      std::vector<std::string> labels;
      for (int leaf : tree.leaf_ids()) labels.push_back(tree.node(leaf).label);
      const auto& leaf_ids = tree.leaf_ids();
      result = tree_reconstruct_oracle(
          labels,
          [&tree, &leaf_ids](int x, int y) {
            return tree.path_distance(leaf_ids[x], leaf_ids[y]);
          },
          rc, &decision_log);
    } else {
      SequenceFile seq = read_sequence_file(sequences_path);
      BlockScheme scheme = block_scheme(cfg.k, cfg.zeta);
      std::vector<SignatureVector> sigs;
      for (size_t i = 0; i < seq.labels.size(); ++i) {
        sigs.push_back(cfg.mode == "asym"
                           ? pseudo_signature_vector(seq.bits[i], scheme.L, static_cast<int>(i))
                           : signature_vector(seq.bits[i], scheme, static_cast<int>(i)));
      }
      if (dump_signatures) {
        std::string dump = hash_header(cfg);
        for (const auto& s : sigs) dump += signature_dump_line(s) + "\n";
        write_text_file(out_path(cfg, "signatures.tsv"), dump);
      }
      if (dump_distances) {
        std::string dump = hash_header(cfg);
        for (size_t i = 0; i < sigs.size(); ++i) {
          for (size_t j = i + 1; j < sigs.size(); ++j) {
            auto c = shallow_correlation(sigs[i], sigs[j]);
            dump += distance_dump_line(seq.labels[i], seq.labels[j], shallow_distance(c),
                                       c.source) +
                    "\n";
          }
        }
        write_text_file(out_path(cfg, "distances.tsv"), dump);
      }
      result = tree_reconstruct_from_signatures(seq.labels, std::move(sigs), rc, &decision_log);
    }
  } catch (const StallError& e) {
    decision_log.push_back(e.what());
    write_log();
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const InsufficientLength& e) {
    std::cerr << "reconstruct: degenerate input sequences: " << e.what() << "\n";
    return 1;
  }

  write_log();
  std::string newick = result.tree.to_newick() + "\n";
  write_text_file(out_path(cfg, "reconstructed.nwk"), newick);
  std::cout << newick;
  return 0;
}

int cmd_validate(const ExperimentConfig& cfg, const std::string& checks_arg, bool json,
                 const std::string& k_sweep_arg) {
  ModelTree tree = cfg.build_tree();
  tree.validate();
  ensure_out_dir(cfg);

  std::set<std::string> wanted;
  {
    std::istringstream is(checks_arg);
    std::string item;
    while (std::getline(is, item, ',')) {
      if (!item.empty()) wanted.insert(item);
    }
  }
  bool all = wanted.count("all") > 0;
  auto want = [&](const std::string& name) { return all || wanted.count(name) > 0; };

  TrialBatch batch;
  batch.tree = tree;
  batch.k_ref = cfg.k;
  batch.k_root = cfg.k_root();
  batch.zeta = cfg.zeta;
  batch.trials = cfg.trials;
  batch.seed = cfg.seed;
  batch.asym = cfg.mode == "asym";

  std::vector<CheckReport> reports;
  if (want("lengths")) reports.push_back(check_lengths(batch));
  if (want("bitshifts")) reports.push_back(check_bitshifts(batch));
  if (want("blocks")) reports.push_back(check_block_balance(batch));
  if (want("unbiased")) reports.push_back(check_unbiasedness(batch));
  if (want("variance")) {
    bool growth = !tree.check_regime(0.0).ks_ok;
    int heights = std::min(tree.depth_max(), 6);
    reports.push_back(check_signature_variance(batch, heights, growth));
  }
  if (want("deepdist")) {
    double eps = cfg.epsilon > 0.0 ? cfg.epsilon : cfg.effective_lambda_min() / 3.0;
    reports.push_back(check_deep_distance(batch, 2, eps, 1.0));
  }
  if (want("pseudogap")) {
    std::vector<uint64_t> sweep;
    if (!k_sweep_arg.empty()) {
      std::istringstream is(k_sweep_arg);
      std::string item;
      while (std::getline(is, item, ',')) sweep.push_back(std::stoull(item));
    } else {
      sweep = {std::max<uint64_t>(cfg.k / 16, 64), std::max<uint64_t>(cfg.k / 4, 256), cfg.k};
    }
    reports.push_back(check_pseudo_block_gap(batch, sweep));
  }
  bool selftests_ok = true;
  if (want("selftest")) {
    for (auto& rep : run_validator_self_tests(cfg.seed)) {
      selftests_ok = selftests_ok && !rep.pass;
      reports.push_back(std::move(rep));
    }
  }
  if (reports.empty()) {
    std::cerr << "validate: no checks selected (use --checks lengths,bitshifts,blocks,unbiased,"
                 "variance,deepdist,pseudogap,selftest or all)\n";
    return 1;
  }

  std::string tsv = hash_header(cfg) + reports_tsv(reports);
  write_text_file(out_path(cfg, "validation.tsv"), tsv);
  if (json) write_text_file(out_path(cfg, "validation.json"), reports_json(reports));
  std::cout << tsv;

  bool ok = selftests_ok;
  for (const auto& rep : reports) {
    if (rep.check.find("/self_test") == std::string::npos) ok = ok && rep.pass;
  }
  return ok ? 0 : 1;
}

int cmd_experiment(const ExperimentConfig& cfg) {
  ModelTree tree = cfg.build_tree();
  tree.validate();
  ensure_out_dir(cfg);
  const std::string path = out_path(cfg, "experiment.tsv");
  const std::string header = hash_header(cfg) + experiment_tsv_header() + "\n";

  std::vector<int> done;
  std::string existing;
  if (fs::exists(path)) {
    existing = read_text_file(path);
    if (existing.compare(0, header.size(), header) != 0) {
      std::cerr << "experiment: existing output was produced by a different config; refusing to "
                   "mix runs\n";
      return 1;
    }
    std::istringstream is(existing.substr(header.size()));
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty()) done.push_back(std::atoi(line.c_str()));
    }
  } else {
    existing = header;
  }

  auto records = run_experiment(tree, cfg, done);
  std::string content = existing;
  for (const auto& rec : records) content += rec.tsv_line() + "\n";
  write_text_file(path, content);

  int successes = 0, stalls = 0, degenerate = 0, total = static_cast<int>(done.size());
  for (const auto& rec : records) {
    ++total;
    successes += rec.success;
    stalls += rec.status == TrialStatus::kStall;
    degenerate += rec.status == TrialStatus::kDegenerate;
  }
  std::cerr << "experiment: " << total << " trials, " << successes << " exact recoveries, "
            << stalls << " stalls, " << degenerate << " degenerate (new rows: " << records.size()
            << ")\n";
  return 0;
}

int cmd_rf(const std::string& path_a, const std::string& path_b) {
  LabeledTree a = parse_newick(read_text_file(path_a).substr(0, read_text_file(path_a).find('\n')));
  LabeledTree b = parse_newick(read_text_file(path_b).substr(0, read_text_file(path_b).find('\n')));
  std::cout << rf_distance(a, b) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CFN-indel sequence simulation and signature-based tree reconstruction"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  // Load --config before binding overrides so explicit flags win.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        cfg = ExperimentConfig::from_file(argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
      }
    }
  }

  std::string config_path, sequences_path, checks = "all", k_sweep, rf_a, rf_b;
  bool json = false, dump_signatures = false, dump_distances = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--seed", cfg.seed, "base RNG seed");
    sub->add_option("--trials", cfg.trials, "number of Monte Carlo trials");
    sub->add_option("--mode", cfg.mode, "sym | asym")->check(CLI::IsMember({"sym", "asym"}));
    sub->add_option("--k", cfg.k, "reference sequence length");
    sub->add_option("--zeta", cfg.zeta, "block exponent in (0, 1/2)");
    sub->add_option("--delta", cfg.delta, "height/radius scale");
    sub->add_option("--r", cfg.r, "short-quartet radius (0 = auto)");
    sub->add_option("--epsilon", cfg.epsilon, "validator distance tolerance (0 = lambda_min/3)");
    sub->add_option("--lambda-min", cfg.lambda_min, "edge length grid unit");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--depth", cfg.depth, "balanced generator depth");
    sub->add_option("--p-sub", cfg.p_sub, "substitution probability per edge");
    sub->add_option("--p-del", cfg.p_del, "deletion probability per edge");
    sub->add_option("--p-ins", cfg.p_ins, "insertion probability per edge");
    sub->add_option("--lambda", cfg.lambda, "target edge length (p_sub solved)");
    sub->add_option("--jitter-tau-max", cfg.jitter_tau_max, "max per-edge lambda multiple");
    sub->add_option("--tree-file", cfg.tree_file, "edge parameter file");
    sub->add_flag("--track-lineage", cfg.track_lineage, "record per-bit lineage ids");
    sub->add_flag("--oracle-tree", cfg.oracle_tree, "use noiseless plug-in distances");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "evolve a root bitstring down the tree");
  add_common(simulate);

  CLI::App* reconstruct = app.add_subcommand("reconstruct", "rebuild the tree from sequences");
  add_common(reconstruct);
  reconstruct->add_option("--sequences", sequences_path, "leaf sequence TSV");
  reconstruct->add_flag("--dump-signatures", dump_signatures, "write signatures.tsv");
  reconstruct->add_flag("--dump-distances", dump_distances, "write distances.tsv");

  CLI::App* validate = app.add_subcommand("validate", "Monte Carlo concentration checks");
  add_common(validate);
  validate->add_option("--checks", checks, "comma list or 'all'");
  validate->add_option("--k-sweep", k_sweep, "k values for the pseudo-block gap trend");
  validate->add_flag("--json", json, "also write validation.json");

  CLI::App* experiment = app.add_subcommand("experiment", "reconstruction success-rate table");
  add_common(experiment);
  experiment->add_option("--k-sweep", k_sweep, "extra k values, comma separated");

  CLI::App* rf = app.add_subcommand("rf", "Robinson-Foulds distance of two Newick files");
  rf->add_option("tree_a", rf_a, "first Newick file")->required();
  rf->add_option("tree_b", rf_b, "second Newick file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (reconstruct->parsed()) {
      if (!cfg.oracle_tree && sequences_path.empty()) {
        std::cerr << "reconstruct: --sequences is required (or --oracle-tree)\n";
        return 1;
      }
      return cmd_reconstruct(cfg, sequences_path, dump_signatures, dump_distances);
    }
    if (validate->parsed()) return cmd_validate(cfg, checks, json, k_sweep);
    if (experiment->parsed()) {
      if (!k_sweep.empty()) {
        cfg.k_sweep.clear();
        std::istringstream is(k_sweep);
        std::string item;
        while (std::getline(is, item, ',')) {
          if (!item.empty()) cfg.k_sweep.push_back(std::stoull(item));
        }
      }
      return cmd_experiment(cfg);
    }
    if (rf->parsed()) return cmd_rf(rf_a, rf_b);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
