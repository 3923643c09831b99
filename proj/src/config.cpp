#include "indelphy/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace indelphy {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.resize(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "tree_file") cfg.tree_file = value;
      else if (key == "depth") cfg.depth = std::stoi(value);
      else if (key == "p_sub") cfg.p_sub = std::stod(value);
      else if (key == "p_del") cfg.p_del = std::stod(value);
      else if (key == "p_ins") cfg.p_ins = std::stod(value);
      else if (key == "lambda") cfg.lambda = std::stod(value);
      else if (key == "jitter_tau_max") cfg.jitter_tau_max = std::stoi(value);
      else if (key == "mode") cfg.mode = value;
      else if (key == "k") cfg.k = std::stoull(value);
      else if (key == "k_sweep") {
        std::istringstream ks(value);
        std::string item;
        while (std::getline(ks, item, ',')) {
          if (!item.empty()) cfg.k_sweep.push_back(std::stoull(item));
        }
      }
      else if (key == "zeta") cfg.zeta = std::stod(value);
      else if (key == "delta") cfg.delta = std::stod(value);
      else if (key == "r") cfg.r = std::stod(value);
      else if (key == "epsilon") cfg.epsilon = std::stod(value);
      else if (key == "lambda_min") cfg.lambda_min = std::stod(value);
      else if (key == "trials") cfg.trials = std::stoi(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "track_lineage") cfg.track_lineage = (value == "1" || value == "true");
      else if (key == "oracle_tree") cfg.oracle_tree = (value == "1" || value == "true");
      else if (key == "out_dir") cfg.out_dir = value;
      else throw std::runtime_error("unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  if (cfg.mode != "sym" && cfg.mode != "asym") {
    throw std::runtime_error("config: mode must be sym or asym");
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_text(read_text_file(path));
}

std::string ExperimentConfig::to_canonical_text() const {
  std::map<std::string, std::string> kv;
  kv["tree_file"] = tree_file;
  kv["depth"] = std::to_string(depth);
  kv["p_sub"] = fmt_double(p_sub);
  kv["p_del"] = fmt_double(p_del);
  kv["p_ins"] = fmt_double(p_ins);
  kv["lambda"] = fmt_double(lambda);
  kv["jitter_tau_max"] = std::to_string(jitter_tau_max);
  kv["mode"] = mode;
  kv["k"] = std::to_string(k);
  {
    std::string sweep;
    for (size_t i = 0; i < k_sweep.size(); ++i) {
      if (i) sweep += ',';
      sweep += std::to_string(k_sweep[i]);
    }
    kv["k_sweep"] = sweep;
  }
  kv["zeta"] = fmt_double(zeta);
  kv["delta"] = fmt_double(delta);
  kv["r"] = fmt_double(r);
  kv["epsilon"] = fmt_double(epsilon);
  kv["lambda_min"] = fmt_double(lambda_min);
  kv["trials"] = std::to_string(trials);
  kv["seed"] = std::to_string(seed);
  kv["track_lineage"] = track_lineage ? "1" : "0";
  kv["oracle_tree"] = oracle_tree ? "1" : "0";
  std::string out;
  for (const auto& [key, value] : kv) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

uint64_t ExperimentConfig::hash() const {
  // FNV-1a over the canonical serialization.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_canonical_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ModelTree ExperimentConfig::build_tree() const {
  if (!tree_file.empty()) {
    if (lambda_min <= 0.0) {
      throw std::runtime_error("config: tree_file requires an explicit lambda_min");
    }
    return ModelTree::from_edge_params_text(read_text_file(tree_file), lambda_min);
  }
  double lam_min = effective_lambda_min();
  if (jitter_tau_max > 1) {
    RngStream rng(seed, mix64(0xbadcafe));
    return ModelTree::balanced_jittered(depth, p_del, p_ins, lam_min, jitter_tau_max, rng);
  }
  if (lambda > 0.0) return ModelTree::balanced_lambda(depth, lambda, p_del, p_ins, lam_min);
  return ModelTree::balanced(depth, {p_sub, p_del, p_ins}, lam_min);
}

double ExperimentConfig::effective_lambda_min() const {
  if (lambda_min > 0.0) return lambda_min;
  if (lambda > 0.0) return lambda;
  return edge_length({p_sub, p_del, p_ins});
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace indelphy
