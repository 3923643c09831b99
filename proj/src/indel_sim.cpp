#include "indelphy/indel_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace indelphy {

namespace {

// Conditional distribution of the (flip, del, ins) combination at an event
// position, given that at least one of the three occurred.
struct EventTable {
  double p_any = 0.0;
  double log1p_neg_p_any = 0.0;
  double cum[7];                       // cumulative joint probabilities
  static constexpr uint8_t kFlip = 1, kDel = 2, kIns = 4;

  explicit EventTable(const EdgeParams& e) {
    double ps = e.p_sub, pd = e.p_del, pi = e.p_ins;
    double probs[7];
    probs[0] = ps * (1 - pd) * (1 - pi);        // flip
    probs[1] = (1 - ps) * pd * (1 - pi);        // del
    probs[2] = (1 - ps) * (1 - pd) * pi;        // ins
    probs[3] = ps * pd * (1 - pi);              // flip+del
    probs[4] = ps * (1 - pd) * pi;              // flip+ins
    probs[5] = (1 - ps) * pd * pi;              // del+ins
    probs[6] = ps * pd * pi;                    // flip+del+ins
    double acc = 0.0;
    for (int i = 0; i < 7; ++i) {
      acc += probs[i];
      cum[i] = acc;
    }
    p_any = acc;
    log1p_neg_p_any = std::log1p(-std::min(p_any, 1.0));
  }

  uint8_t draw(RngStream& rng) const {
    double u = rng.uniform() * p_any;
    static constexpr uint8_t combos[7] = {kFlip, kDel,        kIns,       kFlip | kDel,
                                          kFlip | kIns, kDel | kIns, kFlip | kDel | kIns};
    for (int i = 0; i < 6; ++i) {
      if (u < cum[i]) return combos[i];
    }
    return combos[6];
  }
};

template <bool kTracked>
Bitstring mutate_edge_impl(const Bitstring& parent, const EdgeParams& params, RngStream& rng,
                           const std::vector<uint64_t>* parent_ids,
                           std::vector<uint64_t>* child_ids, uint64_t* next_fresh_id) {
  const size_t len = parent.size();
  if (params.p_del == 0.0 && params.p_ins == 0.0) {
    // Alignment-preserving edge: copy and flip in place.
    Bitstring child = parent;
    if constexpr (kTracked) *child_ids = *parent_ids;
    if (params.p_sub > 0.0) {
      double log1p_neg = std::log1p(-std::min(params.p_sub, 1.0));
      size_t pos = 0;
      while (true) {
        uint64_t skip = rng.geometric(log1p_neg);
        if (skip >= len - pos) break;
        pos += static_cast<size_t>(skip);
        child.flip(pos);
        if (++pos >= len) break;
      }
    }
    return child;
  }

  Bitstring child;
  child.reserve(len + len / 8 + 64);
  EventTable table(params);
  if (table.p_any <= 0.0) {
    child.append_run(parent, 0, len);
    if constexpr (kTracked) *child_ids = *parent_ids;
    return child;
  }
  if constexpr (kTracked) child_ids->reserve(len + len / 8 + 8);

  size_t pos = 0;
  while (pos < len) {
    uint64_t skip = rng.geometric(table.log1p_neg_p_any);
    size_t run = static_cast<size_t>(std::min<uint64_t>(skip, len - pos));
    child.append_run(parent, pos, run);
    if constexpr (kTracked) {
      child_ids->insert(child_ids->end(), parent_ids->begin() + pos,
                        parent_ids->begin() + pos + run);
    }
    pos += run;
    if (pos >= len) break;
    uint8_t combo = table.draw(rng);
    if (!(combo & EventTable::kDel)) {
      child.append(parent.get(pos) ^ static_cast<bool>(combo & EventTable::kFlip));
      if constexpr (kTracked) child_ids->push_back((*parent_ids)[pos]);
    }
    if (combo & EventTable::kIns) {
      child.append(rng.bit());
      if constexpr (kTracked) child_ids->push_back((*next_fresh_id)++);
    }
    ++pos;
  }
  return child;
}

}  // namespace

Bitstring mutate_edge(const Bitstring& parent, const EdgeParams& params, RngStream& rng) {
  return mutate_edge_impl<false>(parent, params, rng, nullptr, nullptr, nullptr);
}

Bitstring mutate_edge_tracked(const Bitstring& parent, const EdgeParams& params, RngStream& rng,
                              const std::vector<uint64_t>& parent_ids,
                              std::vector<uint64_t>& child_ids, uint64_t& next_fresh_id) {
  child_ids.clear();
  return mutate_edge_impl<true>(parent, params, rng, &parent_ids, &child_ids, &next_fresh_id);
}

uint64_t edge_stream_id(uint64_t trial, int edge_child_id) {
  return mix64(trial * 0x51ed2701ab6ceaf5ULL + 0x1000 + static_cast<uint64_t>(edge_child_id));
}

uint64_t root_stream_id(uint64_t trial) { return mix64(trial * 0x51ed2701ab6ceaf5ULL); }

namespace {

SequenceAssignment evolve_impl(const ModelTree& tree, const Bitstring* fixed_root, uint64_t k_root,
                               uint64_t seed, uint64_t trial, bool track_lineage) {
  SequenceAssignment out;
  out.bits.resize(tree.size());
  if (track_lineage) out.lineage.resize(tree.size());

  if (fixed_root != nullptr) {
    out.bits[0] = *fixed_root;
    k_root = fixed_root->size();
  } else {
    if (k_root < 1) throw std::invalid_argument("evolve_tree: k_root must be >= 1");
    RngStream root_rng(seed, root_stream_id(trial));
    out.bits[0] = Bitstring::random(k_root, root_rng);
  }
  out.root_length = k_root;
  uint64_t next_fresh_id = k_root;
  if (track_lineage) {
    out.lineage[0].resize(k_root);
    for (uint64_t j = 0; j < k_root; ++j) out.lineage[0][j] = j;
  }

  // Node ids are in BFS order, so parents precede children.
  for (int id = 1; id < tree.size(); ++id) {
    RngStream rng(seed, edge_stream_id(trial, id));
    const auto& node = tree.node(id);
    if (track_lineage) {
      out.bits[id] = mutate_edge_tracked(out.bits[node.parent], node.edge, rng,
                                         out.lineage[node.parent], out.lineage[id], next_fresh_id);
    } else {
      out.bits[id] = mutate_edge(out.bits[node.parent], node.edge, rng);
    }
  }
  return out;
}

}  // namespace

SequenceAssignment evolve_tree(const ModelTree& tree, uint64_t k_root, uint64_t seed,
                               uint64_t trial, bool track_lineage) {
  return evolve_impl(tree, nullptr, k_root, seed, trial, track_lineage);
}

SequenceAssignment evolve_tree_from(const ModelTree& tree, const Bitstring& root_bits,
                                    uint64_t seed, uint64_t trial, bool track_lineage) {
  return evolve_impl(tree, &root_bits, 0, seed, trial, track_lineage);
}

std::vector<std::pair<size_t, size_t>> shared_bits(const SequenceAssignment& assign, int a,
                                                   int b) {
  if (!assign.has_lineage()) throw std::runtime_error("shared_bits requires lineage tracking");
  // An id present at two nodes necessarily existed at their least common
  // ancestor: ids are created once and only propagate downward.
  auto indexed = [&](int v) {
    const auto& ids = assign.lineage.at(v);
    std::vector<std::pair<uint64_t, size_t>> by_id(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) by_id[i] = {ids[i], i};
    std::sort(by_id.begin(), by_id.end());
    return by_id;
  };
  auto ia = indexed(a), ib = indexed(b);
  std::vector<std::pair<size_t, size_t>> shared;
  size_t i = 0, j = 0;
  while (i < ia.size() && j < ib.size()) {
    if (ia[i].first < ib[j].first) {
      ++i;
    } else if (ib[j].first < ia[i].first) {
      ++j;
    } else {
      shared.emplace_back(ia[i].second, ib[j].second);
      ++i;
      ++j;
    }
  }
  return shared;
}

double normalized_shift_max(const ModelTree& tree, const SequenceAssignment& assign, int a,
                            int b) {
  double eta_a = tree.eta(a), eta_b = tree.eta(b);
  double max_shift = 0.0;
  for (const auto& [pa, pb] : shared_bits(assign, a, b)) {
    double shift = std::abs(static_cast<double>(pb + 1) / eta_b -
                            static_cast<double>(pa + 1) / eta_a);
    max_shift = std::max(max_shift, shift);
  }
  return max_shift;
}

}  // namespace indelphy
