#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "indelphy/bitstring.hpp"
#include "indelphy/rng.hpp"
#include "indelphy/tree_model.hpp"

namespace indelphy {

// Node -> bitstring map produced by one simulated trial. When lineage
// tracking is on, lineage[v][i] is the id of bit i of node v's string: ids
// 0..root_length-1 for root bits, fresh ids above root_length for insertions.
struct SequenceAssignment {
  std::vector<Bitstring> bits;
  std::vector<std::vector<uint64_t>> lineage;  // empty when not tracking
  uint64_t root_length = 0;

  bool has_lineage() const { return !lineage.empty(); }
};

// One edge of the process. Per original parent bit, (flip, delete, insert)
// are drawn independently; the output is [possibly flipped bit unless
// deleted] then [fresh uniform bit if insert]. A deleted bit still performs
// its insertion draw; inserted bits are not mutated again on this edge.
Bitstring mutate_edge(const Bitstring& parent, const EdgeParams& params, RngStream& rng);

// Lineage-tracking variant; consumes the identical random draw sequence, so
// the output bits match mutate_edge for the same stream state.
Bitstring mutate_edge_tracked(const Bitstring& parent, const EdgeParams& params, RngStream& rng,
                              const std::vector<uint64_t>& parent_ids,
                              std::vector<uint64_t>& child_ids, uint64_t& next_fresh_id);

// Root drawn uniform over {0,1}^k_root; every other node derived from its
// parent with an independent substream keyed by (trial, edge).
SequenceAssignment evolve_tree(const ModelTree& tree, uint64_t k_root, uint64_t seed,
                               uint64_t trial, bool track_lineage);

// As evolve_tree but starting from a fixed root string (conditional runs).
SequenceAssignment evolve_tree_from(const ModelTree& tree, const Bitstring& root_bits,
                                    uint64_t seed, uint64_t trial, bool track_lineage);

// Pairs of 0-based positions (pos_in_a, pos_in_b) holding the same lineage
// id, ordered by id. Requires lineage tracking.
std::vector<std::pair<size_t, size_t>> shared_bits(const SequenceAssignment& assign, int a, int b);

// max over shared bits of |j'/eta(b) - j/eta(a)| with 1-based positions.
// In the symmetric case eta == 1 and this is the max raw shift.
double normalized_shift_max(const ModelTree& tree, const SequenceAssignment& assign, int a, int b);

// Stream ids for the per-edge substreams (exposed for reproducibility tests).
uint64_t edge_stream_id(uint64_t trial, int edge_child_id);
uint64_t root_stream_id(uint64_t trial);

}  // namespace indelphy
