#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ngrank/ttng.hpp"
#include "ngrank/types.hpp"

namespace ngrank {

struct FusedEdge {
  ItemId item = 0;
  double weight = 0.0;  ///< sum of per-channel tier-3 weights
  double tier1 = 0.0;   ///< sum of per-channel alpha * J
  std::uint32_t best_rank = 0;  ///< smallest candidate-set rank over channels

  friend bool operator==(const FusedEdge&, const FusedEdge&) = default;
};

/// Union of per-channel third-tier query graphs: nodes and edges are unions,
/// weights are summed, a channel lacking an edge contributes zero.
class FusedGraph {
 public:
  ItemId query() const { return query_; }
  std::size_t m() const { return channels_.size(); }
  const std::vector<std::string>& channels() const { return channels_; }
  /// Ascending ids, query included.
  const std::vector<ItemId>& nodes() const { return nodes_; }
  /// One edge per node, ascending ids.
  const std::vector<FusedEdge>& edges() const { return edges_; }
  const std::vector<QueryGraph>& per_channel() const { return per_channel_; }
  /// Largest attainable fused weight, the sum of every channel's k2.
  double saturation() const { return saturation_; }

  const FusedEdge* find(ItemId item) const;
  double weight(ItemId item) const {
    const auto* e = find(item);
    return e ? e->weight : 0.0;
  }

 private:
  friend FusedGraph fuse_graphs(std::vector<QueryGraph> graphs);

  ItemId query_ = 0;
  std::vector<std::string> channels_;
  std::vector<ItemId> nodes_;
  std::vector<FusedEdge> edges_;
  std::vector<QueryGraph> per_channel_;
  double saturation_ = 0.0;
};

/// Requires tier-3 graphs sharing one query and distinct channel names.
/// Per-channel contributions are summed in channel-name order so the result
/// does not depend on the order of `graphs`.
FusedGraph fuse_graphs(std::vector<QueryGraph> graphs);

struct CorrelationEstimate {
  double p_hat = 0.0;
  bool clamped = false;  ///< raw ratio fell outside [0, 1]
};

/// Fused weight normalised by the saturation weight (m * k for equal k2).
CorrelationEstimate correlation_estimate(const FusedGraph& fused, ItemId item);

}  // namespace ngrank
