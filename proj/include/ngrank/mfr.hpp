#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ngrank/fusion.hpp"
#include "ngrank/ttng.hpp"
#include "ngrank/types.hpp"

namespace ngrank {

/// Fused correlation weight between two items, `center` acting as the query.
using PairwiseFn = std::function<double(ItemId center, ItemId item)>;

enum class MfrVariant { kSum, kProduct };

std::string_view to_string(MfrVariant v);
MfrVariant mfr_variant_from_string(std::string_view s);

/// Scores closer than this relative gap are ties and fall through to the
/// tie-break keys. Keeps selections stable when weights are rescaled.
inline constexpr double kScoreRelTolerance = 1e-9;

struct FinalRanking {
  ItemId query = 0;
  std::vector<ItemId> items;   ///< items[0] == query
  std::vector<double> scores;  ///< greedy score at selection time

  RankedList to_ranked_list() const;
};

/// Greedy multi-graph fusion ranking. Starting from {query}, repeatedly adds
/// the pool item maximising the sum of pairwise(u, i) over the selected u.
/// The pool is fused.nodes() without the query. Ties go to the higher fused
/// weight to the query, then higher fused first-tier weight, then lower
/// candidate rank, then lower id. Stops after k additions or when the pool
/// is exhausted.
FinalRanking mfr_select(const FusedGraph& fused, const PairwiseFn& pairwise, std::size_t k);

/// Same loop maximising the product of normalised correlations instead of the
/// sum. Throws DegenerateError when every remaining candidate scores zero.
FinalRanking mfr_select_product(const FusedGraph& fused, const PairwiseFn& pairwise,
                                std::size_t k);

/// On-demand pairwise weights over the channel graphs. For the query it
/// returns the fused edge weight; for any other center u it computes u's
/// tier-3 graph in every channel (u as a temporary query) and sums them.
/// Results are cached per center. Not thread-safe; use one per query.
class PairwiseWeights {
 public:
  PairwiseWeights(std::vector<const NeighborGraph*> graphs, const FusedGraph& fused,
                  Tier3Mode mode = Tier3Mode::kTwoHop);

  double operator()(ItemId center, ItemId item);
  std::size_t centers_computed() const { return cache_.size(); }

 private:
  const std::unordered_map<ItemId, double>& center_weights(ItemId center);

  std::vector<const NeighborGraph*> graphs_;
  const FusedGraph* fused_;
  Tier3Mode mode_;
  std::unordered_map<ItemId, std::unordered_map<ItemId, double>> cache_;
};

}  // namespace ngrank
