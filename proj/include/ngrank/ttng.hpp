#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ngrank/features.hpp"
#include "ngrank/jaccard.hpp"
#include "ngrank/neighbor_index.hpp"
#include "ngrank/types.hpp"

namespace ngrank {

using Row = std::uint32_t;

/// How the third-tier weight of candidate x against query q is accumulated
/// over x's neighbourhood N_k2(x).
///
///  kTwoHop         sum of [J(x', q) > 0]: neighbours of x whose own
///                  neighbourhoods reach the query's candidate set. Default.
///  kQueryAnchored  sum of w'(x', q): neighbours of x that are themselves
///                  second-tier connected to q (inside N_k1(q)).
///  kLiteral        sum of w'(x', x): query independent, kept for comparison.
enum class Tier3Mode { kTwoHop, kQueryAnchored, kLiteral };

std::string_view to_string(Tier3Mode mode);
Tier3Mode tier3_mode_from_string(std::string_view s);

/// Row-compacted view of a NeighborhoodIndex truncated to the two
/// neighbourhood sizes used by re-ranking: N_k1 for the query's candidate set
/// and N_k2 for candidates' neighbourhoods. Both are prefixes of the stored
/// lists. Rows are numbered breadth-first over the neighbour lists so that a
/// neighbourhood and its neighbours' lists sit close together in memory.
/// Immutable and safe to share between threads.
class NeighborGraph {
 public:
  /// Throws InvalidInputError when k1 or k2 is zero or exceeds index.k().
  NeighborGraph(const NeighborhoodIndex& index, std::size_t k1, std::size_t k2);

  const std::string& channel() const { return channel_; }
  std::size_t k1() const { return k1_; }
  std::size_t k2() const { return k2_; }
  /// Effective list lengths after clamping to the collection size.
  std::size_t cknns_length() const { return len1_; }
  std::size_t neighborhood_length() const { return len2_; }

  Row rows() const { return static_cast<Row>(ids_.size()); }
  ItemId id(Row row) const { return ids_[row]; }
  std::optional<Row> row_of(ItemId id) const;

  /// N_k1(row) in distance order, self first.
  std::span<const Row> cknns(Row row) const {
    return {lists_.data() + std::size_t{row} * stride_, len1_};
  }
  /// N_k2(row) in distance order, self first.
  std::span<const Row> neighborhood(Row row) const {
    return {lists_.data() + std::size_t{row} * stride_, len2_};
  }

 private:
  std::string channel_;
  std::size_t k1_ = 0;
  std::size_t k2_ = 0;
  std::size_t len1_ = 0;
  std::size_t len2_ = 0;
  std::size_t stride_ = 0;
  std::vector<ItemId> ids_;
  std::vector<Row> lists_;  // stride_ rows per item, both views are prefixes
  std::unordered_map<ItemId, Row> row_of_;
};

/// The query side of a re-ranking: its candidate set N_k1(q) and its own
/// neighbourhood N_k2(q).
///
/// An out-of-sample query is a virtual member of its own candidate set: the
/// set is the virtual query followed by its k1 - 1 nearest stored items. The
/// stored neighbourhoods are not modified, so nothing is rebuilt.
class QueryCenter {
 public:
  /// Throws UnknownItemError.
  static QueryCenter in_sample(const NeighborGraph& graph, ItemId id);
  /// `features` must be the matrix the graph's index was built from.
  static QueryCenter out_of_sample(const NeighborGraph& graph, const FeatureMatrix& features,
                                   std::span<const double> vector, Metric metric,
                                   ItemId virtual_id);

  ItemId id() const { return id_; }
  Row row() const { return row_; }
  bool is_virtual() const { return virtual_; }
  std::span<const Row> cknns() const { return cknns_; }
  std::span<const Row> neighborhood() const { return nbhd_; }

 private:
  ItemId id_ = 0;
  Row row_ = 0;
  bool virtual_ = false;
  std::vector<Row> cknns_;
  std::vector<Row> nbhd_;
};

/// Per-candidate values of all three tiers for one query, in candidate-set
/// (distance) order.
struct CandidateTiers {
  Row row = 0;
  ItemId item = 0;
  std::uint32_t rank = 0;  ///< position in the candidate set, 0 = query
  JaccardValue jaccard;
  std::uint32_t tier2 = 0;
  std::uint32_t tier3 = 0;
};

std::vector<CandidateTiers> compute_tiers(const NeighborGraph& graph, const QueryCenter& center,
                                          Tier3Mode mode = Tier3Mode::kTwoHop);

struct QueryEdge {
  ItemId item = 0;
  double weight = 0.0;
  JaccardValue jaccard;    ///< first-tier coefficient, carried for tie-breaks
  std::uint32_t rank = 0;  ///< distance rank of the candidate

  friend bool operator==(const QueryEdge&, const QueryEdge&) = default;
};

/// Query-centred weighted star over the candidate set at one tier.
/// Tier 1 weights are alpha * J, tier 2 weights are 0/1 and tier 3 weights are
/// integer counts in [0, k2].
struct QueryGraph {
  std::string channel;
  ItemId query = 0;
  int tier = 1;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  double alpha = 1.0;
  std::vector<QueryEdge> edges;  ///< candidate-set order

  const QueryEdge* find(ItemId item) const;
  double tier1_weight(const QueryEdge& e) const { return alpha * e.jaccard.value(); }
};

QueryGraph stng_weights(const NeighborGraph& graph, const QueryCenter& center, double alpha = 1.0);
QueryGraph tier2_weights(const QueryGraph& tier1);
QueryGraph tier3_weights(const NeighborGraph& graph, const QueryCenter& center,
                         const QueryGraph& tier2, Tier3Mode mode = Tier3Mode::kTwoHop);

/// All three tiers in one pass; returns the tier-3 graph.
QueryGraph ttng_graph(const NeighborGraph& graph, const QueryCenter& center,
                      Tier3Mode mode = Tier3Mode::kTwoHop, double alpha = 1.0);

/// Candidates by descending alpha * J, then distance rank, then id. Query first.
RankedList stng_rerank(const NeighborGraph& graph, const QueryCenter& center, double alpha = 1.0);

/// Candidates by descending tier-3 weight, then tier-1 weight, distance rank
/// and id. The query is always first and the output is a permutation of the
/// candidate set; zero-weight candidates stay at the tail.
RankedList ttng_rerank(const NeighborGraph& graph, const QueryCenter& center,
                       Tier3Mode mode = Tier3Mode::kTwoHop, double alpha = 1.0);
RankedList ttng_rerank(const NeighborGraph& graph, ItemId query,
                       Tier3Mode mode = Tier3Mode::kTwoHop, double alpha = 1.0);

}  // namespace ngrank
