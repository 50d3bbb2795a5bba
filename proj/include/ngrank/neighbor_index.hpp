#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ngrank/features.hpp"
#include "ngrank/metric.hpp"
#include "ngrank/types.hpp"

namespace ngrank {

struct Neighbor {
  ItemId id = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Self-inclusive k-nearest-neighbour lists for every item of one channel.
///
/// Each list has min(k, n) entries. The owning item is always first; the rest
/// follow in ascending (distance, id) order. Rows are stored in ascending id
/// order so two indexes over the same data compare equal regardless of the
/// order the features were read in. Immutable after construction.
class NeighborhoodIndex {
 public:
  NeighborhoodIndex() = default;

  /// Validates every invariant; throws FormatError on violation.
  static NeighborhoodIndex from_lists(std::string channel, std::size_t k, Metric metric,
                                      std::map<ItemId, std::vector<Neighbor>> lists);

  const std::string& channel() const { return channel_; }
  std::size_t k() const { return k_; }
  Metric metric() const { return metric_; }
  std::size_t size() const { return ids_.size(); }
  /// Length of every neighbour list, min(k, n).
  std::size_t list_length() const { return list_length_; }

  const std::vector<ItemId>& ids() const { return ids_; }
  std::optional<std::size_t> row_of(ItemId id) const;

  std::span<const Neighbor> neighbors_at(std::size_t row) const {
    return {entries_.data() + row * list_length_, list_length_};
  }
  /// Throws UnknownItemError.
  std::span<const Neighbor> neighbors(ItemId id) const;

  friend bool operator==(const NeighborhoodIndex& a, const NeighborhoodIndex& b) {
    return a.channel_ == b.channel_ && a.k_ == b.k_ && a.metric_ == b.metric_ &&
           a.ids_ == b.ids_ && a.entries_ == b.entries_;
  }

 private:
  friend NeighborhoodIndex build_index(const FeatureMatrix&, std::size_t, Metric, unsigned);

  std::string channel_;
  std::size_t k_ = 0;
  Metric metric_ = Metric::kL1;
  std::size_t list_length_ = 0;
  std::vector<ItemId> ids_;
  std::vector<Neighbor> entries_;
  std::unordered_map<ItemId, std::size_t> row_of_;
};

/// Exhaustive k-NN over every item. `jobs` = 0 uses the hardware concurrency.
NeighborhoodIndex build_index(const FeatureMatrix& features, std::size_t k,
                              Metric metric = Metric::kL1, unsigned jobs = 0);

/// Top-k stored items nearest to an arbitrary vector, ascending (distance, id).
/// Scores are distances and provenance is kKnn. The returned list's query id is
/// `query_id`.
RankedList query_knn(const FeatureMatrix& features, std::span<const double> q,
                     std::size_t k, Metric metric = Metric::kL1, ItemId query_id = 0);

void save_index(const NeighborhoodIndex& index, const std::filesystem::path& path);
NeighborhoodIndex load_index(const std::filesystem::path& path);

std::string serialize_index(const NeighborhoodIndex& index);
NeighborhoodIndex parse_index(std::string_view text);

}  // namespace ngrank
