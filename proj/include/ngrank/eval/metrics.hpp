#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ngrank/types.hpp"

namespace ngrank::eval {

/// Class labels for a collection. Class names are arbitrary strings.
class GroundTruth {
 public:
  /// Throws InvalidInputError on a duplicate id.
  void add(ItemId id, std::string label);

  std::size_t size() const { return label_of_.size(); }
  bool contains(ItemId id) const { return label_of_.contains(id); }
  /// Throws UnknownItemError.
  std::size_t class_of(ItemId id) const;
  const std::string& label(std::size_t cls) const { return labels_[cls]; }
  std::size_t class_count() const { return labels_.size(); }
  std::size_t class_size(std::size_t cls) const { return sizes_[cls]; }
  const std::vector<std::size_t>& class_sizes() const { return sizes_; }
  /// Ids in insertion order.
  const std::vector<ItemId>& ids() const { return ids_; }

 private:
  std::unordered_map<ItemId, std::size_t> label_of_;
  std::unordered_map<std::string, std::size_t> class_index_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> sizes_;
  std::vector<ItemId> ids_;
};

/// `<id>,<class>` per line, optional header, '#' comments.
GroundTruth parse_truth(std::string_view text);
GroundTruth load_truth(const std::filesystem::path& path);
void save_truth(const GroundTruth& truth, const std::filesystem::path& path);

struct MetricReport {
  std::string metric_name;
  double value = 0.0;
  std::size_t r = 0;
  std::size_t n_queries = 0;
  /// Standard error of the per-query mean.
  double std_error = 0.0;
};

/// Mean number of same-class items among the top 4, the query included.
/// Throws ClassSizeError unless every class has exactly 4 members.
MetricReport ns_score(std::span<const RankedList> rankings, const GroundTruth& truth);

/// Mean of 100 * hits / r over the top r. Slots past the end of a short list
/// are misses. With exclude_query the query is removed before cutting.
MetricReport precision_at(std::span<const RankedList> rankings, const GroundTruth& truth,
                          std::size_t r, bool exclude_query = false);

/// Mean of 100 * hits / class size over the top r. With exclude_query the
/// query is removed and the denominator is class size - 1.
MetricReport recall_at(std::span<const RankedList> rankings, const GroundTruth& truth,
                       std::size_t r, bool exclude_query = false);

/// Per-query values behind precision_at, in input order.
std::vector<double> precision_values(std::span<const RankedList> rankings,
                                     const GroundTruth& truth, std::size_t r,
                                     bool exclude_query = false);

}  // namespace ngrank::eval
