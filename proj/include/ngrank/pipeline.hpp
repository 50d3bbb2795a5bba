#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ngrank/features.hpp"
#include "ngrank/metric.hpp"
#include "ngrank/mfr.hpp"
#include "ngrank/neighbor_index.hpp"
#include "ngrank/ttng.hpp"
#include "ngrank/types.hpp"

namespace ngrank {

struct ChannelConfig {
  std::string name;
  std::filesystem::path features;
  std::optional<FeatureFormat> format;  ///< inferred from the extension when unset
  Metric metric = Metric::kL1;
  std::size_t k1 = 0;  ///< 0 = default_k(n)
  std::size_t k2 = 0;  ///< 0 = k1
  double alpha = 1.0;
};

/// Config file:
///
///   seed = 7
///   tier3_mode = two-hop
///   [mfr]
///   k_final = 10
///   variant = sum
///   [channel colour]
///   features = colour.csv
///   metric = L1
///   k1 = 5
///   k2 = 5
///   alpha = 1
///
/// Relative feature paths resolve against the config file's directory.
struct PipelineConfig {
  std::vector<ChannelConfig> channels;
  Tier3Mode tier3_mode = Tier3Mode::kTwoHop;
  std::size_t k_final = 0;  ///< 0 = first channel's k1
  MfrVariant variant = MfrVariant::kSum;
  std::uint64_t seed = 0;
};

/// k from collection size: 5 below 20000 items, 50 from there on.
std::size_t default_k(std::size_t n);

/// Throws FormatError with line numbers.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
/// Paths are written relative to base_dir when they live below it.
std::string format_config(const PipelineConfig& config, const std::filesystem::path& base_dir = {});

std::filesystem::path index_path(const std::filesystem::path& dir, std::string_view channel);

/// Loaded channels ready for queries. Immutable after construction; rank
/// calls are safe from several threads.
class Pipeline {
 public:
  /// Loads features and builds indexes in memory.
  static Pipeline build(const PipelineConfig& config, unsigned jobs = 0);
  /// Loads saved indexes from `index_dir`. Features are read only when
  /// need_features is set (out-of-sample queries).
  static Pipeline load(const PipelineConfig& config, const std::filesystem::path& index_dir,
                       bool need_features);

  std::size_t channel_count() const { return channels_.size(); }
  const NeighborhoodIndex& index(std::size_t c) const { return channels_[c]->index; }
  const NeighborGraph& graph(std::size_t c) const { return channels_[c]->graph; }
  /// Config with every default resolved.
  const PipelineConfig& config() const { return config_; }

  /// Single channel: the TTNG list. Several channels: fusion then greedy
  /// selection of k_final items.
  RankedList rank(ItemId query) const;
  /// `vector` holds every channel's values concatenated in config order.
  RankedList rank_vector(std::span<const double> vector, ItemId virtual_id) const;
  std::size_t vector_dim() const;
  /// Largest item id over all channels.
  ItemId max_item_id() const;

  /// Results come back in input order regardless of `jobs`.
  std::vector<RankedList> rank_batch(std::span<const ItemId> queries, unsigned jobs = 0) const;
  std::vector<RankedList> rank_vectors(std::span<const std::vector<double>> vectors,
                                       ItemId first_virtual_id, unsigned jobs = 0) const;

 private:
  struct Channel {
    ChannelConfig config;
    NeighborhoodIndex index;
    NeighborGraph graph;
    std::optional<FeatureMatrix> features;
  };

  Pipeline() = default;
  void finish(PipelineConfig config);
  RankedList rank_centers(const std::vector<QueryCenter>& centers, ItemId query) const;

  PipelineConfig config_;
  std::vector<std::unique_ptr<Channel>> channels_;
};

/// One vector per non-empty line, comma separated.
std::vector<std::vector<double>> load_query_vectors(const std::filesystem::path& path);

}  // namespace ngrank
