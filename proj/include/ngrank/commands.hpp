#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ngrank/eval/bench.hpp"
#include "ngrank/eval/metrics.hpp"
#include "ngrank/pipeline.hpp"

namespace ngrank {

/// Builds every channel's index and writes `<dir>/<channel>.index.json`.
std::vector<std::filesystem::path> cmd_index(const PipelineConfig& config,
                                             const std::filesystem::path& out_dir,
                                             unsigned jobs = 0);

struct RerankRequest {
  std::optional<std::filesystem::path> index_dir;  ///< build in memory when unset
  std::vector<ItemId> query_ids;
  bool all = false;  ///< every item of the first channel
  std::optional<std::filesystem::path> query_vectors;
};

/// Rankings in request order: query ids first, then vectors. Out-of-sample
/// vectors get ids max_item_id + 1 + line index.
std::vector<RankedList> cmd_rerank(const PipelineConfig& config, const RerankRequest& request,
                                   unsigned jobs = 0);

/// metrics: any of "ns", "precision", "recall". N-S ignores the r list.
std::vector<eval::MetricReport> cmd_eval(const std::filesystem::path& rankings_path,
                                         const std::filesystem::path& truth_path,
                                         const std::vector<std::string>& metrics,
                                         const std::vector<std::size_t>& r_list,
                                         bool exclude_query = false);

std::string format_report_tsv(const std::vector<eval::MetricReport>& reports);
std::string format_report_table(const std::vector<eval::MetricReport>& reports);

/// scenario: "outlier" or "two-manifold". Writes one CSV per channel,
/// truth.csv, manifest.json and config.ini; returns the written paths.
std::vector<std::filesystem::path> cmd_synth(const std::string& scenario, std::uint64_t seed,
                                             const std::filesystem::path& out_dir);

struct BenchRequest {
  std::vector<std::size_t> n_list{10000, 20000};
  std::vector<std::size_t> k_list{25};
  std::size_t m = 3;
  std::size_t dim = 12;
  /// Synthetic items per cluster; the cluster count grows with n so local
  /// density stays fixed.
  std::size_t cluster_size = 200;
  std::size_t queries = 20;
  std::size_t repetitions = 100;
  std::size_t k_final = 0;  ///< 0 = k
  std::uint64_t seed = 0;
  Tier3Mode mode = Tier3Mode::kTwoHop;
  std::optional<PipelineConfig> config;  ///< bench these channels instead of synthetic data
};

/// One report per (n, k) pair, or per k when a config is given.
std::vector<eval::BenchReport> cmd_bench(const BenchRequest& request, unsigned jobs = 0);

std::string format_bench_table(const std::vector<eval::BenchReport>& reports);

}  // namespace ngrank
