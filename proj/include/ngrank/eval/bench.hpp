#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ngrank/mfr.hpp"
#include "ngrank/ttng.hpp"

namespace ngrank::eval {

struct BenchReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t k_final = 0;
  std::size_t queries = 0;
  std::size_t repetitions = 0;
  double mean_ms = 0.0;    ///< per query
  double median_ms = 0.0;  ///< per query, median over repetitions
};

/// Times the per-query work after indexing: tier graphs in every channel,
/// fusion and greedy selection of k_final items. One untimed warm-up pass
/// precedes the measured repetitions. Throws InvalidInputError when
/// repetitions < 100.
BenchReport bench_rerank(std::span<const NeighborGraph* const> graphs,
                         std::span<const ItemId> queries, std::size_t repetitions,
                         std::size_t k_final, Tier3Mode mode = Tier3Mode::kTwoHop,
                         MfrVariant variant = MfrVariant::kSum);

inline constexpr std::size_t kMinBenchRepetitions = 100;

}  // namespace ngrank::eval
