#include "ngrank/eval/bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

#include "ngrank/error.hpp"
#include "ngrank/fusion.hpp"

namespace ngrank::eval {

namespace {

std::size_t run_query(std::span<const NeighborGraph* const> graphs, ItemId q, std::size_t k_final,
                      Tier3Mode mode, MfrVariant variant) {
  std::vector<QueryGraph> per_channel;
  per_channel.reserve(graphs.size());
  for (const NeighborGraph* g : graphs) {
    per_channel.push_back(ttng_graph(*g, QueryCenter::in_sample(*g, q), mode));
  }
  const FusedGraph fused = fuse_graphs(std::move(per_channel));
  PairwiseWeights pairwise({graphs.begin(), graphs.end()}, fused, mode);
  const PairwiseFn fn = std::ref(pairwise);
  const auto ranking = variant == MfrVariant::kSum ? mfr_select(fused, fn, k_final)
                                                   : mfr_select_product(fused, fn, k_final);
  return ranking.items.size();
}

}  // namespace

BenchReport bench_rerank(std::span<const NeighborGraph* const> graphs,
                         std::span<const ItemId> queries, std::size_t repetitions,
                         std::size_t k_final, Tier3Mode mode, MfrVariant variant) {
  if (repetitions < kMinBenchRepetitions) {
    throw InvalidInputError("bench needs at least " + std::to_string(kMinBenchRepetitions) +
                            " repetitions");
  }
  if (graphs.empty()) throw EmptyChannelListError("bench needs at least one channel");
  if (queries.empty()) throw InvalidInputError("bench needs at least one query");

  BenchReport rep;
  rep.n = graphs.front()->rows();
  rep.k = graphs.front()->k1();
  rep.m = graphs.size();
  rep.k_final = k_final;
  rep.queries = queries.size();
  rep.repetitions = repetitions;

  volatile std::size_t sink = 0;
  for (ItemId q : queries) sink = sink + run_query(graphs, q, k_final, mode, variant);

  using Clock = std::chrono::steady_clock;
  std::vector<double> per_rep;
  per_rep.reserve(repetitions);
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto t0 = Clock::now();
    for (ItemId q : queries) sink = sink + run_query(graphs, q, k_final, mode, variant);
    const std::chrono::duration<double, std::milli> dt = Clock::now() - t0;
    per_rep.push_back(dt.count() / static_cast<double>(queries.size()));
  }
  double sum = 0.0;
  for (double v : per_rep) sum += v;
  rep.mean_ms = sum / static_cast<double>(per_rep.size());
  std::nth_element(per_rep.begin(), per_rep.begin() + per_rep.size() / 2, per_rep.end());
  rep.median_ms = per_rep[per_rep.size() / 2];
  return rep;
}

}  // namespace ngrank::eval
