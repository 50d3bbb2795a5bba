#include "ngrank/eval/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "ngrank/error.hpp"

namespace ngrank::eval {

namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= kScoreRelTolerance * std::max(std::abs(a), std::abs(b));
}

// Lexicographic "a ranks below b" over (score, weight, tier1, -rank, -id).
struct Below {
  bool operator()(const std::tuple<double, const FusedEdge*>& a,
                  const std::tuple<double, const FusedEdge*>& b) const {
    const auto& [sa, ea] = a;
    const auto& [sb, eb] = b;
    if (!close(sa, sb)) return sa < sb;
    if (!close(ea->weight, eb->weight)) return ea->weight < eb->weight;
    if (!close(ea->tier1, eb->tier1)) return ea->tier1 < eb->tier1;
    if (ea->best_rank != eb->best_rank) return ea->best_rank > eb->best_rank;
    return ea->item > eb->item;
  }
};

}  // namespace

FinalRanking oracle_mfr(const FusedGraph& fused, const PairwiseFn& pairwise, std::size_t k) {
  if (fused.nodes().size() > kOracleMaxNodes) {
    throw SizeError("oracle is limited to " + std::to_string(kOracleMaxNodes) + " nodes, got " +
                    std::to_string(fused.nodes().size()));
  }
  FinalRanking out;
  out.query = fused.query();
  out.items = {fused.query()};
  out.scores = {fused.weight(fused.query())};

  while (out.items.size() <= k) {
    std::vector<std::tuple<double, const FusedEdge*>> scored;
    for (const auto& e : fused.edges()) {
      if (std::find(out.items.begin(), out.items.end(), e.item) != out.items.end()) continue;
      double total = 0.0;
      for (ItemId u : out.items) total += pairwise(u, e.item);
      scored.emplace_back(total, &e);
    }
    if (scored.empty()) break;
    const auto best = std::max_element(scored.begin(), scored.end(), Below{});
    out.items.push_back(std::get<1>(*best)->item);
    out.scores.push_back(std::get<0>(*best));
  }
  return out;
}

}  // namespace ngrank::eval
