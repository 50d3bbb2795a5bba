#include "ngrank/mfr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ngrank/error.hpp"

namespace ngrank {

namespace {

bool ties(double a, double b) {
  return std::abs(a - b) <= kScoreRelTolerance * std::max(std::abs(a), std::abs(b));
}

struct Candidate {
  const FusedEdge* edge;
  double score;
};

bool better(const Candidate& a, const Candidate& b) {
  if (!ties(a.score, b.score)) return a.score > b.score;
  if (!ties(a.edge->weight, b.edge->weight)) return a.edge->weight > b.edge->weight;
  if (!ties(a.edge->tier1, b.edge->tier1)) return a.edge->tier1 > b.edge->tier1;
  if (a.edge->best_rank != b.edge->best_rank) return a.edge->best_rank < b.edge->best_rank;
  return a.edge->item < b.edge->item;
}

std::vector<Candidate> make_pool(const FusedGraph& fused, double initial) {
  std::vector<Candidate> pool;
  pool.reserve(fused.edges().size());
  for (const auto& e : fused.edges()) {
    if (e.item != fused.query()) pool.push_back({&e, initial});
  }
  return pool;
}

template <typename Update>
FinalRanking greedy(const FusedGraph& fused, std::size_t k, double initial, Update update,
                    bool reject_all_zero) {
  if (fused.nodes().empty()) throw InvalidInputError("fused graph has no nodes");
  FinalRanking out;
  out.query = fused.query();
  out.items.push_back(fused.query());
  out.scores.push_back(fused.weight(fused.query()));

  auto pool = make_pool(fused, initial);
  ItemId last = fused.query();
  for (std::size_t step = 0; step < k && !pool.empty(); ++step) {
    for (auto& c : pool) update(c.score, last, c.edge->item);
    if (reject_all_zero &&
        std::all_of(pool.begin(), pool.end(), [](const Candidate& c) { return c.score == 0.0; })) {
      throw DegenerateError("every remaining candidate has a zero correlation product at step " +
                            std::to_string(step + 1));
    }
    auto best = pool.begin();
    for (auto it = pool.begin() + 1; it != pool.end(); ++it) {
      if (better(*it, *best)) best = it;
    }
    out.items.push_back(best->edge->item);
    out.scores.push_back(best->score);
    last = best->edge->item;
    pool.erase(best);
  }
  return out;
}

}  // namespace

std::string_view to_string(MfrVariant v) {
  return v == MfrVariant::kSum ? "sum" : "product";
}

MfrVariant mfr_variant_from_string(std::string_view s) {
  if (s == "sum") return MfrVariant::kSum;
  if (s == "product") return MfrVariant::kProduct;
  throw InvalidInputError("unknown MFR variant '" + std::string(s) + "'");
}

RankedList FinalRanking::to_ranked_list() const {
  RankedList out;
  out.query = query;
  out.entries.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.entries.push_back({items[i], i < scores.size() ? scores[i] : 0.0, Provenance::kMfr});
  }
  return out;
}

FinalRanking mfr_select(const FusedGraph& fused, const PairwiseFn& pairwise, std::size_t k) {
  return greedy(
      fused, k, 0.0,
      [&](double& score, ItemId u, ItemId i) { score += pairwise(u, i); }, false);
}

FinalRanking mfr_select_product(const FusedGraph& fused, const PairwiseFn& pairwise,
                                std::size_t k) {
  const double norm = fused.saturation();
  return greedy(
      fused, k, 1.0,
      [&](double& score, ItemId u, ItemId i) {
        const double p = norm > 0.0 ? std::clamp(pairwise(u, i) / norm, 0.0, 1.0) : 0.0;
        score *= p;
      },
      true);
}

PairwiseWeights::PairwiseWeights(std::vector<const NeighborGraph*> graphs, const FusedGraph& fused,
                                 Tier3Mode mode)
    : graphs_(std::move(graphs)), fused_(&fused), mode_(mode) {}

const std::unordered_map<ItemId, double>& PairwiseWeights::center_weights(ItemId center) {
  if (auto it = cache_.find(center); it != cache_.end()) return it->second;
  std::unordered_map<ItemId, double> weights;
  for (const NeighborGraph* g : graphs_) {
    if (!g->row_of(center)) continue;
    const auto c = QueryCenter::in_sample(*g, center);
    for (const auto& t : compute_tiers(*g, c, mode_)) weights[t.item] += t.tier3;
  }
  return cache_.emplace(center, std::move(weights)).first->second;
}

double PairwiseWeights::operator()(ItemId center, ItemId item) {
  if (center == fused_->query()) return fused_->weight(item);
  const auto& w = center_weights(center);
  const auto it = w.find(item);
  return it == w.end() ? 0.0 : it->second;
}

}  // namespace ngrank
