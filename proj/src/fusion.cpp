#include "ngrank/fusion.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "ngrank/error.hpp"

namespace ngrank {

const FusedEdge* FusedGraph::find(ItemId item) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), item,
                             [](const FusedEdge& e, ItemId id) { return e.item < id; });
  return (it != edges_.end() && it->item == item) ? &*it : nullptr;
}

FusedGraph fuse_graphs(std::vector<QueryGraph> graphs) {
  if (graphs.empty()) throw EmptyChannelListError("fusion needs at least one channel graph");
  const ItemId query = graphs.front().query;
  std::set<std::string> names;
  for (const auto& g : graphs) {
    if (g.tier != 3) throw InvalidInputError("fusion expects tier-3 graphs");
    if (g.query != query) {
      throw QueryMismatchError("channel '" + g.channel + "' is centred on " + std::to_string(g.query) +
                               ", expected " + std::to_string(query));
    }
    if (!names.insert(g.channel).second) {
      throw InvalidInputError("duplicate channel '" + g.channel + "' in fusion");
    }
  }
  std::sort(graphs.begin(), graphs.end(),
            [](const QueryGraph& a, const QueryGraph& b) { return a.channel < b.channel; });

  std::map<ItemId, FusedEdge> acc;
  for (const auto& g : graphs) {
    for (const auto& e : g.edges) {
      auto [it, fresh] = acc.try_emplace(e.item, FusedEdge{e.item, 0.0, 0.0, e.rank});
      it->second.weight += e.weight;
      it->second.tier1 += g.tier1_weight(e);
      if (!fresh) it->second.best_rank = std::min(it->second.best_rank, e.rank);
    }
  }
  acc.try_emplace(query, FusedEdge{query, 0.0, 0.0, 0});

  FusedGraph fused;
  fused.query_ = query;
  for (const auto& g : graphs) {
    fused.channels_.push_back(g.channel);
    fused.saturation_ += static_cast<double>(g.k2);
  }
  fused.nodes_.reserve(acc.size());
  fused.edges_.reserve(acc.size());
  for (const auto& [id, edge] : acc) {
    fused.nodes_.push_back(id);
    fused.edges_.push_back(edge);
  }
  fused.per_channel_ = std::move(graphs);
  return fused;
}

CorrelationEstimate correlation_estimate(const FusedGraph& fused, ItemId item) {
  const auto* e = fused.find(item);
  if (!e) throw UnknownItemError("item " + std::to_string(item) + " is not a node of the fused graph");
  const double raw = fused.saturation() > 0.0 ? e->weight / fused.saturation() : 0.0;
  const double p = std::clamp(raw, 0.0, 1.0);
  return {p, p != raw};
}

}  // namespace ngrank
