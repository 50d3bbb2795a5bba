#include "ngrank/ttng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ngrank/error.hpp"

namespace ngrank {

namespace {

// Generation-stamped row set; clearing is O(1). One instance per thread.
class RowMarks {
 public:
  void reset(std::size_t rows) {
    if (stamp_.size() < rows) stamp_.resize(rows, 0);
    if (++generation_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      generation_ = 1;
    }
  }
  void mark(Row r) { stamp_[r] = generation_; }
  bool marked(Row r) const { return stamp_[r] == generation_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t generation_ = 0;
};

// Tri-state memo: unknown / yes / no.
class RowMemo {
 public:
  void reset(std::size_t rows) { known_.reset(rows), yes_.reset(rows); }
  bool known(Row r) const { return known_.marked(r); }
  bool value(Row r) const { return yes_.marked(r); }
  void set(Row r, bool v) {
    known_.mark(r);
    if (v) yes_.mark(r);
  }

 private:
  RowMarks known_;
  RowMarks yes_;
};

struct Scratch {
  RowMarks query_set;   // N_k1(q)
  RowMarks tier2_set;   // rows with w'(., q) = 1
  RowMarks local_set;   // N_k1(x) for the literal reading
  RowMemo reaches;      // [N_k2(x') ∩ N_k1(q) != ∅]
};

Scratch& scratch_for(std::size_t rows) {
  thread_local Scratch s;
  s.query_set.reset(rows);
  s.tier2_set.reset(rows);
  s.local_set.reset(rows);
  s.reaches.reset(rows);
  return s;
}

class TierEvaluator {
 public:
  TierEvaluator(const NeighborGraph& graph, const QueryCenter& center)
      : graph_(graph), center_(center), s_(scratch_for(std::size_t{graph.rows()} + 1)) {
    for (Row r : center_.cknns()) s_.query_set.mark(r);
  }

  std::span<const Row> neighborhood(Row r) const {
    return r == center_.row() ? center_.neighborhood() : graph_.neighborhood(r);
  }
  std::span<const Row> cknns(Row r) const {
    return r == center_.row() ? center_.cknns() : graph_.cknns(r);
  }

  JaccardValue jaccard_to_query(Row x) const {
    const auto nx = neighborhood(x);
    std::uint32_t common = 0;
    for (Row r : nx) common += s_.query_set.marked(r) ? 1 : 0;
    const auto uni = static_cast<std::uint32_t>(nx.size() + center_.cknns().size()) - common;
    return {common, uni};
  }

  bool reaches_query(Row x) {
    if (s_.reaches.known(x)) return s_.reaches.value(x);
    bool hit = false;
    for (Row r : neighborhood(x)) {
      if (s_.query_set.marked(r)) {
        hit = true;
        break;
      }
    }
    s_.reaches.set(x, hit);
    return hit;
  }

  // tier2[i] is the second-tier weight of the i-th candidate.
  void fill_tier3(Tier3Mode mode, std::span<const std::uint32_t> tier2,
                  std::span<std::uint32_t> tier3) {
    const auto cands = center_.cknns();
    switch (mode) {
      case Tier3Mode::kTwoHop:
        for (std::size_t i = 0; i < cands.size(); ++i) {
          std::uint32_t w = 0;
          if (tier2[i] != 0) {
            for (Row xp : neighborhood(cands[i])) w += reaches_query(xp) ? 1 : 0;
          }
          tier3[i] = w;
        }
        break;
      case Tier3Mode::kQueryAnchored:
        for (std::size_t i = 0; i < cands.size(); ++i) {
          if (tier2[i] != 0) s_.tier2_set.mark(cands[i]);
        }
        for (std::size_t i = 0; i < cands.size(); ++i) {
          std::uint32_t w = 0;
          for (Row xp : neighborhood(cands[i])) w += s_.tier2_set.marked(xp) ? 1 : 0;
          tier3[i] = w;
        }
        break;
      case Tier3Mode::kLiteral:
        for (std::size_t i = 0; i < cands.size(); ++i) {
          // w'(x', x) = [J(x', x) > 0] and [x' in N_k1(x)], with x as the center.
          const Row x = cands[i];
          s_.local_set.reset(std::size_t{graph_.rows()} + 1);
          for (Row r : cknns(x)) s_.local_set.mark(r);
          std::uint32_t w = 0;
          for (Row xp : neighborhood(x)) {
            if (!s_.local_set.marked(xp)) continue;
            for (Row r : neighborhood(xp)) {
              if (s_.local_set.marked(r)) {
                ++w;
                break;
              }
            }
          }
          tier3[i] = w;
        }
        break;
    }
  }

 private:
  const NeighborGraph& graph_;
  const QueryCenter& center_;
  Scratch& s_;
};

ItemId item_of(const NeighborGraph& graph, const QueryCenter& center, Row r) {
  return r == center.row() ? center.id() : graph.id(r);
}

QueryGraph make_graph(const NeighborGraph& graph, const QueryCenter& center, int tier, double alpha) {
  QueryGraph g;
  g.channel = graph.channel();
  g.query = center.id();
  g.tier = tier;
  g.k1 = graph.k1();
  g.k2 = graph.k2();
  g.alpha = alpha;
  return g;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidInputError("alpha must be a positive finite number");
  }
}

// The graph's edges must line up with the center's candidate set.
void check_aligned(const NeighborGraph& graph, const QueryCenter& center, const QueryGraph& g) {
  const auto cands = center.cknns();
  if (g.query != center.id()) {
    throw QueryMismatchError("graph is for query " + std::to_string(g.query) + ", center is " +
                             std::to_string(center.id()));
  }
  bool ok = g.edges.size() == cands.size();
  for (std::size_t i = 0; ok && i < cands.size(); ++i) {
    ok = g.edges[i].item == item_of(graph, center, cands[i]);
  }
  if (!ok) throw InvalidInputError("graph edges do not match the query's candidate set");
}

RankedList to_ranked(const QueryGraph& g, std::vector<std::size_t> order, Provenance tier) {
  RankedList out;
  out.query = g.query;
  out.entries.reserve(order.size());
  for (std::size_t i : order) out.entries.push_back({g.edges[i].item, g.edges[i].weight, tier});
  return out;
}

}  // namespace

std::string_view to_string(Tier3Mode mode) {
  switch (mode) {
    case Tier3Mode::kTwoHop: return "two-hop";
    case Tier3Mode::kQueryAnchored: return "query-anchored";
    case Tier3Mode::kLiteral: return "literal";
  }
  return "?";
}

Tier3Mode tier3_mode_from_string(std::string_view s) {
  if (s == "two-hop") return Tier3Mode::kTwoHop;
  if (s == "query-anchored") return Tier3Mode::kQueryAnchored;
  if (s == "literal") return Tier3Mode::kLiteral;
  throw InvalidInputError("unknown tier3 mode '" + std::string(s) + "'");
}

NeighborGraph::NeighborGraph(const NeighborhoodIndex& index, std::size_t k1, std::size_t k2)
    : channel_(index.channel()), k1_(k1), k2_(k2) {
  if (k1 == 0 || k2 == 0) throw InvalidInputError("k1 and k2 must be at least 1");
  if (k1 > index.k() || k2 > index.k()) {
    throw InvalidInputError("index '" + index.channel() + "' was built with k=" +
                            std::to_string(index.k()) + ", smaller than k1=" + std::to_string(k1) +
                            "/k2=" + std::to_string(k2));
  }
  len1_ = std::min(k1, index.list_length());
  len2_ = std::min(k2, index.list_length());
  stride_ = std::max(len1_, len2_);
  const std::size_t n = index.size();

  // Neighbour lists in index-row space.
  std::vector<std::size_t> local(n * stride_);
  for (std::size_t r = 0; r < n; ++r) {
    const auto list = index.neighbors_at(r);
    for (std::size_t i = 0; i < stride_; ++i) local[r * stride_ + i] = *index.row_of(list[i].id);
  }

  // Breadth-first renumbering.
  constexpr Row kUnset = static_cast<Row>(-1);
  std::vector<Row> row_of_index(n, kUnset);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t start = 0; start < n; ++start) {
    if (row_of_index[start] != kUnset) continue;
    row_of_index[start] = static_cast<Row>(order.size());
    order.push_back(start);
    for (std::size_t head = order.size() - 1; head < order.size(); ++head) {
      const std::size_t r = order[head];
      for (std::size_t i = 0; i < stride_; ++i) {
        const std::size_t nb = local[r * stride_ + i];
        if (row_of_index[nb] == kUnset) {
          row_of_index[nb] = static_cast<Row>(order.size());
          order.push_back(nb);
        }
      }
    }
  }

  ids_.resize(n);
  lists_.resize(n * stride_);
  row_of_.reserve(n);
  for (std::size_t g = 0; g < n; ++g) {
    const std::size_t r = order[g];
    ids_[g] = index.ids()[r];
    row_of_.emplace(ids_[g], static_cast<Row>(g));
    for (std::size_t i = 0; i < stride_; ++i) {
      lists_[g * stride_ + i] = row_of_index[local[r * stride_ + i]];
    }
  }
}

std::optional<Row> NeighborGraph::row_of(ItemId id) const {
  if (auto it = row_of_.find(id); it != row_of_.end()) return it->second;
  return std::nullopt;
}

QueryCenter QueryCenter::in_sample(const NeighborGraph& graph, ItemId id) {
  const auto row = graph.row_of(id);
  if (!row) {
    throw UnknownItemError("item " + std::to_string(id) + " is not in channel '" + graph.channel() + "'");
  }
  QueryCenter c;
  c.id_ = id;
  c.row_ = *row;
  const auto k1 = graph.cknns(*row);
  const auto k2 = graph.neighborhood(*row);
  c.cknns_.assign(k1.begin(), k1.end());
  c.nbhd_.assign(k2.begin(), k2.end());
  return c;
}

QueryCenter QueryCenter::out_of_sample(const NeighborGraph& graph, const FeatureMatrix& features,
                                       std::span<const double> vector, Metric metric,
                                       ItemId virtual_id) {
  if (graph.row_of(virtual_id)) {
    throw InvalidInputError("virtual query id " + std::to_string(virtual_id) +
                            " collides with a stored item");
  }
  QueryCenter c;
  c.id_ = virtual_id;
  c.row_ = graph.rows();
  c.virtual_ = true;
  c.cknns_.push_back(c.row_);
  c.nbhd_.push_back(c.row_);
  const std::size_t want = std::max(graph.cknns_length(), graph.neighborhood_length()) - 1;
  if (want > 0) {
    const auto knn = query_knn(features, vector, want, metric, virtual_id);
    for (std::size_t i = 0; i < knn.entries.size(); ++i) {
      const auto row = graph.row_of(knn.entries[i].item);
      if (!row) {
        throw InvalidInputError("feature item " + std::to_string(knn.entries[i].item) +
                                " is missing from channel '" + graph.channel() + "'");
      }
      if (i + 1 < graph.cknns_length()) c.cknns_.push_back(*row);
      if (i + 1 < graph.neighborhood_length()) c.nbhd_.push_back(*row);
    }
  } else if (vector.size() != features.dim()) {
    throw DimensionError("query has dimension " + std::to_string(vector.size()) +
                         ", features have " + std::to_string(features.dim()));
  }
  return c;
}

std::vector<CandidateTiers> compute_tiers(const NeighborGraph& graph, const QueryCenter& center,
                                          Tier3Mode mode) {
  TierEvaluator eval(graph, center);
  const auto cands = center.cknns();
  std::vector<CandidateTiers> out(cands.size());
  std::vector<std::uint32_t> tier2(cands.size());
  std::vector<std::uint32_t> tier3(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    auto& c = out[i];
    c.row = cands[i];
    c.item = item_of(graph, center, cands[i]);
    c.rank = static_cast<std::uint32_t>(i);
    c.jaccard = eval.jaccard_to_query(cands[i]);
    // Every candidate is in N_k1(q) by construction; only the Jaccard test remains.
    tier2[i] = c.tier2 = c.jaccard.positive() ? 1 : 0;
  }
  eval.fill_tier3(mode, tier2, tier3);
  for (std::size_t i = 0; i < cands.size(); ++i) out[i].tier3 = tier3[i];
  return out;
}

const QueryEdge* QueryGraph::find(ItemId item) const {
  for (const auto& e : edges) {
    if (e.item == item) return &e;
  }
  return nullptr;
}

QueryGraph stng_weights(const NeighborGraph& graph, const QueryCenter& center, double alpha) {
  check_alpha(alpha);
  TierEvaluator eval(graph, center);
  auto g = make_graph(graph, center, 1, alpha);
  const auto cands = center.cknns();
  g.edges.reserve(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto j = eval.jaccard_to_query(cands[i]);
    g.edges.push_back({item_of(graph, center, cands[i]), alpha * j.value(), j,
                       static_cast<std::uint32_t>(i)});
  }
  return g;
}

QueryGraph tier2_weights(const QueryGraph& tier1) {
  if (tier1.tier != 1) throw InvalidInputError("tier2_weights expects a tier-1 graph");
  QueryGraph g = tier1;
  g.tier = 2;
  // The edge set is the candidate set, so membership holds for every edge.
  for (auto& e : g.edges) e.weight = e.jaccard.positive() ? 1.0 : 0.0;
  return g;
}

QueryGraph tier3_weights(const NeighborGraph& graph, const QueryCenter& center,
                         const QueryGraph& tier2, Tier3Mode mode) {
  if (tier2.tier != 2) throw InvalidInputError("tier3_weights expects a tier-2 graph");
  check_aligned(graph, center, tier2);
  std::vector<std::uint32_t> w2(tier2.edges.size());
  for (std::size_t i = 0; i < w2.size(); ++i) {
    const double w = tier2.edges[i].weight;
    if (w != 0.0 && w != 1.0) throw InvalidInputError("tier-2 weights must be 0 or 1");
    w2[i] = w == 1.0 ? 1 : 0;
  }
  std::vector<std::uint32_t> w3(w2.size());
  TierEvaluator eval(graph, center);
  eval.fill_tier3(mode, w2, w3);
  QueryGraph g = tier2;
  g.tier = 3;
  for (std::size_t i = 0; i < w3.size(); ++i) g.edges[i].weight = w3[i];
  return g;
}

QueryGraph ttng_graph(const NeighborGraph& graph, const QueryCenter& center, Tier3Mode mode,
                      double alpha) {
  check_alpha(alpha);
  const auto tiers = compute_tiers(graph, center, mode);
  auto g = make_graph(graph, center, 3, alpha);
  g.edges.reserve(tiers.size());
  for (const auto& t : tiers) g.edges.push_back({t.item, static_cast<double>(t.tier3), t.jaccard, t.rank});
  return g;
}

RankedList stng_rerank(const NeighborGraph& graph, const QueryCenter& center, double alpha) {
  const auto g = stng_weights(graph, center, alpha);
  std::vector<std::size_t> order(g.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = g.edges[a];
    const auto& eb = g.edges[b];
    if ((ea.item == g.query) != (eb.item == g.query)) return ea.item == g.query;
    if (ea.jaccard != eb.jaccard) return ea.jaccard > eb.jaccard;
    if (ea.rank != eb.rank) return ea.rank < eb.rank;
    return ea.item < eb.item;
  });
  return to_ranked(g, std::move(order), Provenance::kStng);
}

RankedList ttng_rerank(const NeighborGraph& graph, const QueryCenter& center, Tier3Mode mode,
                       double alpha) {
  const auto g = ttng_graph(graph, center, mode, alpha);
  std::vector<std::size_t> order(g.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = g.edges[a];
    const auto& eb = g.edges[b];
    if ((ea.item == g.query) != (eb.item == g.query)) return ea.item == g.query;
    if (ea.weight != eb.weight) return ea.weight > eb.weight;
    if (ea.jaccard != eb.jaccard) return ea.jaccard > eb.jaccard;
    if (ea.rank != eb.rank) return ea.rank < eb.rank;
    return ea.item < eb.item;
  });
  return to_ranked(g, std::move(order), Provenance::kTtng);
}

RankedList ttng_rerank(const NeighborGraph& graph, ItemId query, Tier3Mode mode, double alpha) {
  return ttng_rerank(graph, QueryCenter::in_sample(graph, query), mode, alpha);
}

}  // namespace ngrank
