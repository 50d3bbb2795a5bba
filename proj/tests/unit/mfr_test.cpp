#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "ngrank/error.hpp"
#include "ngrank/eval/oracle.hpp"
#include "ngrank/mfr.hpp"
#include "oracles.hpp"

namespace ngrank {
namespace {

// Pairwise table: the query row is the fused weight, every other pair a small
// random integer so ties are common.
struct TablePairwise {
  const FusedGraph* fused;
  std::map<std::pair<ItemId, ItemId>, double> table;
  double scale = 1.0;

  double operator()(ItemId u, ItemId i) const {
    if (u == fused->query()) return scale * fused->weight(i);
    const auto it = table.find({u, i});
    return scale * (it == table.end() ? 0.0 : it->second);
  }
};

TablePairwise random_table(const FusedGraph& f, std::mt19937_64& rng, int max_w) {
  TablePairwise t{&f, {}};
  std::uniform_int_distribution<int> w(0, max_w);
  for (ItemId u : f.nodes()) {
    for (ItemId i : f.nodes()) {
      if (u != i) t.table[{u, i}] = w(rng);
    }
  }
  return t;
}

struct Geo {
  std::vector<FeatureMatrix> features;
  std::vector<NeighborhoodIndex> indexes;
  std::vector<NeighborGraph> graphs;
};

Geo geometric(std::size_t m, std::size_t n, std::size_t k, std::uint64_t seed) {
  Geo g;
  for (std::size_t c = 0; c < m; ++c) {
    g.features.push_back(testing::random_grid(n, 2, 3, seed * 31 + c, "ch" + std::to_string(c)));
  }
  for (const auto& f : g.features) g.indexes.push_back(build_index(f, k, Metric::kL1, 1));
  for (const auto& idx : g.indexes) g.graphs.emplace_back(idx, k, k);
  return g;
}

FusedGraph fuse_at(const Geo& g, ItemId q, Tier3Mode mode = Tier3Mode::kTwoHop) {
  std::vector<QueryGraph> per;
  for (std::size_t c = 0; c < g.graphs.size(); ++c) {
    per.push_back(ttng_graph(g.graphs[c], QueryCenter::in_sample(g.graphs[c], q), mode, 1.0 + c));
  }
  return fuse_graphs(std::move(per));
}

std::vector<const NeighborGraph*> ptrs(const Geo& g) {
  std::vector<const NeighborGraph*> out;
  for (const auto& gr : g.graphs) out.push_back(&gr);
  return out;
}

TEST(Mfr, QueryFirstNoDuplicatesLengthBound) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto f = fuse_graphs(testing::random_query_graphs(2, 6, 0, 20, rng));
    const auto pw = random_table(f, rng, 4);
    for (std::size_t k : {1u, 3u, 50u}) {
      const auto r = mfr_select(f, std::cref(pw), k);
      EXPECT_EQ(r.items.front(), f.query());
      EXPECT_EQ(std::set<ItemId>(r.items.begin(), r.items.end()).size(), r.items.size());
      EXPECT_EQ(r.items.size(), std::min(k + 1, f.nodes().size()));
      EXPECT_EQ(r.items.size(), r.scores.size());
      for (ItemId i : r.items) EXPECT_NE(f.find(i), nullptr);
    }
  }
}

TEST(Mfr, FirstPickIsTopFusedCandidate) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto f = fuse_graphs(testing::random_query_graphs(3, 5, 0, 15, rng));
    const auto pw = random_table(f, rng, 3);
    const auto r = mfr_select(f, std::cref(pw), 1);
    ASSERT_EQ(r.items.size(), 2u);
    double best = -1;
    for (const auto& e : f.edges()) {
      if (e.item != f.query()) best = std::max(best, e.weight);
    }
    EXPECT_EQ(f.weight(r.items[1]), best);
  }
}

TEST(Mfr, PoolOfOne) {
  QueryGraph g;
  g.channel = "a";
  g.query = 3;
  g.tier = 3;
  g.k1 = g.k2 = 2;
  g.edges = {{3, 2, {1, 1}, 0}, {8, 1, {1, 3}, 1}};
  const auto f = fuse_graphs({g});
  const PairwiseFn pw = [](ItemId, ItemId) { return 0.0; };
  const auto r = mfr_select(f, pw, 5);
  EXPECT_EQ(r.items, (std::vector<ItemId>{3, 8}));
  const auto list = r.to_ranked_list();
  EXPECT_EQ(list.query, 3u);
  EXPECT_EQ(list.entries.size(), 2u);
  EXPECT_EQ(list.entries[1].tier, Provenance::kMfr);
}

TEST(Mfr, AllZeroFallsBackToTieBreak) {
  QueryGraph g;
  g.channel = "a";
  g.query = 0;
  g.tier = 3;
  g.k1 = g.k2 = 4;
  g.edges = {{0, 0, {1, 1}, 0}, {9, 0, {1, 8}, 1}, {4, 0, {1, 8}, 2}, {2, 0, {1, 8}, 3}};
  const auto f = fuse_graphs({g});
  const PairwiseFn zero = [](ItemId, ItemId) { return 0.0; };
  // equal weight and tier1: candidate rank decides
  EXPECT_EQ(mfr_select(f, zero, 3).items, (std::vector<ItemId>{0, 9, 4, 2}));
  EXPECT_EQ(eval::oracle_mfr(f, zero, 3).items, (std::vector<ItemId>{0, 9, 4, 2}));
}

TEST(Mfr, MatchesOracleOnRandomTables) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = 1 + t % 3;
    const auto f = fuse_graphs(testing::random_query_graphs(m, 3 + t % 6, 0, 40, rng));
    const auto pw = random_table(f, rng, t % 2 ? 2 : 20);
    for (std::size_t k : {3u, 5u, 8u}) {
      ASSERT_EQ(mfr_select(f, std::cref(pw), k).items, eval::oracle_mfr(f, std::cref(pw), k).items)
          << "instance " << t << " k " << k;
    }
  }
}

TEST(Mfr, MatchesOracleOnGeometricInstances) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t m = 1 + seed % 3;
    const auto g = geometric(m, 45, 6, seed);
    for (ItemId q : {g.features[0].id(0), g.features[0].id(17)}) {
      const auto f = fuse_at(g, q);
      PairwiseWeights pw(ptrs(g), f);
      for (std::size_t k : {3u, 5u, 8u}) {
        EXPECT_EQ(mfr_select(f, std::ref(pw), k).items, eval::oracle_mfr(f, std::ref(pw), k).items);
      }
    }
  }
}

TEST(Mfr, ScaleInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(1e-6, 1e6);
  for (int t = 0; t < 100; ++t) {
    const auto f = fuse_graphs(testing::random_query_graphs(1 + t % 3, 6, 0, 30, rng));
    auto pw = random_table(f, rng, 5);
    const auto base = mfr_select(f, std::cref(pw), 8).items;
    pw.scale = c(rng);
    EXPECT_EQ(mfr_select(f, std::cref(pw), 8).items, base) << "scale " << pw.scale;
  }
}

TEST(Mfr, SingleChannelFirstPickIsTtngTop) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = geometric(1, 60, 7, seed);
    for (ItemId q : g.features[0].ids()) {
      const auto f = fuse_at(g, q);
      PairwiseWeights pw(ptrs(g), f);
      const auto r = mfr_select(f, std::ref(pw), 1);
      const auto top = ttng_rerank(g.graphs[0], q, Tier3Mode::kTwoHop, 1.0);
      ASSERT_EQ(r.items[1], top.entries[1].item) << "seed " << seed << " q " << q;
    }
  }
}

TEST(PairwiseWeights, QueryRowIsFusedWeightOthersArePerCenterSums) {
  const auto g = geometric(2, 40, 5, 4);
  const ItemId q = g.features[0].id(3);
  const auto f = fuse_at(g, q);
  PairwiseWeights pw(ptrs(g), f);
  for (ItemId i : f.nodes()) EXPECT_EQ(pw(q, i), f.weight(i));
  for (ItemId u : f.nodes()) {
    if (u == q) continue;
    std::map<ItemId, double> want;
    for (const auto& idx : g.indexes) {
      for (auto [item, w] : testing::brute_tier3(idx, 5, 5, u, Tier3Mode::kTwoHop)) want[item] += w;
    }
    for (ItemId i : f.nodes()) {
      EXPECT_EQ(pw(u, i), want.count(i) ? want[i] : 0.0) << "u " << u << " i " << i;
    }
  }
  EXPECT_EQ(pw.centers_computed(), f.nodes().size() - 1);
}

TEST(MfrProduct, DegenerateWhenEveryProductIsZero) {
  QueryGraph g;
  g.channel = "a";
  g.query = 0;
  g.tier = 3;
  g.k1 = g.k2 = 3;
  g.edges = {{0, 3, {1, 1}, 0}, {1, 2, {1, 2}, 1}, {2, 1, {1, 3}, 2}};
  const auto f = fuse_graphs({g});
  // Item 1 has zero correlation to everything, so after it is picked every
  // product collapses.
  const PairwiseFn pw = [&](ItemId u, ItemId i) { return u == 0 ? f.weight(i) : 0.0; };
  EXPECT_THROW(mfr_select_product(f, pw, 2), DegenerateError);
  EXPECT_EQ(mfr_select_product(f, pw, 1).items, (std::vector<ItemId>{0, 1}));
}

TEST(MfrProduct, EqualPositiveCorrelationsMatchSum) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto f = fuse_graphs(testing::random_query_graphs(2, 5, 0, 20, rng));
    const PairwiseFn flat = [](ItemId, ItemId) { return 4.0; };
    EXPECT_EQ(mfr_select_product(f, flat, 6).items, mfr_select(f, flat, 6).items);
  }
}

TEST(MfrProduct, AgreesWithLogSumOracle) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> w(1, 10);
  for (int t = 0; t < 100; ++t) {
    const auto f = fuse_graphs(testing::random_query_graphs(2, 6, 0, 25, rng));
    std::map<std::pair<ItemId, ItemId>, double> table;
    for (ItemId u : f.nodes()) {
      for (ItemId i : f.nodes()) table[{u, i}] = w(rng);
    }
    const PairwiseFn pw = [&](ItemId u, ItemId i) { return table.at({u, i}); };
    const auto got = mfr_select_product(f, pw, 6);

    // sum of log p over the selected set, recomputed at every step
    std::vector<ItemId> sel{f.query()};
    while (sel.size() < std::min<std::size_t>(7, f.nodes().size())) {
      ItemId best = 0;
      double best_score = -1e300;
      const FusedEdge* best_edge = nullptr;
      for (const auto& e : f.edges()) {
        if (std::find(sel.begin(), sel.end(), e.item) != sel.end()) continue;
        double s = 0.0;
        for (ItemId u : sel) s += std::log(std::min(1.0, pw(u, e.item) / f.saturation()));
        const bool tie = std::abs(s - best_score) <= 1e-9 * std::max(std::abs(s), 1.0);
        bool take = !best_edge || (!tie && s > best_score);
        if (best_edge && tie) {
          if (e.weight != best_edge->weight) take = e.weight > best_edge->weight;
          else if (std::abs(e.tier1 - best_edge->tier1) > 1e-12) take = e.tier1 > best_edge->tier1;
          else if (e.best_rank != best_edge->best_rank) take = e.best_rank < best_edge->best_rank;
          else take = e.item < best_edge->item;
        }
        if (take) best = e.item, best_score = s, best_edge = &e;
      }
      sel.push_back(best);
    }
    EXPECT_EQ(got.items, sel) << "instance " << t;
  }
}

TEST(MfrVariantNames, RoundTrip) {
  EXPECT_EQ(mfr_variant_from_string("sum"), MfrVariant::kSum);
  EXPECT_EQ(mfr_variant_from_string(to_string(MfrVariant::kProduct)), MfrVariant::kProduct);
  EXPECT_THROW(mfr_variant_from_string("max"), InvalidInputError);
}

TEST(Oracle, RefusesLargeInstances) {
  std::mt19937_64 rng(1);
  const auto f = fuse_graphs(testing::random_query_graphs(3, 20, 0, 100000, rng));
  ASSERT_GT(f.nodes().size(), eval::kOracleMaxNodes);
  const PairwiseFn pw = [](ItemId, ItemId) { return 1.0; };
  EXPECT_THROW(eval::oracle_mfr(f, pw, 3), SizeError);
}

TEST(Oracle, PoolOfTwoPicksTheLarger) {
  QueryGraph g;
  g.channel = "a";
  g.query = 0;
  g.tier = 3;
  g.k1 = g.k2 = 3;
  g.edges = {{0, 3, {1, 1}, 0}, {5, 1, {1, 3}, 1}, {6, 2, {1, 3}, 2}};
  const auto f = fuse_graphs({g});
  const PairwiseFn pw = [&](ItemId u, ItemId i) { return u == 0 ? f.weight(i) : 0.0; };
  EXPECT_EQ(eval::oracle_mfr(f, pw, 2).items, (std::vector<ItemId>{0, 6, 5}));
}

}  // namespace
}  // namespace ngrank
