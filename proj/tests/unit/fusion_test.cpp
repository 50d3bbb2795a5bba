#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "ngrank/error.hpp"
#include "ngrank/fusion.hpp"
#include "oracles.hpp"

namespace ngrank {
namespace {

QueryGraph graph_of(std::string channel, ItemId q, std::vector<std::pair<ItemId, double>> edges,
                    std::size_t k = 5) {
  QueryGraph g;
  g.channel = std::move(channel);
  g.query = q;
  g.tier = 3;
  g.k1 = g.k2 = k;
  std::uint32_t rank = 0;
  for (auto [id, w] : edges) g.edges.push_back({id, w, {1, 2}, rank++});
  return g;
}

TEST(Fuse, SingleChannelIsIdentity) {
  const auto g = graph_of("a", 1, {{1, 5}, {4, 3}, {2, 0}});
  const auto f = fuse_graphs({g});
  EXPECT_EQ(f.m(), 1u);
  EXPECT_EQ(f.nodes(), (std::vector<ItemId>{1, 2, 4}));
  EXPECT_EQ(f.weight(4), 3.0);
  EXPECT_EQ(f.weight(2), 0.0);
  EXPECT_EQ(f.find(4)->best_rank, 1u);
  EXPECT_EQ(f.saturation(), 5.0);
}

TEST(Fuse, DisjointChannelsKeepTheirWeights) {
  const auto f = fuse_graphs({graph_of("a", 1, {{1, 5}, {2, 4}}), graph_of("b", 1, {{1, 5}, {3, 2}})});
  EXPECT_EQ(f.nodes(), (std::vector<ItemId>{1, 2, 3}));
  EXPECT_EQ(f.weight(1), 10.0);
  EXPECT_EQ(f.weight(2), 4.0);
  EXPECT_EQ(f.weight(3), 2.0);
  EXPECT_EQ(f.weight(99), 0.0);
  EXPECT_EQ(f.find(99), nullptr);
  EXPECT_EQ(f.saturation(), 10.0);
}

TEST(Fuse, WeightsEqualPerChannelSums) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const auto graphs = testing::random_query_graphs(1 + t % 4, 5, 0, 30, rng);
    std::map<ItemId, double> weight, tier1;
    std::map<ItemId, std::uint32_t> best;
    for (const auto& g : graphs) {
      for (const auto& e : g.edges) {
        weight[e.item] += e.weight;
        tier1[e.item] += g.alpha * e.jaccard.value();
        best[e.item] = best.count(e.item) ? std::min(best[e.item], e.rank) : e.rank;
      }
    }
    const auto f = fuse_graphs(graphs);
    ASSERT_EQ(f.nodes().size(), weight.size());
    for (const auto& e : f.edges()) {
      EXPECT_DOUBLE_EQ(e.weight, weight.at(e.item));
      EXPECT_NEAR(e.tier1, tier1.at(e.item), 1e-12);
      EXPECT_EQ(e.best_rank, best.at(e.item));
    }
  }
}

TEST(Fuse, ChannelOrderNeverMatters) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    auto graphs = testing::random_query_graphs(3, 6, 2, 25, rng);
    const auto a = fuse_graphs(graphs);
    std::shuffle(graphs.begin(), graphs.end(), rng);
    const auto b = fuse_graphs(graphs);
    EXPECT_EQ(a.edges(), b.edges());
    EXPECT_EQ(a.channels(), b.channels());
  }
}

TEST(Fuse, Errors) {
  EXPECT_THROW(fuse_graphs({}), EmptyChannelListError);
  EXPECT_THROW(fuse_graphs({graph_of("a", 1, {{1, 5}}), graph_of("b", 2, {{2, 5}})}), QueryMismatchError);
  EXPECT_THROW(fuse_graphs({graph_of("a", 1, {{1, 5}}), graph_of("a", 1, {{1, 5}})}), InvalidInputError);
  auto t1 = graph_of("a", 1, {{1, 5}});
  t1.tier = 1;
  EXPECT_THROW(fuse_graphs({t1}), InvalidInputError);
}

TEST(CorrelationEstimate, NormalisedBySaturation) {
  const auto f = fuse_graphs({graph_of("a", 1, {{1, 5}, {2, 0}, {3, 4}}), graph_of("b", 1, {{1, 5}, {3, 5}})});
  EXPECT_EQ(correlation_estimate(f, 2).p_hat, 0.0);
  EXPECT_EQ(correlation_estimate(f, 1).p_hat, 1.0);
  EXPECT_DOUBLE_EQ(correlation_estimate(f, 3).p_hat, 0.9);
  EXPECT_FALSE(correlation_estimate(f, 3).clamped);
  EXPECT_THROW(correlation_estimate(f, 42), UnknownItemError);
}

TEST(CorrelationEstimate, ClampsAndFlags) {
  const auto f = fuse_graphs({graph_of("a", 1, {{1, 5}, {2, 7}})});
  const auto est = correlation_estimate(f, 2);
  EXPECT_EQ(est.p_hat, 1.0);
  EXPECT_TRUE(est.clamped);
}

}  // namespace
}  // namespace ngrank
