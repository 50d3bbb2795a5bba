#include <gtest/gtest.h>

#include "ngrank/error.hpp"
#include "ngrank/neighbor_index.hpp"
#include "oracles.hpp"

namespace ngrank {
namespace {

std::vector<ItemId> ids_of(std::span<const Neighbor> list) {
  std::vector<ItemId> out;
  for (const auto& n : list) out.push_back(n.id);
  return out;
}

TEST(BuildIndex, MatchesBruteForceWithTies) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = testing::random_grid(60, 2, 3, seed);
    for (Metric m : {Metric::kL1, Metric::kL2}) {
      for (std::size_t k : {1u, 4u, 9u}) {
        const auto idx = build_index(f, k, m, 3);
        ASSERT_EQ(idx.size(), f.size());
        for (ItemId id : f.ids()) {
          ASSERT_EQ(ids_of(idx.neighbors(id)), testing::brute_knn(f, id, k, m))
              << "seed " << seed << " id " << id << " k " << k;
        }
      }
    }
  }
}

TEST(BuildIndex, SelfFirstEvenWithDuplicatePoints) {
  FeatureMatrix f("c", 1);
  for (ItemId id : {5u, 2u, 9u}) {
    const std::vector<double> v{1.0};
    f.add(id, v);
  }
  const auto idx = build_index(f, 3);
  EXPECT_EQ(ids_of(idx.neighbors(9)), (std::vector<ItemId>{9, 2, 5}));
  EXPECT_EQ(ids_of(idx.neighbors(2)), (std::vector<ItemId>{2, 5, 9}));
  EXPECT_EQ(idx.neighbors(9)[0].distance, 0.0);
}

TEST(BuildIndex, RowsSortedAndLengthClamped) {
  const auto f = testing::random_grid(6, 2, 5, 1);
  const auto idx = build_index(f, 50);
  EXPECT_EQ(idx.k(), 50u);
  EXPECT_EQ(idx.list_length(), 6u);
  EXPECT_TRUE(std::is_sorted(idx.ids().begin(), idx.ids().end()));
  EXPECT_THROW(build_index(f, 0), InvalidInputError);
  EXPECT_THROW(idx.neighbors(2), UnknownItemError);
}

TEST(BuildIndex, IndependentOfThreadCount) {
  const auto f = testing::random_gauss(300, 6, 9);
  const auto a = build_index(f, 12, Metric::kCosine, 1);
  const auto b = build_index(f, 12, Metric::kCosine, 8);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(serialize_index(a), serialize_index(b));
}

TEST(QueryKnn, OutOfSampleVector) {
  const auto f = testing::random_grid(40, 3, 4, 2);
  const std::vector<double> q{0.5, 0.5, 0.5};
  const auto list = query_knn(f, q, 5, Metric::kL1, 999);
  ASSERT_EQ(list.entries.size(), 5u);
  EXPECT_EQ(list.query, 999u);
  for (std::size_t i = 1; i < list.entries.size(); ++i) {
    EXPECT_LE(list.entries[i - 1].score, list.entries[i].score);
  }
  const std::vector<double> bad{1.0};
  EXPECT_THROW(query_knn(f, bad, 5, Metric::kL1, 0), DimensionError);
}

TEST(IndexFile, RoundTripIsByteIdentical) {
  const auto f = testing::random_gauss(80, 4, 4, "colour");
  const auto idx = build_index(f, 7, Metric::kL2);
  const auto text = serialize_index(idx);
  const auto back = parse_index(text);
  EXPECT_TRUE(back == idx);
  EXPECT_EQ(serialize_index(back), text);
  EXPECT_EQ(back.channel(), "colour");

  const auto path = std::filesystem::temp_directory_path() / "ngrank_index_rt.json";
  save_index(idx, path);
  EXPECT_TRUE(load_index(path) == idx);
  std::filesystem::remove(path);
}

TEST(IndexFile, RejectsBadDocuments) {
  const auto idx = build_index(testing::random_grid(5, 2, 3, 0), 3);
  auto text = serialize_index(idx);
  EXPECT_THROW(parse_index("not json"), FormatError);
  auto wrong_tag = text;
  wrong_tag.replace(wrong_tag.find("ngrank-index"), 12, "other-index!");
  EXPECT_THROW(parse_index(wrong_tag), FormatError);
  auto wrong_version = text;
  wrong_version.replace(wrong_version.find("\"version\":1"), 11, "\"version\":7");
  EXPECT_THROW(parse_index(wrong_version), FormatError);
  EXPECT_THROW(load_index("/nonexistent/dir/x.json"), IoError);
}

TEST(FromLists, ValidatesStructure) {
  using L = std::map<ItemId, std::vector<Neighbor>>;
  EXPECT_NO_THROW(NeighborhoodIndex::from_lists("c", 2, Metric::kL1, L{{1, {{1, 0}, {2, 1}}}, {2, {{2, 0}, {1, 1}}}}));
  // not self first
  EXPECT_THROW(NeighborhoodIndex::from_lists("c", 2, Metric::kL1, L{{1, {{2, 1}, {1, 0}}}, {2, {{2, 0}, {1, 1}}}}), FormatError);
  // unsorted
  EXPECT_THROW(NeighborhoodIndex::from_lists("c", 3, Metric::kL1,
                                             L{{1, {{1, 0}, {3, 2}, {2, 1}}}, {2, {{2, 0}, {1, 1}, {3, 1}}}, {3, {{3, 0}, {1, 1}, {2, 1}}}}),
               FormatError);
  // unknown neighbour
  EXPECT_THROW(NeighborhoodIndex::from_lists("c", 2, Metric::kL1, L{{1, {{1, 0}, {7, 1}}}, {2, {{2, 0}, {1, 1}}}}), FormatError);
  // wrong length
  EXPECT_THROW(NeighborhoodIndex::from_lists("c", 2, Metric::kL1, L{{1, {{1, 0}}}, {2, {{2, 0}, {1, 1}}}}), FormatError);
}

}  // namespace
}  // namespace ngrank
