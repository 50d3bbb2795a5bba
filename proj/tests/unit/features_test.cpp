#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ngrank/error.hpp"
#include "ngrank/features.hpp"
#include "ngrank/metric.hpp"
#include "oracles.hpp"

namespace ngrank {
namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ngrank_features_" + name);
}

TEST(FeatureCsv, ParsesRowsWithHeaderAndComments) {
  const auto m = parse_features_csv("id,x,y\n# note\n3,1.5,-2\n\n1,+0.25,4e1\n", "ch");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.dim(), 2u);
  EXPECT_EQ(m.channel(), "ch");
  EXPECT_EQ(m.id(0), 3u);
  EXPECT_DOUBLE_EQ(m.row(0)[1], -2.0);
  EXPECT_DOUBLE_EQ(m.row(1)[0], 0.25);
  EXPECT_DOUBLE_EQ(m.row(1)[1], 40.0);
  EXPECT_EQ(m.find(1), std::optional<std::size_t>{1});
  EXPECT_FALSE(m.find(2).has_value());
}

TEST(FeatureCsv, OnlyFirstRowMayBeHeader) {
  EXPECT_THROW(parse_features_csv("1,2,3\nfoo,1,2\n"), FormatError);
  EXPECT_THROW(parse_features_csv("a,b\nc,d\n1,2\n"), FormatError);
}

TEST(FeatureCsv, RejectsMalformedInput) {
  EXPECT_THROW(parse_features_csv(""), FormatError);
  EXPECT_THROW(parse_features_csv("1,2,3\n2,4\n"), FormatError);
  EXPECT_THROW(parse_features_csv("1,2\n1,3\n"), FormatError);
  EXPECT_THROW(parse_features_csv("1,abc\n"), FormatError);
  EXPECT_THROW(parse_features_csv("1,nan\n"), FormatError);
  EXPECT_THROW(parse_features_csv("1\n"), FormatError);
  EXPECT_THROW(parse_features_csv("-1,2\n"), FormatError);
}

TEST(FeatureCsv, ErrorMessageCarriesLineNumber) {
  try {
    parse_features_csv("1,2\n2,3\n3,x\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(FeatureMatrix, AddChecksDimension) {
  FeatureMatrix m("c", 2);
  const std::vector<double> three{1, 2, 3};
  EXPECT_THROW(m.add(1, three), DimensionError);
}

TEST(FeatureFiles, CsvRoundTripIsExact) {
  const auto m = testing::random_gauss(50, 7, 11, "g");
  const auto path = temp_file("rt.csv");
  save_features_csv(m, path);
  const auto back = load_features(path, "g");
  ASSERT_EQ(back.size(), m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    EXPECT_EQ(back.id(r), m.id(r));
    for (std::size_t d = 0; d < m.dim(); ++d) EXPECT_EQ(back.row(r)[d], m.row(r)[d]);
  }
  std::filesystem::remove(path);
}

TEST(FeatureFiles, BinaryRoundTripNarrowsToFloat) {
  const auto m = testing::random_gauss(20, 3, 5);
  const auto path = temp_file("rt.bin");
  save_features_binary(m, path);
  EXPECT_EQ(infer_feature_format(path), FeatureFormat::kBinary);
  const auto back = load_features(path);
  ASSERT_EQ(back.size(), m.size());
  EXPECT_EQ(back.dim(), 3u);
  for (std::size_t r = 0; r < m.size(); ++r) {
    EXPECT_EQ(back.id(r), m.id(r));
    for (std::size_t d = 0; d < m.dim(); ++d) {
      EXPECT_EQ(back.row(r)[d], static_cast<double>(static_cast<float>(m.row(r)[d])));
    }
  }
  std::filesystem::remove(path);
}

TEST(FeatureFiles, BinaryRejectsTruncationAndBadMagic) {
  const auto m = testing::random_gauss(4, 2, 1);
  const auto path = temp_file("trunc.bin");
  save_features_binary(m, path);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 3);
  EXPECT_THROW(load_features(path), FormatError);
  {
    std::ofstream out(path, std::ios::binary);
    out << "XXXX\x02\0\0\0";
  }
  EXPECT_THROW(load_features(path), FormatError);
  std::filesystem::remove(path);
}

TEST(FeatureFiles, MissingFileIsIoError) {
  EXPECT_THROW(load_features(temp_file("does-not-exist.csv")), IoError);
}

TEST(Metric, MatchesReferenceFormulas) {
  const auto m = testing::random_gauss(30, 5, 3);
  for (Metric metric : {Metric::kL1, Metric::kL2, Metric::kCosine}) {
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = 0; b < m.size(); ++b) {
        EXPECT_NEAR(distance(m.row(a), m.row(b), metric),
                    testing::ref_distance(m.row(a), m.row(b), metric), 1e-12);
      }
    }
  }
}

TEST(Metric, SmallCases) {
  const std::vector<double> a{0, 0}, b{3, 4}, c{1, 0}, d{0, 2}, z{0, 0};
  EXPECT_DOUBLE_EQ(distance(a, b, Metric::kL1), 7.0);
  EXPECT_DOUBLE_EQ(distance(a, b, Metric::kL2), 5.0);
  EXPECT_DOUBLE_EQ(distance(c, d, Metric::kCosine), 1.0);
  EXPECT_DOUBLE_EQ(distance(c, c, Metric::kCosine), 0.0);
  EXPECT_THROW(distance(c, z, Metric::kCosine), ZeroVectorError);
  const std::vector<double> three{1, 2, 3};
  EXPECT_THROW(distance(a, three, Metric::kL1), DimensionError);
}

TEST(Metric, NamesRoundTrip) {
  for (Metric m : {Metric::kL1, Metric::kL2, Metric::kCosine}) {
    EXPECT_EQ(metric_from_string(to_string(m)), m);
  }
  EXPECT_EQ(metric_from_string("l2"), Metric::kL2);
  EXPECT_EQ(metric_from_string("COSINE"), Metric::kCosine);
  EXPECT_THROW(metric_from_string("hamming"), FormatError);
}

}  // namespace
}  // namespace ngrank
