#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ngrank/eval/metrics.hpp"
#include "ngrank/features.hpp"
#include "ngrank/metric.hpp"
#include "ngrank/neighbor_index.hpp"

namespace ngrank::eval {

/// A small planted dataset. Items carry letter names; ids follow name order.
struct Scenario {
  std::string name;
  std::vector<FeatureMatrix> channels;
  GroundTruth truth;
  ItemId query = 0;
  std::size_t k = 5;
  Metric metric = Metric::kL1;
  std::map<std::string, ItemId> names;
  /// Human readable statements checked before the scenario was returned.
  std::vector<std::string> relations;

  /// Throws UnknownItemError.
  ItemId id(std::string_view item_name) const;
  std::string name_of(ItemId id) const;
};

/// One query A on a manifold A..I with an outlier O next to it. O's own
/// neighbours O1, O2 sit on a separate structure. Index size k = 5 (self and
/// four neighbours). Coordinates get a seeded jitter of at most 0.01 and the
/// neighbourhoods are re-checked afterwards; throws DegenerateError on a
/// failed check.
Scenario gen_outlier_scenario(std::uint64_t seed);

/// Query A on manifold M1 = {A, C, D, ...} with boundary item B from M2 =
/// {B, E, F, ...} sitting close to A in channel 1. Channel 2 separates the
/// manifolds. k = 5.
Scenario gen_two_manifold_scenario(std::uint64_t seed);

/// Two-class neighbourhood model. Class A = {0 .. k-1} with the query 0,
/// whose neighbourhood is all of A. Every other member x of A has x itself
/// plus k - 1 slots, each drawn from A \ {x} with probability p and from
/// class B otherwise. Class B members only neighbour B.
struct StructuralTrial {
  NeighborhoodIndex index;
  ItemId query = 0;
  std::size_t class_a_size = 0;  ///< ids below this are in class A
  bool in_class_a(ItemId id) const { return id < class_a_size; }
};

StructuralTrial gen_structural_trial(std::size_t k, double p, std::mt19937_64& rng);

struct GaussianSpec {
  std::size_t classes = 20;
  std::size_t per_class = 20;
  std::size_t dim = 8;
  std::size_t channels = 1;
  double center_spread = 1.0;  ///< std-dev of class centres
  double noise = 1.0;          ///< std-dev of item noise around the centre
};

/// Gaussian classes observed through independent channels of equal quality:
/// each channel draws its own class centres and item noise.
Scenario gen_gaussian_channels(const GaussianSpec& spec, std::uint64_t seed);

/// Clustered vectors for timing runs: `clusters` Gaussian blobs in `dim`
/// dimensions, ids 0 .. n-1.
FeatureMatrix gen_clustered(std::size_t n, std::size_t dim, std::size_t clusters,
                            std::uint64_t seed, std::string channel = "bench");

}  // namespace ngrank::eval
