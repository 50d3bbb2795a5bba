#pragma once

#include <cstdint>
#include <numeric>
#include <span>

#include "ngrank/types.hpp"

namespace ngrank {

/// |a ∩ b| / |a ∪ b| kept as an exact ratio. Comparisons are exact
/// (cross-multiplied) and ignore whether the ratio is reduced.
struct JaccardValue {
  std::uint32_t numerator = 0;
  std::uint32_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / denominator; }
  bool positive() const { return numerator > 0; }

  friend bool operator==(JaccardValue a, JaccardValue b) {
    return std::uint64_t{a.numerator} * b.denominator ==
           std::uint64_t{b.numerator} * a.denominator;
  }
  friend auto operator<=>(JaccardValue a, JaccardValue b) {
    return std::uint64_t{a.numerator} * b.denominator <=>
           std::uint64_t{b.numerator} * a.denominator;
  }
};

/// Jaccard coefficient of two id sets. Duplicates are ignored. Throws
/// EmptySetError if either set is empty.
JaccardValue jaccard(std::span<const ItemId> a, std::span<const ItemId> b);

}  // namespace ngrank
