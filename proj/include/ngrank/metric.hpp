#pragma once

#include <span>
#include <string_view>

namespace ngrank {

enum class Metric { kL1, kL2, kCosine };

std::string_view to_string(Metric m);
/// Accepts "L1", "L2", "cosine" (case-insensitive). Throws FormatError.
Metric metric_from_string(std::string_view s);

/// Non-negative distance between equal-length vectors. Cosine distance is
/// 1 - cos(a, b) clamped at zero and rejects zero vectors.
double distance(std::span<const double> a, std::span<const double> b, Metric metric);

}  // namespace ngrank
