#include "ngrank/metric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "ngrank/error.hpp"

namespace ngrank {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kL1: return "L1";
    case Metric::kL2: return "L2";
    case Metric::kCosine: return "cosine";
  }
  return "?";
}

Metric metric_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "l1" || lower == "manhattan") return Metric::kL1;
  if (lower == "l2" || lower == "euclidean") return Metric::kL2;
  if (lower == "cosine" || lower == "cosine-distance") return Metric::kCosine;
  throw FormatError("unknown metric '" + std::string(s) + "'");
}

double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  if (a.size() != b.size()) {
    throw DimensionError("distance between vectors of dimension " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  const std::size_t n = a.size();
  switch (metric) {
    case Metric::kL1: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
      return s;
    }
    case Metric::kL2: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case Metric::kCosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      if (na == 0.0 || nb == 0.0) throw ZeroVectorError("cosine distance of a zero vector");
      const double cos = dot / (std::sqrt(na) * std::sqrt(nb));
      return std::max(0.0, 1.0 - cos);
    }
  }
  return 0.0;
}

}  // namespace ngrank
