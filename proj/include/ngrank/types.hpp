#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace ngrank {

using ItemId = std::uint64_t;

/// Which stage produced a score in a ranked list.
enum class Provenance { kKnn, kStng, kTtng, kMfr };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

struct RankedEntry {
  ItemId item = 0;
  double score = 0.0;
  Provenance tier = Provenance::kKnn;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Ordered result for one query. For re-ranked lists the query itself is the
/// first entry.
struct RankedList {
  ItemId query = 0;
  std::vector<RankedEntry> entries;

  std::vector<ItemId> items() const {
    std::vector<ItemId> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.item);
    return out;
  }

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

}  // namespace ngrank
