#include "ngrank/jaccard.hpp"

#include <algorithm>
#include <iterator>
#include <vector>

#include "ngrank/error.hpp"

namespace ngrank {

JaccardValue jaccard(std::span<const ItemId> a, std::span<const ItemId> b) {
  if (a.empty() || b.empty()) throw EmptySetError("jaccard of an empty set");
  std::vector<ItemId> sa(a.begin(), a.end());
  std::vector<ItemId> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  std::size_t common = 0;
  for (auto i = sa.begin(), j = sb.begin(); i != sa.end() && j != sb.end();) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common, ++i, ++j;
    }
  }
  const std::size_t uni = sa.size() + sb.size() - common;
  return {static_cast<std::uint32_t>(common), static_cast<std::uint32_t>(uni)};
}

}  // namespace ngrank
