#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ngrank/types.hpp"

namespace ngrank {

/// Tab separated `query_id rank item_id score tier`, one row per entry,
/// 1-based ranks, no header. Blocks appear in list order.
void write_rankings(std::ostream& out, std::span<const RankedList> lists);
std::string format_rankings(std::span<const RankedList> lists);

/// Consecutive rows with the same query form one list. Ranks must run
/// 1, 2, ... within a block. Throws FormatError.
std::vector<RankedList> parse_rankings(std::string_view text);
std::vector<RankedList> load_rankings(const std::filesystem::path& path);

}  // namespace ngrank
