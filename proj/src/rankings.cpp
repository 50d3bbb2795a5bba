#include "ngrank/rankings.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "ngrank/error.hpp"
#include "text_util.hpp"

namespace ngrank {

void write_rankings(std::ostream& out, std::span<const RankedList> lists) {
  out << format_rankings(lists);
}

std::string format_rankings(std::span<const RankedList> lists) {
  std::string text;
  for (const auto& list : lists) {
    const std::string q = std::to_string(list.query);
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
      const auto& e = list.entries[i];
      text += q;
      text += '\t';
      text += std::to_string(i + 1);
      text += '\t';
      text += std::to_string(e.item);
      text += '\t';
      text += detail::format_double(e.score);
      text += '\t';
      text += to_string(e.tier);
      text += '\n';
    }
  }
  return text;
}

std::vector<RankedList> parse_rankings(std::string_view text) {
  std::vector<RankedList> lists;
  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto where = [&] { return "rankings line " + std::to_string(line_no) + ": "; };
    const auto f = detail::split(line, '\t');
    if (f.size() != 5) throw FormatError(where() + "expected 5 tab separated fields");
    ItemId query = 0;
    ItemId item = 0;
    std::size_t rank = 0;
    double score = 0.0;
    if (!detail::parse_uint(f[0], query)) throw FormatError(where() + "bad query id");
    if (!detail::parse_uint(f[1], rank) || rank == 0) throw FormatError(where() + "bad rank");
    if (!detail::parse_uint(f[2], item)) throw FormatError(where() + "bad item id");
    if (!detail::parse_double(f[3], score)) throw FormatError(where() + "bad score");
    Provenance tier;
    try {
      tier = provenance_from_string(detail::trim(f[4]));
    } catch (const Error&) {
      throw FormatError(where() + "bad tier '" + std::string(detail::trim(f[4])) + "'");
    }
    if (rank == 1) {
      lists.push_back({query, {}});
    } else if (lists.empty() || lists.back().query != query ||
               lists.back().entries.size() + 1 != rank) {
      throw FormatError(where() + "rank " + std::to_string(rank) + " out of sequence");
    }
    lists.back().entries.push_back({item, score, tier});
  }
  return lists;
}

std::vector<RankedList> load_rankings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_rankings(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace ngrank
