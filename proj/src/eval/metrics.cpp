#include "ngrank/eval/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "ngrank/error.hpp"
#include "text_util.hpp"

namespace ngrank::eval {

namespace {

MetricReport summarize(std::string name, std::size_t r, const std::vector<double>& values) {
  MetricReport rep{std::move(name), 0.0, r, values.size(), 0.0};
  if (values.empty()) return rep;
  double sum = 0.0;
  for (double v : values) sum += v;
  rep.value = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - rep.value) * (v - rep.value);
    rep.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1) /
                              static_cast<double>(values.size()));
  }
  return rep;
}

// Same-class hits among the first r entries, optionally skipping the query.
std::size_t hits_at(const RankedList& list, const GroundTruth& truth, std::size_t r,
                    bool exclude_query) {
  const std::size_t cls = truth.class_of(list.query);
  std::size_t seen = 0;
  std::size_t hits = 0;
  for (const auto& e : list.entries) {
    if (seen == r) break;
    if (exclude_query && e.item == list.query) continue;
    ++seen;
    if (truth.class_of(e.item) == cls) ++hits;
  }
  return hits;
}

}  // namespace

void GroundTruth::add(ItemId id, std::string label) {
  if (label_of_.contains(id)) {
    throw InvalidInputError("duplicate ground-truth id " + std::to_string(id));
  }
  auto [it, fresh] = class_index_.emplace(label, labels_.size());
  if (fresh) {
    labels_.push_back(std::move(label));
    sizes_.push_back(0);
  }
  ++sizes_[it->second];
  label_of_.emplace(id, it->second);
  ids_.push_back(id);
}

std::size_t GroundTruth::class_of(ItemId id) const {
  const auto it = label_of_.find(id);
  if (it == label_of_.end()) {
    throw UnknownItemError("item " + std::to_string(id) + " has no ground-truth label");
  }
  return it->second;
}

GroundTruth parse_truth(std::string_view text) {
  GroundTruth truth;
  bool first_row = true;
  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const bool header_allowed = std::exchange(first_row, false);
    const auto f = detail::split(line, ',');
    ItemId id = 0;
    if (!detail::parse_uint(f[0], id)) {
      if (header_allowed) continue;
      throw FormatError("truth line " + std::to_string(line_no) + ": bad item id");
    }
    if (f.size() != 2 || detail::trim(f[1]).empty()) {
      throw FormatError("truth line " + std::to_string(line_no) + ": expected <id>,<class>");
    }
    try {
      truth.add(id, std::string(detail::trim(f[1])));
    } catch (const InvalidInputError& e) {
      throw FormatError("truth line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (truth.size() == 0) throw FormatError("ground truth has no items");
  return truth;
}

GroundTruth load_truth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_truth(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "id,class\n";
  for (ItemId id : truth.ids()) out << id << ',' << truth.label(truth.class_of(id)) << '\n';
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

MetricReport ns_score(std::span<const RankedList> rankings, const GroundTruth& truth) {
  for (std::size_t c = 0; c < truth.class_count(); ++c) {
    if (truth.class_size(c) != 4) {
      throw ClassSizeError("N-S score needs 4 items per class; class '" + truth.label(c) +
                           "' has " + std::to_string(truth.class_size(c)));
    }
  }
  std::vector<double> values;
  values.reserve(rankings.size());
  for (const auto& list : rankings) {
    values.push_back(static_cast<double>(hits_at(list, truth, 4, false)));
  }
  return summarize("ns", 4, values);
}

std::vector<double> precision_values(std::span<const RankedList> rankings,
                                     const GroundTruth& truth, std::size_t r,
                                     bool exclude_query) {
  if (r == 0) throw InvalidInputError("cutoff r must be positive");
  std::vector<double> values;
  values.reserve(rankings.size());
  for (const auto& list : rankings) {
    values.push_back(100.0 * static_cast<double>(hits_at(list, truth, r, exclude_query)) /
                     static_cast<double>(r));
  }
  return values;
}

MetricReport precision_at(std::span<const RankedList> rankings, const GroundTruth& truth,
                          std::size_t r, bool exclude_query) {
  return summarize("precision", r, precision_values(rankings, truth, r, exclude_query));
}

MetricReport recall_at(std::span<const RankedList> rankings, const GroundTruth& truth,
                       std::size_t r, bool exclude_query) {
  if (r == 0) throw InvalidInputError("cutoff r must be positive");
  std::vector<double> values;
  values.reserve(rankings.size());
  for (const auto& list : rankings) {
    std::size_t relevant = truth.class_size(truth.class_of(list.query));
    if (exclude_query) --relevant;
    const double hits = static_cast<double>(hits_at(list, truth, r, exclude_query));
    values.push_back(relevant == 0 ? 0.0 : 100.0 * hits / static_cast<double>(relevant));
  }
  return summarize("recall", r, values);
}

}  // namespace ngrank::eval
