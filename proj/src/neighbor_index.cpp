#include "ngrank/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ngrank/error.hpp"
#include "parallel.hpp"

namespace ngrank {

namespace {

constexpr std::string_view kIndexFormat = "ngrank-index";
constexpr int kIndexVersion = 1;

// Self first, then ascending (distance, id).
struct NeighborOrder {
  ItemId self;
  bool operator()(const Neighbor& a, const Neighbor& b) const {
    if ((a.id == self) != (b.id == self)) return a.id == self;
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  }
};

void check_list(ItemId owner, std::span<const Neighbor> list) {
  if (list.empty() || list.front().id != owner) {
    throw FormatError("neighbour list of " + std::to_string(owner) + " does not start with itself");
  }
  NeighborOrder order{owner};
  for (std::size_t i = 1; i < list.size(); ++i) {
    if (!order(list[i - 1], list[i])) {
      throw FormatError("neighbour list of " + std::to_string(owner) +
                        " is not sorted by (distance, id) or has duplicates");
    }
  }
  for (const auto& n : list) {
    if (!(n.distance >= 0.0) || !std::isfinite(n.distance)) {
      throw FormatError("neighbour list of " + std::to_string(owner) + " has an invalid distance");
    }
  }
}

}  // namespace

NeighborhoodIndex NeighborhoodIndex::from_lists(std::string channel, std::size_t k, Metric metric,
                                                std::map<ItemId, std::vector<Neighbor>> lists) {
  if (k == 0) throw FormatError("index k must be positive");
  if (lists.empty()) throw FormatError("index has no items");
  NeighborhoodIndex idx;
  idx.channel_ = std::move(channel);
  idx.k_ = k;
  idx.metric_ = metric;
  idx.list_length_ = std::min(k, lists.size());
  idx.ids_.reserve(lists.size());
  idx.entries_.reserve(lists.size() * idx.list_length_);
  for (auto& [id, list] : lists) {
    if (list.size() != idx.list_length_) {
      throw FormatError("neighbour list of " + std::to_string(id) + " has length " +
                        std::to_string(list.size()) + ", expected " +
                        std::to_string(idx.list_length_));
    }
    check_list(id, list);
    idx.row_of_.emplace(id, idx.ids_.size());
    idx.ids_.push_back(id);
    idx.entries_.insert(idx.entries_.end(), list.begin(), list.end());
  }
  for (const auto& n : idx.entries_) {
    if (!idx.row_of_.contains(n.id)) {
      throw FormatError("neighbour id " + std::to_string(n.id) + " is not an indexed item");
    }
  }
  return idx;
}

std::optional<std::size_t> NeighborhoodIndex::row_of(ItemId id) const {
  if (auto it = row_of_.find(id); it != row_of_.end()) return it->second;
  return std::nullopt;
}

std::span<const Neighbor> NeighborhoodIndex::neighbors(ItemId id) const {
  const auto row = row_of(id);
  if (!row) throw UnknownItemError("item " + std::to_string(id) + " is not in index '" + channel_ + "'");
  return neighbors_at(*row);
}

NeighborhoodIndex build_index(const FeatureMatrix& features, std::size_t k, Metric metric,
                              unsigned jobs) {
  if (k == 0) throw InvalidInputError("k must be at least 1");
  if (features.empty()) throw InvalidInputError("cannot index an empty feature matrix");

  const std::size_t n = features.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return features.id(a) < features.id(b); });

  NeighborhoodIndex idx;
  idx.channel_ = features.channel();
  idx.k_ = k;
  idx.metric_ = metric;
  idx.list_length_ = std::min(k, n);
  idx.ids_.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    idx.ids_[r] = features.id(order[r]);
    idx.row_of_.emplace(idx.ids_[r], r);
  }
  idx.entries_.resize(n * idx.list_length_);

  const std::size_t len = idx.list_length_;
  detail::parallel_for(n, jobs, [&](std::size_t r) {
    thread_local std::vector<Neighbor> scratch;
    scratch.resize(n);
    const auto self_row = features.row(order[r]);
    const ItemId self = idx.ids_[r];
    for (std::size_t j = 0; j < n; ++j) {
      scratch[j] = {idx.ids_[j], j == r ? 0.0 : distance(self_row, features.row(order[j]), metric)};
    }
    NeighborOrder cmp{self};
    if (len < n) std::nth_element(scratch.begin(), scratch.begin() + len, scratch.end(), cmp);
    std::sort(scratch.begin(), scratch.begin() + len, cmp);
    std::copy_n(scratch.begin(), len, idx.entries_.begin() + r * len);
  });
  return idx;
}

RankedList query_knn(const FeatureMatrix& features, std::span<const double> q, std::size_t k,
                     Metric metric, ItemId query_id) {
  if (q.size() != features.dim()) {
    throw DimensionError("query has dimension " + std::to_string(q.size()) + ", features have " +
                         std::to_string(features.dim()));
  }
  if (k == 0) throw InvalidInputError("k must be at least 1");
  const std::size_t n = features.size();
  std::vector<Neighbor> all(n);
  for (std::size_t j = 0; j < n; ++j) all[j] = {features.id(j), distance(q, features.row(j), metric)};
  const auto by_distance = [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  };
  const std::size_t len = std::min(k, n);
  std::partial_sort(all.begin(), all.begin() + len, all.end(), by_distance);

  RankedList out;
  out.query = query_id;
  out.entries.reserve(len);
  for (std::size_t i = 0; i < len; ++i) out.entries.push_back({all[i].id, all[i].distance, Provenance::kKnn});
  return out;
}

std::string serialize_index(const NeighborhoodIndex& index) {
  nlohmann::ordered_json header;
  header["format"] = kIndexFormat;
  header["version"] = kIndexVersion;
  header["channel"] = index.channel();
  header["k"] = index.k();
  header["metric"] = to_string(index.metric());
  header["n"] = index.size();
  std::string text = header.dump();
  text.pop_back();  // reopen the object to append the item array
  text += ",\"items\":[\n";
  for (std::size_t r = 0; r < index.size(); ++r) {
    nlohmann::ordered_json item;
    item["id"] = index.ids()[r];
    auto& nn = item["nn"] = nlohmann::ordered_json::array();
    for (const auto& n : index.neighbors_at(r)) nn.push_back({n.id, n.distance});
    text += item.dump();
    text += r + 1 < index.size() ? ",\n" : "\n";
  }
  text += "]}\n";
  return text;
}

NeighborhoodIndex parse_index(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("index is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", "") != kIndexFormat) throw FormatError("index schema tag mismatch");
    if (doc.at("version").get<int>() != kIndexVersion) {
      throw FormatError("unsupported index version " + doc.at("version").dump());
    }
    const auto channel = doc.at("channel").get<std::string>();
    const auto k = doc.at("k").get<std::size_t>();
    const auto metric = metric_from_string(doc.at("metric").get<std::string>());
    const auto n = doc.at("n").get<std::size_t>();
    const auto& items = doc.at("items");
    if (!items.is_array() || items.size() != n) throw FormatError("index item count does not match n");
    std::map<ItemId, std::vector<Neighbor>> lists;
    for (const auto& item : items) {
      const auto id = item.at("id").get<ItemId>();
      std::vector<Neighbor> list;
      for (const auto& pair : item.at("nn")) {
        if (!pair.is_array() || pair.size() != 2) throw FormatError("malformed neighbour entry");
        list.push_back({pair[0].get<ItemId>(), pair[1].get<double>()});
      }
      if (!lists.emplace(id, std::move(list)).second) {
        throw FormatError("duplicate item " + std::to_string(id) + " in index");
      }
    }
    return NeighborhoodIndex::from_lists(channel, k, metric, std::move(lists));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed index: ") + e.what());
  }
}

void save_index(const NeighborhoodIndex& index, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << serialize_index(index);
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

NeighborhoodIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_index(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace ngrank
