#include "ngrank/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "ngrank/error.hpp"
#include "ngrank/fusion.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace ngrank {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::size_t parse_count(std::string_view v, const std::string& where) {
  std::size_t out = 0;
  if (!detail::parse_uint(v, out)) throw FormatError(where + "expected a non-negative integer");
  return out;
}

}  // namespace

std::size_t default_k(std::size_t n) { return n < 20000 ? 5 : 50; }

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  PipelineConfig cfg;
  enum class Section { kTop, kMfr, kChannel } section = Section::kTop;
  std::set<std::string> names;
  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    line = detail::trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw FormatError(where + "unterminated section header");
      const auto inner = detail::trim(line.substr(1, line.size() - 2));
      if (inner == "mfr") {
        section = Section::kMfr;
      } else if (inner.starts_with("channel")) {
        const auto name = std::string(detail::trim(inner.substr(7)));
        if (name.empty() || inner.size() == 7 || inner[7] != ' ') {
          throw FormatError(where + "channel section needs a name");
        }
        if (!names.insert(name).second) throw FormatError(where + "duplicate channel '" + name + "'");
        cfg.channels.push_back({});
        cfg.channels.back().name = name;
        section = Section::kChannel;
      } else {
        throw FormatError(where + "unknown section '" + std::string(inner) + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError(where + "expected key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    const auto bad_key = [&] {
      return FormatError(where + "unknown key '" + std::string(key) + "'");
    };
    try {
      switch (section) {
        case Section::kTop:
          if (key == "seed") {
            if (!detail::parse_uint(value, cfg.seed)) throw FormatError(where + "bad seed");
          } else if (key == "tier3_mode") {
            cfg.tier3_mode = tier3_mode_from_string(value);
          } else {
            throw bad_key();
          }
          break;
        case Section::kMfr:
          if (key == "k_final") {
            cfg.k_final = parse_count(value, where);
          } else if (key == "variant") {
            cfg.variant = mfr_variant_from_string(value);
          } else {
            throw bad_key();
          }
          break;
        case Section::kChannel: {
          auto& ch = cfg.channels.back();
          if (key == "features") {
            const std::filesystem::path p{std::string(value)};
            ch.features = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
          } else if (key == "format") {
            if (value == "csv") {
              ch.format = FeatureFormat::kCsv;
            } else if (value == "binary") {
              ch.format = FeatureFormat::kBinary;
            } else {
              throw FormatError(where + "format must be csv or binary");
            }
          } else if (key == "metric") {
            ch.metric = metric_from_string(value);
          } else if (key == "k1") {
            ch.k1 = parse_count(value, where);
          } else if (key == "k2") {
            ch.k2 = parse_count(value, where);
          } else if (key == "alpha") {
            if (!detail::parse_double(value, ch.alpha) || !(ch.alpha > 0.0)) {
              throw FormatError(where + "alpha must be a positive number");
            }
          } else {
            throw bad_key();
          }
          break;
        }
      }
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(where + e.what());
    }
  }
  if (cfg.channels.empty()) throw FormatError("config defines no channels");
  for (const auto& ch : cfg.channels) {
    if (ch.features.empty()) throw FormatError("channel '" + ch.name + "' has no features path");
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_text(path), path.parent_path());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string format_config(const PipelineConfig& config, const std::filesystem::path& base_dir) {
  std::ostringstream out;
  out << "seed = " << config.seed << '\n';
  out << "tier3_mode = " << to_string(config.tier3_mode) << '\n';
  out << "\n[mfr]\n";
  if (config.k_final != 0) out << "k_final = " << config.k_final << '\n';
  out << "variant = " << to_string(config.variant) << '\n';
  for (const auto& ch : config.channels) {
    out << "\n[channel " << ch.name << "]\n";
    auto p = ch.features;
    if (!base_dir.empty()) {
      const auto rel = p.lexically_relative(base_dir);
      if (!rel.empty() && *rel.begin() != "..") p = rel;
    }
    out << "features = " << p.generic_string() << '\n';
    if (ch.format) out << "format = " << (*ch.format == FeatureFormat::kCsv ? "csv" : "binary") << '\n';
    out << "metric = " << to_string(ch.metric) << '\n';
    if (ch.k1 != 0) out << "k1 = " << ch.k1 << '\n';
    if (ch.k2 != 0) out << "k2 = " << ch.k2 << '\n';
    out << "alpha = " << detail::format_double(ch.alpha) << '\n';
  }
  return out.str();
}

std::filesystem::path index_path(const std::filesystem::path& dir, std::string_view channel) {
  return dir / (std::string(channel) + ".index.json");
}

namespace {

FeatureMatrix read_channel(const ChannelConfig& ch) {
  try {
    return ch.format ? load_features(ch.features, *ch.format, ch.name)
                     : load_features(ch.features, ch.name);
  } catch (const IoError& e) {
    throw IoError("channel '" + ch.name + "': " + e.what());
  } catch (const FormatError& e) {
    throw FormatError("channel '" + ch.name + "': " + e.what());
  }
}

}  // namespace

Pipeline Pipeline::build(const PipelineConfig& config, unsigned jobs) {
  Pipeline p;
  p.config_ = config;
  for (auto& ch : p.config_.channels) {
    auto features = read_channel(ch);
    if (ch.k1 == 0) ch.k1 = default_k(features.size());
    if (ch.k2 == 0) ch.k2 = ch.k1;
    auto index = build_index(features, std::max(ch.k1, ch.k2), ch.metric, jobs);
    NeighborGraph graph(index, ch.k1, ch.k2);
    p.channels_.push_back(std::make_unique<Channel>(
        Channel{ch, std::move(index), std::move(graph), std::move(features)}));
  }
  p.finish(p.config_);
  return p;
}

Pipeline Pipeline::load(const PipelineConfig& config, const std::filesystem::path& index_dir,
                        bool need_features) {
  Pipeline p;
  p.config_ = config;
  for (auto& ch : p.config_.channels) {
    auto index = load_index(index_path(index_dir, ch.name));
    if (index.channel() != ch.name) {
      throw FormatError("index for channel '" + ch.name + "' is labelled '" + index.channel() + "'");
    }
    if (index.metric() != ch.metric) {
      throw FormatError("index for channel '" + ch.name + "' was built with metric " +
                        std::string(to_string(index.metric())));
    }
    if (ch.k1 == 0) ch.k1 = index.k();
    if (ch.k2 == 0) ch.k2 = ch.k1;
    if (std::max(ch.k1, ch.k2) > index.k()) {
      throw FormatError("index for channel '" + ch.name + "' has k = " + std::to_string(index.k()) +
                        ", config needs " + std::to_string(std::max(ch.k1, ch.k2)));
    }
    std::optional<FeatureMatrix> features;
    if (need_features) features = read_channel(ch);
    NeighborGraph graph(index, ch.k1, ch.k2);
    p.channels_.push_back(std::make_unique<Channel>(
        Channel{ch, std::move(index), std::move(graph), std::move(features)}));
  }
  p.finish(p.config_);
  return p;
}

void Pipeline::finish(PipelineConfig config) {
  if (config.k_final == 0) config.k_final = config.channels.front().k1;
  config_ = std::move(config);
}

RankedList Pipeline::rank_centers(const std::vector<QueryCenter>& centers, ItemId query) const {
  const Tier3Mode mode = config_.tier3_mode;
  if (channels_.size() == 1) {
    return ttng_rerank(channels_[0]->graph, centers[0], mode, channels_[0]->config.alpha);
  }
  std::vector<QueryGraph> per_channel;
  std::vector<const NeighborGraph*> graphs;
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    per_channel.push_back(ttng_graph(channels_[c]->graph, centers[c], mode, channels_[c]->config.alpha));
    graphs.push_back(&channels_[c]->graph);
  }
  const FusedGraph fused = fuse_graphs(std::move(per_channel));
  PairwiseWeights pairwise(std::move(graphs), fused, mode);
  const PairwiseFn fn = std::ref(pairwise);
  const auto ranking = config_.variant == MfrVariant::kSum
                           ? mfr_select(fused, fn, config_.k_final)
                           : mfr_select_product(fused, fn, config_.k_final);
  auto list = ranking.to_ranked_list();
  list.query = query;
  return list;
}

RankedList Pipeline::rank(ItemId query) const {
  std::vector<QueryCenter> centers;
  for (const auto& ch : channels_) centers.push_back(QueryCenter::in_sample(ch->graph, query));
  return rank_centers(centers, query);
}

std::size_t Pipeline::vector_dim() const {
  std::size_t d = 0;
  for (const auto& ch : channels_) {
    if (!ch->features) throw InvalidInputError("features were not loaded");
    d += ch->features->dim();
  }
  return d;
}

ItemId Pipeline::max_item_id() const {
  ItemId m = 0;
  for (const auto& ch : channels_) m = std::max(m, ch->index.ids().back());
  return m;
}

RankedList Pipeline::rank_vector(std::span<const double> vector, ItemId virtual_id) const {
  if (vector.size() != vector_dim()) {
    throw DimensionError("query vector has " + std::to_string(vector.size()) + " values, expected " +
                         std::to_string(vector_dim()));
  }
  std::vector<QueryCenter> centers;
  std::size_t offset = 0;
  for (const auto& ch : channels_) {
    const std::size_t d = ch->features->dim();
    centers.push_back(QueryCenter::out_of_sample(ch->graph, *ch->features, vector.subspan(offset, d),
                                                 ch->config.metric, virtual_id));
    offset += d;
  }
  return rank_centers(centers, virtual_id);
}

std::vector<RankedList> Pipeline::rank_batch(std::span<const ItemId> queries, unsigned jobs) const {
  std::vector<RankedList> out(queries.size());
  detail::parallel_for(queries.size(), jobs, [&](std::size_t i) { out[i] = rank(queries[i]); });
  return out;
}

std::vector<RankedList> Pipeline::rank_vectors(std::span<const std::vector<double>> vectors,
                                               ItemId first_virtual_id, unsigned jobs) const {
  std::vector<RankedList> out(vectors.size());
  detail::parallel_for(vectors.size(), jobs, [&](std::size_t i) {
    out[i] = rank_vector(vectors[i], first_virtual_id + i);
  });
  return out;
}

std::vector<std::vector<double>> load_query_vectors(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<std::vector<double>> out;
  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> v;
    for (auto field : detail::split(line, ',')) {
      double x = 0.0;
      if (!detail::parse_double(field, x) || !std::isfinite(x)) {
        throw FormatError(path.string() + ": line " + std::to_string(line_no) + ": bad value");
      }
      v.push_back(x);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace ngrank
