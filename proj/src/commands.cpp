#include "ngrank/commands.hpp"

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ngrank/error.hpp"
#include "ngrank/eval/scenarios.hpp"
#include "ngrank/rankings.hpp"
#include "text_util.hpp"

namespace ngrank {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

// Distinct query ids spread over the collection, fixed by the seed.
std::vector<ItemId> pick_queries(const NeighborhoodIndex& index, std::size_t count,
                                 std::uint64_t seed) {
  std::vector<ItemId> ids = index.ids();
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(std::min(count, ids.size()));
  return ids;
}

}  // namespace

std::vector<std::filesystem::path> cmd_index(const PipelineConfig& config,
                                             const std::filesystem::path& out_dir, unsigned jobs) {
  ensure_dir(out_dir);
  const auto pipeline = Pipeline::build(config, jobs);
  std::vector<std::filesystem::path> written;
  for (std::size_t c = 0; c < pipeline.channel_count(); ++c) {
    const auto path = index_path(out_dir, pipeline.index(c).channel());
    save_index(pipeline.index(c), path);
    written.push_back(path);
  }
  return written;
}

std::vector<RankedList> cmd_rerank(const PipelineConfig& config, const RerankRequest& request,
                                   unsigned jobs) {
  const bool vectors = request.query_vectors.has_value();
  if (request.query_ids.empty() && !request.all && !vectors) {
    throw InvalidInputError("no queries given");
  }
  const auto pipeline = request.index_dir ? Pipeline::load(config, *request.index_dir, vectors)
                                          : Pipeline::build(config, jobs);
  std::vector<ItemId> ids = request.query_ids;
  if (request.all) {
    const auto& all = pipeline.index(0).ids();
    ids.insert(ids.end(), all.begin(), all.end());
  }
  auto out = pipeline.rank_batch(ids, jobs);
  if (vectors) {
    const auto qv = load_query_vectors(*request.query_vectors);
    auto more = pipeline.rank_vectors(qv, pipeline.max_item_id() + 1, jobs);
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  return out;
}

std::vector<eval::MetricReport> cmd_eval(const std::filesystem::path& rankings_path,
                                         const std::filesystem::path& truth_path,
                                         const std::vector<std::string>& metrics,
                                         const std::vector<std::size_t>& r_list,
                                         bool exclude_query) {
  const auto rankings = load_rankings(rankings_path);
  const auto truth = eval::load_truth(truth_path);
  std::vector<eval::MetricReport> out;
  for (const auto& m : metrics) {
    if (m == "ns") {
      out.push_back(eval::ns_score(rankings, truth));
    } else if (m == "precision" || m == "recall") {
      if (r_list.empty()) throw InvalidInputError(m + " needs at least one cutoff");
      for (std::size_t r : r_list) {
        out.push_back(m == "precision" ? eval::precision_at(rankings, truth, r, exclude_query)
                                       : eval::recall_at(rankings, truth, r, exclude_query));
      }
    } else {
      throw InvalidInputError("unknown metric '" + m + "'");
    }
  }
  return out;
}

std::string format_report_tsv(const std::vector<eval::MetricReport>& reports) {
  std::string out = "metric\tr\tvalue\tn_queries\tstd_error\n";
  for (const auto& r : reports) {
    out += r.metric_name + '\t' + std::to_string(r.r) + '\t' + detail::format_double(r.value) +
           '\t' + std::to_string(r.n_queries) + '\t' + detail::format_double(r.std_error) + '\n';
  }
  return out;
}

std::string format_report_table(const std::vector<eval::MetricReport>& reports) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "metric" << std::right << std::setw(6) << "r"
      << std::setw(12) << "value" << std::setw(10) << "queries" << std::setw(10) << "se" << '\n';
  out << std::fixed;
  for (const auto& r : reports) {
    out << std::left << std::setw(10) << r.metric_name << std::right << std::setw(6) << r.r
        << std::setw(12) << std::setprecision(r.metric_name == "ns" ? 3 : 2) << r.value
        << std::setw(10) << r.n_queries << std::setw(10) << std::setprecision(3) << r.std_error
        << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> cmd_synth(const std::string& scenario, std::uint64_t seed,
                                             const std::filesystem::path& out_dir) {
  eval::Scenario s;
  if (scenario == "outlier") {
    s = eval::gen_outlier_scenario(seed);
  } else if (scenario == "two-manifold") {
    s = eval::gen_two_manifold_scenario(seed);
  } else {
    throw InvalidInputError("unknown scenario '" + scenario + "'");
  }
  ensure_dir(out_dir);
  std::vector<std::filesystem::path> written;

  PipelineConfig cfg;
  cfg.seed = seed;
  // Every candidate of the union is ranked.
  cfg.k_final = s.channels.size() > 1 ? s.channels.front().size() - 1 : 0;
  for (const auto& ch : s.channels) {
    const auto path = out_dir / (ch.channel() + ".csv");
    save_features_csv(ch, path);
    written.push_back(path);
    cfg.channels.push_back({ch.channel(), path, FeatureFormat::kCsv, s.metric, s.k, s.k, 1.0});
  }
  const auto truth_path = out_dir / "truth.csv";
  eval::save_truth(s.truth, truth_path);
  written.push_back(truth_path);

  nlohmann::ordered_json manifest;
  manifest["scenario"] = s.name;
  manifest["seed"] = seed;
  manifest["k"] = s.k;
  manifest["metric"] = to_string(s.metric);
  manifest["query"] = {{"id", s.query}, {"name", s.name_of(s.query)}};
  auto& items = manifest["items"] = nlohmann::ordered_json::object();
  for (ItemId id : s.truth.ids()) {
    items[s.name_of(id)] = {{"id", id}, {"class", s.truth.label(s.truth.class_of(id))}};
  }
  manifest["channels"] = nlohmann::ordered_json::array();
  for (const auto& ch : s.channels) manifest["channels"].push_back(ch.channel() + ".csv");
  manifest["relations"] = s.relations;
  const auto manifest_path = out_dir / "manifest.json";
  write_text(manifest_path, manifest.dump(2) + "\n");
  written.push_back(manifest_path);

  const auto config_path = out_dir / "config.ini";
  write_text(config_path, format_config(cfg, out_dir));
  written.push_back(config_path);
  return written;
}

std::vector<eval::BenchReport> cmd_bench(const BenchRequest& request, unsigned jobs) {
  if (request.k_list.empty()) throw InvalidInputError("bench needs at least one k");
  std::vector<eval::BenchReport> out;
  const auto run = [&](const std::vector<const NeighborGraph*>& graphs,
                       const NeighborhoodIndex& first, std::size_t k) {
    const auto queries = pick_queries(first, request.queries, request.seed);
    const std::size_t k_final = request.k_final ? request.k_final : k;
    out.push_back(eval::bench_rerank(graphs, queries, request.repetitions, k_final, request.mode));
  };

  if (request.config) {
    for (std::size_t k : request.k_list) {
      PipelineConfig cfg = *request.config;
      for (auto& ch : cfg.channels) ch.k1 = ch.k2 = k;
      const auto p = Pipeline::build(cfg, jobs);
      std::vector<const NeighborGraph*> graphs;
      for (std::size_t c = 0; c < p.channel_count(); ++c) graphs.push_back(&p.graph(c));
      run(graphs, p.index(0), k);
    }
    return out;
  }
  if (request.n_list.empty() || request.m == 0) throw InvalidInputError("bench needs n and m");
  for (std::size_t n : request.n_list) {
    std::vector<FeatureMatrix> channels;
    for (std::size_t c = 0; c < request.m; ++c) {
      const std::size_t clusters = std::max<std::size_t>(1, n / std::max<std::size_t>(1, request.cluster_size));
      channels.push_back(eval::gen_clustered(n, request.dim, clusters,
                                             request.seed * 1000003 + c, "ch" + std::to_string(c + 1)));
    }
    std::size_t k_max = 0;
    for (std::size_t k : request.k_list) k_max = std::max(k_max, k);
    std::vector<NeighborhoodIndex> indexes;
    for (const auto& f : channels) indexes.push_back(build_index(f, k_max, Metric::kL2, jobs));
    for (std::size_t k : request.k_list) {
      std::vector<NeighborGraph> graphs;
      for (const auto& idx : indexes) graphs.emplace_back(idx, k, k);
      std::vector<const NeighborGraph*> ptrs;
      for (const auto& g : graphs) ptrs.push_back(&g);
      run(ptrs, indexes.front(), k);
    }
  }
  return out;
}

std::string format_bench_table(const std::vector<eval::BenchReport>& reports) {
  std::ostringstream out;
  out << "n\tm\tk\tk_final\tqueries\treps\tmean_ms\tmedian_ms\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& r : reports) {
    out << r.n << '\t' << r.m << '\t' << r.k << '\t' << r.k_final << '\t' << r.queries << '\t'
        << r.repetitions << '\t' << r.mean_ms << '\t' << r.median_ms << '\n';
  }
  return out.str();
}

}  // namespace ngrank
