// ngrank command-line front end.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ngrank/commands.hpp"
#include "ngrank/error.hpp"
#include "ngrank/rankings.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
  std::string tier3_mode;
  std::string mfr_variant;
  std::string out;

  // rerank
  std::string index_dir;
  std::string queries_file;
  std::vector<ngrank::ItemId> query_ids;
  bool all = false;
  std::string query_vectors;

  // eval
  std::string rankings;
  std::string truth;
  std::vector<std::string> metrics{"precision", "recall"};
  std::vector<std::size_t> r_list{4};
  bool exclude_query = false;
  std::string format = "tsv";

  // synth
  std::string scenario;

  // bench
  ngrank::BenchRequest bench;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ngrank::IoError("cannot write '" + o.out + "'");
  f << text;
  if (!f) throw ngrank::IoError("error writing '" + o.out + "'");
}

ngrank::PipelineConfig config_from(const Options& o) {
  if (o.config.empty()) throw ngrank::InvalidInputError("--config is required");
  auto cfg = ngrank::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.tier3_mode.empty()) cfg.tier3_mode = ngrank::tier3_mode_from_string(o.tier3_mode);
  if (!o.mfr_variant.empty()) cfg.variant = ngrank::mfr_variant_from_string(o.mfr_variant);
  return cfg;
}

std::vector<ngrank::ItemId> read_id_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ngrank::IoError("cannot open '" + path + "'");
  std::vector<ngrank::ItemId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok.front() == '#') continue;
    try {
      std::size_t used = 0;
      ids.push_back(std::stoull(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ngrank::FormatError(path + ": line " + std::to_string(line_no) + ": bad query id");
    }
  }
  return ids;
}

void run_rerank(const Options& o, bool fuse_only) {
  const auto cfg = config_from(o);
  if (fuse_only && cfg.channels.size() < 2) {
    throw ngrank::InvalidInputError("fuse needs a config with at least two channels");
  }
  ngrank::RerankRequest req;
  if (!o.index_dir.empty()) req.index_dir = o.index_dir;
  req.query_ids = o.query_ids;
  if (!o.queries_file.empty()) {
    const auto more = read_id_file(o.queries_file);
    req.query_ids.insert(req.query_ids.end(), more.begin(), more.end());
  }
  req.all = o.all;
  if (!o.query_vectors.empty()) req.query_vectors = o.query_vectors;
  emit(o, ngrank::format_rankings(ngrank::cmd_rerank(cfg, req, o.jobs)));
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"ngrank: tiered neighbourhood graph re-ranking and multi-channel fusion"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--config", o.config, "Pipeline config file");
  app.add_option("--seed", o.seed, "Random seed (overrides the config)");
  app.add_option("--jobs", o.jobs, "Worker threads, 0 = all cores");
  app.add_option("--tier3-mode", o.tier3_mode, "two-hop | query-anchored | literal");
  app.add_option("--mfr-variant", o.mfr_variant, "sum | product");
  app.add_option("-o,--out", o.out, "Output file or directory");

  auto* index = app.add_subcommand("index", "Build and save one neighbour index per channel");
  index->add_option("--config", o.config, "Pipeline config file")->required();
  index->add_option("-o,--out", o.out, "Output directory")->required();
  index->add_option("--jobs", o.jobs, "Worker threads");

  auto add_rerank_opts = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Pipeline config file")->required();
    sub->add_option("--index-dir", o.index_dir, "Load saved indexes instead of building");
    sub->add_option("--queries", o.queries_file, "File with one query id per line");
    sub->add_option("--query-ids", o.query_ids, "Query ids")->delimiter(',');
    sub->add_flag("--all", o.all, "Rank every item of the first channel");
    sub->add_option("--query-vectors", o.query_vectors,
                    "Out-of-sample query vectors, channels concatenated in config order");
    sub->add_option("-o,--out", o.out, "Output TSV (default stdout)");
    sub->add_option("--jobs", o.jobs, "Worker threads");
    sub->add_option("--tier3-mode", o.tier3_mode, "two-hop | query-anchored | literal");
    sub->add_option("--mfr-variant", o.mfr_variant, "sum | product");
  };
  auto* rerank = app.add_subcommand("rerank", "Re-rank queries and write TSV rankings");
  add_rerank_opts(rerank);
  auto* fuse = app.add_subcommand("fuse", "rerank for configs with two or more channels");
  add_rerank_opts(fuse);

  auto* evalc = app.add_subcommand("eval", "Score rankings against ground truth");
  evalc->add_option("--rankings", o.rankings, "Rankings TSV")->required();
  evalc->add_option("--truth", o.truth, "Ground truth CSV")->required();
  evalc->add_option("--metrics", o.metrics, "ns, precision, recall")->delimiter(',');
  evalc->add_option("-r,--r", o.r_list, "Cutoffs")->delimiter(',');
  evalc->add_flag("--exclude-query", o.exclude_query, "Drop the query before cutting");
  evalc->add_option("--format", o.format, "tsv | table")->check(CLI::IsMember({"tsv", "table"}));
  evalc->add_option("-o,--out", o.out, "Output file (default stdout)");

  auto* synth = app.add_subcommand("synth", "Write a planted scenario with config and truth");
  synth->add_option("--scenario", o.scenario, "outlier | two-manifold")
      ->required()
      ->check(CLI::IsMember({"outlier", "two-manifold"}));
  synth->add_option("--seed", o.seed, "Jitter seed");
  synth->add_option("-o,--out", o.out, "Output directory")->required();

  auto* bench = app.add_subcommand("bench", "Time per-query re-ranking");
  bench->add_option("--config", o.config, "Bench these channels instead of synthetic data");
  bench->add_option("--n", o.bench.n_list, "Collection sizes")->delimiter(',');
  bench->add_option("--k", o.bench.k_list, "Neighbourhood sizes")->delimiter(',');
  bench->add_option("--m", o.bench.m, "Synthetic channels");
  bench->add_option("--dim", o.bench.dim, "Synthetic dimension");
  bench->add_option("--cluster-size", o.bench.cluster_size, "Synthetic items per cluster");
  bench->add_option("--queries", o.bench.queries, "Queries per run");
  bench->add_option("--reps", o.bench.repetitions, "Repetitions (>= 100)");
  bench->add_option("--k-final", o.bench.k_final, "Selected items, 0 = k");
  bench->add_option("--seed", o.seed, "Data and query seed");
  bench->add_option("--jobs", o.jobs, "Worker threads for indexing");
  bench->add_option("--tier3-mode", o.tier3_mode, "two-hop | query-anchored | literal");
  bench->add_option("-o,--out", o.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*index) {
      for (const auto& p : ngrank::cmd_index(config_from(o), o.out, o.jobs)) {
        std::cerr << "wrote " << p.string() << '\n';
      }
    } else if (*rerank) {
      run_rerank(o, false);
    } else if (*fuse) {
      run_rerank(o, true);
    } else if (*evalc) {
      const auto reports = ngrank::cmd_eval(o.rankings, o.truth, o.metrics, o.r_list, o.exclude_query);
      emit(o, o.format == "table" ? ngrank::format_report_table(reports)
                                  : ngrank::format_report_tsv(reports));
    } else if (*synth) {
      for (const auto& p : ngrank::cmd_synth(o.scenario, o.seed.value_or(0), o.out)) {
        std::cerr << "wrote " << p.string() << '\n';
      }
    } else if (*bench) {
      auto req = o.bench;
      req.seed = o.seed.value_or(0);
      if (!o.tier3_mode.empty()) req.mode = ngrank::tier3_mode_from_string(o.tier3_mode);
      if (!o.config.empty()) req.config = config_from(o);
      emit(o, ngrank::format_bench_table(ngrank::cmd_bench(req, o.jobs)));
    }
  } catch (const ngrank::Error& e) {
    std::cerr << "error\t" << ngrank::to_string(e.kind()) << '\t' << e.what() << '\n';
    return e.kind() == ngrank::ErrorKind::kInvalidInput ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error\tInternal\t" << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
