// hdcpd: change-point detection for high-dimensional sequences.
//
// Subcommands: detect-single, detect-wbs, quantiles, simulate, evaluate,
// returns. Exit codes: 0 success (including "no change-points found"),
// 1 usage error, 2 data error, 3 internal error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hdcpd/detect.hpp"
#include "hdcpd/eval.hpp"
#include "hdcpd/io.hpp"
#include "hdcpd/limitdist.hpp"
#include "hdcpd/parallel.hpp"
#include "hdcpd/simgen.hpp"

namespace {

using namespace hdcpd;

struct SchemeSpec {
  std::string text = "l1sqrt";

  GroupingScheme build(std::size_t p) const {
    if (text == "l1sqrt") return build_scheme(SchemeMode::l1_sqrt, p);
    if (text == "euclid") return build_scheme(SchemeMode::euclidean_baseline, p);
    const auto parse_with = [&](const char* prefix,
                                GroupingScheme (*parser)(std::size_t, std::istream&)) {
      const std::string path = text.substr(std::string(prefix).size());
      std::ifstream in(path);
      if (!in) throw ValidationError("cannot open structure file '" + path + "'");
      return parser(p, in);
    };
    if (text.rfind("groups:", 0) == 0) return parse_with("groups:", parse_group_file);
    if (text.rfind("graph:", 0) == 0) return parse_with("graph:", parse_graph_file);
    if (text.rfind("dag:", 0) == 0) return parse_with("dag:", parse_dag_file);
    throw ValidationError(
        "--scheme: expected l1sqrt, euclid, groups:FILE, graph:FILE or dag:FILE");
  }
};

struct DetectCli {
  std::string input;
  SchemeSpec scheme;
  double alpha = 0.05;
  std::uint32_t permutations = 199;
  std::uint32_t intervals = 50;
  std::uint64_t seed = 0;
  bool header = false;
  bool timing = false;
  unsigned threads = default_threads();
  std::string output;
  std::string curve_out;
};

void add_common_detect_options(CLI::App& cmd, DetectCli& opts) {
  cmd.add_option("--input", opts.input, "input CSV (rows = time, columns = coordinates)")
      ->required();
  cmd.add_option("--scheme", opts.scheme.text,
                 "distance scheme: l1sqrt | euclid | groups:FILE | graph:FILE | dag:FILE");
  cmd.add_option("--alpha", opts.alpha, "significance level")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  cmd.add_option("--perms", opts.permutations, "permutation replicates B")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", opts.seed, "random seed");
  cmd.add_flag("--header", opts.header, "input CSV has a header row");
  cmd.add_flag("--timing", opts.timing,
               "record wall time in runtime_seconds (off keeps reports byte-identical)");
  cmd.add_option("--threads", opts.threads, "worker thread cap")->check(CLI::PositiveNumber);
  cmd.add_option("--output", opts.output, "report JSON path (default: stdout)");
  cmd.add_option("--curve-out", opts.curve_out, "statistic-curve CSV path or prefix");
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_text_file(path, content);
  }
}

int run_detect_single(const DetectCli& opts) {
  const auto start = std::chrono::steady_clock::now();
  const DataMatrix data = ingest_csv(opts.input, opts.header);
  const GroupingScheme scheme = opts.scheme.build(data.p());

  DetectConfig config;
  config.alpha = opts.alpha;
  config.permutations = opts.permutations;
  config.seed = opts.seed;
  config.threads = opts.threads;
  const SingleResult result = single_changepoint_test(data, scheme, config);

  const double runtime =
      opts.timing
          ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
          : 0.0;
  emit(opts.output,
       report_to_json(result, ReportContext{"detect-single", opts.input, opts.scheme.text},
                      runtime));
  if (!opts.curve_out.empty()) write_text_file(opts.curve_out, profile_to_csv(result.profile));
  return 0;
}

int run_detect_wbs(const DetectCli& opts) {
  const auto start = std::chrono::steady_clock::now();
  const DataMatrix data = ingest_csv(opts.input, opts.header);
  const GroupingScheme scheme = opts.scheme.build(data.p());

  DetectConfig config;
  config.alpha = opts.alpha;
  config.permutations = opts.permutations;
  config.intervals = opts.intervals;
  config.seed = opts.seed;
  config.threads = opts.threads;
  const DistanceMatrix D = pairwise_matrix(data, scheme, config.threads);
  const ChangePointSet result = wbs_detect(D, config);

  const double runtime =
      opts.timing
          ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
          : 0.0;
  emit(opts.output,
       report_to_json(result, ReportContext{"detect-wbs", opts.input, opts.scheme.text},
                      runtime));
  if (!opts.curve_out.empty()) {
    // one curve per recorded change-point: the profile of its winning interval
    for (const auto& rec : result.details) {
      const ScanProfile profile = weighted_t_profile(D, rec.interval_s, rec.interval_e);
      write_text_file(opts.curve_out + "." + std::to_string(rec.order_found) + ".csv",
                      profile_to_csv(profile));
    }
  }
  return 0;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"change-point detection for high-dimensional sequences"};
  app.require_subcommand(1);

  DetectCli singleopts, wbsopts;
  CLI::App* single = app.add_subcommand("detect-single", "permutation-calibrated single test");
  add_common_detect_options(*single, singleopts);
  CLI::App* wbs = app.add_subcommand("detect-wbs", "wild binary segmentation");
  add_common_detect_options(*wbs, wbsopts);
  wbs->add_option("--intervals", wbsopts.intervals, "random sub-sample count M")
      ->check(CLI::PositiveNumber);

  struct {
    std::string method = "pair-array";
    std::uint32_t grid = 500;
    std::uint32_t n = 200, p = 400;
    std::uint32_t reps = 2000;
    std::string probs = "0.9,0.95,0.99";
    std::uint64_t seed = 0;
    unsigned threads = default_threads();
    std::string format = "csv";
    std::string output;
  } quantopts;
  CLI::App* quant = app.add_subcommand("quantiles", "limit-law quantile table");
  quant->add_option("--method", quantopts.method, "pair-array | data-based")
      ->check(CLI::IsMember({"pair-array", "data-based"}));
  quant->add_option("--grid", quantopts.grid, "pair-array grid size N");
  quant->add_option("--n", quantopts.n, "data-based sample length");
  quant->add_option("--p", quantopts.p, "data-based dimension");
  quant->add_option("--reps", quantopts.reps, "Monte-Carlo replicates");
  quant->add_option("--probs", quantopts.probs, "comma-separated probabilities");
  quant->add_option("--seed", quantopts.seed, "random seed");
  quant->add_option("--threads", quantopts.threads, "worker thread cap")
      ->check(CLI::PositiveNumber);
  quant->add_option("--format", quantopts.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  quant->add_option("--output", quantopts.output, "output path (default: stdout)");

  struct {
    std::string scenario;
    std::uint32_t n = 100, p = 100;
    std::uint64_t seed = 0;
    std::string output;
    std::string meta_out;
  } simopts;
  CLI::App* sim = app.add_subcommand("simulate", "generate a labeled scenario dataset");
  sim->add_option("--scenario", simopts.scenario, "scenario name")->required();
  sim->add_option("--n", simopts.n, "time points");
  sim->add_option("--p", simopts.p, "dimension");
  sim->add_option("--seed", simopts.seed, "random seed");
  sim->add_option("--output", simopts.output, "data CSV path")->required();
  sim->add_option("--meta-out", simopts.meta_out,
                  "sidecar JSON path (default: <output>.meta.json)");

  struct {
    std::string scenario;
    std::uint32_t n = 100, p = 100;
    std::string method = "single";
    std::string scheme = "l1sqrt";
    double alpha = 0.05;
    std::uint32_t permutations = 199;
    std::uint32_t intervals = 50;
    std::uint32_t reps = 100;
    std::uint64_t seed = 0;
    unsigned threads = default_threads();
    std::string output;
    std::string summary_out;
  } evalopts;
  CLI::App* eval = app.add_subcommand("evaluate", "scenario experiment with ARI scoring");
  eval->add_option("--scenario", evalopts.scenario, "scenario name")->required();
  eval->add_option("--n", evalopts.n, "time points");
  eval->add_option("--p", evalopts.p, "dimension");
  eval->add_option("--method", evalopts.method, "single | wbs")
      ->check(CLI::IsMember({"single", "wbs"}));
  eval->add_option("--scheme", evalopts.scheme, "l1sqrt | euclid | chain-graph | chain-dag");
  eval->add_option("--alpha", evalopts.alpha, "significance level")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  eval->add_option("--perms", evalopts.permutations, "permutation replicates B")
      ->check(CLI::PositiveNumber);
  eval->add_option("--intervals", evalopts.intervals, "random sub-sample count M")
      ->check(CLI::PositiveNumber);
  eval->add_option("--reps", evalopts.reps, "experiment repetitions")
      ->check(CLI::PositiveNumber);
  eval->add_option("--seed", evalopts.seed, "random seed");
  eval->add_option("--threads", evalopts.threads, "worker thread cap")
      ->check(CLI::PositiveNumber);
  eval->add_option("--output", evalopts.output, "per-rep CSV path (default: stdout)");
  eval->add_option("--summary-out", evalopts.summary_out,
                   "aggregate JSON path (default: stderr)");

  struct {
    std::string input;
    bool header = false;
    std::string output;
  } retopts;
  CLI::App* returns = app.add_subcommand("returns", "log-returns of a price panel");
  returns->add_option("--input", retopts.input, "price CSV")->required();
  returns->add_flag("--header", retopts.header, "input CSV has a header row");
  returns->add_option("--output", retopts.output, "returns CSV path (default: stdout)");

  app.parse(argc, argv);

  if (single->parsed()) return run_detect_single(singleopts);
  if (wbs->parsed()) return run_detect_wbs(wbsopts);

  if (quant->parsed()) {
    QuantileRequest request;
    request.method =
        quantopts.method == "pair-array" ? LimitMethod::pair_array : LimitMethod::data_based;
    request.grid_n = quantopts.grid;
    request.n = quantopts.n;
    request.p = quantopts.p;
    request.reps = quantopts.reps;
    request.seed = quantopts.seed;
    request.threads = quantopts.threads;
    std::stringstream probs(quantopts.probs);
    std::string token;
    while (std::getline(probs, token, ',')) request.probs.push_back(std::stod(token));
    const QuantileTable table = estimate_quantiles(request);
    emit(quantopts.output, quantopts.format == "csv" ? quantile_table_to_csv(table)
                                                     : quantile_table_to_json(table));
    return 0;
  }

  if (sim->parsed()) {
    const LabeledDataset ds =
        generate(scenario_from_name(simopts.scenario), simopts.n, simopts.p, simopts.seed);
    write_text_file(simopts.output, dataset_to_csv(ds));
    const std::string meta =
        simopts.meta_out.empty() ? simopts.output + ".meta.json" : simopts.meta_out;
    write_text_file(meta, dataset_sidecar_json(ds));
    return 0;
  }

  if (eval->parsed()) {
    ExperimentConfig config;
    config.scenario = scenario_from_name(evalopts.scenario);
    config.n = evalopts.n;
    config.p = evalopts.p;
    config.method = evalopts.method == "single" ? DetectMethod::single : DetectMethod::wbs;
    config.scheme = scheme_kind_from_name(evalopts.scheme);
    config.alpha = evalopts.alpha;
    config.permutations = evalopts.permutations;
    config.intervals = evalopts.intervals;
    config.reps = evalopts.reps;
    config.seed = evalopts.seed;
    config.threads = evalopts.threads;
    const ExperimentSummary summary = run_experiment(config);
    emit(evalopts.output, experiment_to_csv(summary));
    if (!evalopts.summary_out.empty()) {
      write_text_file(evalopts.summary_out, experiment_summary_json(summary));
    } else {
      std::cerr << experiment_summary_json(summary);
    }
    return 0;
  }

  if (returns->parsed()) {
    const DataMatrix prices = ingest_csv(retopts.input, retopts.header);
    LabeledDataset wrapper;
    wrapper.data = log_returns(prices);
    emit(retopts.output, dataset_to_csv(wrapper));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help and friends
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const hdcpd::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
