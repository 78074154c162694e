#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fivenum/convert.hpp"
#include "fivenum/errors.hpp"
#include "fivenum/estimators.hpp"
#include "fivenum/order_stats.hpp"
#include "fivenum/simulation.hpp"
#include "fivenum/text.hpp"

namespace {

using namespace fivenum;

// "-" means stdout/stdin.
struct OutputFile {
  explicit OutputFile(const std::string& path) {
    if (path != "-") {
      file.open(path, std::ios::trunc);
      if (!file) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  std::ofstream file;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FIVENUM_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 12345;
}

int run_convert(const std::string& in_path, const std::string& out_path,
                std::string err_path, const std::string& method_str,
                const std::string& scenario_str) {
  std::ifstream in_file;
  if (in_path != "-") {
    in_file.open(in_path);
    if (!in_file) {
      std::cerr << "error: cannot open input file " << in_path << "\n";
      return 1;
    }
  }
  std::istream& in = in_path == "-" ? std::cin : in_file;

  std::optional<Scenario> override;
  if (!scenario_str.empty()) override = parse_scenario(scenario_str);
  const ConvertResult result = convert_stream(in, parse_convert_method(method_str), override);

  OutputFile out(out_path);
  write_convert_csv(result, out.stream());

  if (err_path.empty()) err_path = out_path == "-" ? "-" : out_path + ".errors.csv";
  if (err_path == "-") {
    if (!result.errors.empty()) write_error_sidecar(result, std::cerr);
  } else {
    std::ofstream err_file(err_path, std::ios::trunc);
    write_error_sidecar(result, err_file);
  }
  return result.errors.empty() ? 0 : 1;
}

int run_table(int q_max, const std::string& format, const std::string& out_path) {
  const std::vector<CoefficientRow> rows = coefficient_table(q_max);
  OutputFile out(out_path);
  write_coefficient_table(rows, out.stream(),
                          format == "csv" ? TableFormat::csv : TableFormat::text);
  return 0;
}

int run_weights(const std::vector<int>& n_list, const std::string& mode,
                const std::string& out_path, const std::string& cache_path) {
  OutputFile out(out_path);
  out.stream() << "n,w,J,mode\n";
  int failures = 0;

  std::unique_ptr<MomentCache> cache;
  const QuadratureMomentOptions quad_options;
  if (!cache_path.empty()) {
    cache = std::make_unique<MomentCache>(cache_path, "quadrature", quad_options.abs_tol);
  }

  for (int n : n_list) {
    if (mode == "approx") {
      const double w = approx_optimal_weight(n);
      const double j = 1.0 / w - 1.0;
      out.stream() << n << ',' << format_sig9(w) << ',' << format_sig9(j) << ",approx\n";
      continue;
    }
    try {
      const SampleSizeQ size = SampleSizeQ::from_n(n);
      const OrderStatMoments moments =
          cache ? order_stat_moments_cached(size, quad_options, *cache)
                : order_stat_moments_quadrature(size, quad_options);
      const NormalizationConstants constants = normalization_constants(n);
      const double j = j_of_n(moments, constants);
      out.stream() << n << ',' << format_sig9(1.0 / (1.0 + j)) << ',' << format_sig9(j)
                   << ",exact\n";
    } catch (const std::exception& e) {
      std::cerr << "error: n=" << n << ": " << e.what() << "\n";
      ++failures;
    }
  }
  if (cache) cache->save();
  return failures == 0 ? 0 : 1;
}

std::vector<int> parse_grid(const std::string& grid_str) {
  if (grid_str == "default") return default_n_grid();
  std::vector<int> grid;
  std::stringstream ss(grid_str);
  std::string item;
  while (std::getline(ss, item, ',')) grid.push_back(std::stoi(item));
  return grid;
}

int run_simulate(const std::string& dist_str, const std::string& grid_str,
                 std::int64_t reps, std::uint64_t seed, bool histogram, int hist_n,
                 const std::string& out_path, const std::string& estimators_str,
                 const std::string& divisor_str, bool serial, int threads) {
  if (threads > 0) set_threads(threads);
  const Execution exec = serial ? Execution::serial : Execution::parallel;

  OutputFile out(out_path);
  if (histogram) {
    const HistogramScenario scenario = histogram_scenario(hist_n, reps, seed, exec);
    write_histogram_csv(scenario, out.stream());
    return 0;
  }

  SimulationConfig config;
  config.dist = parse_distribution(dist_str);
  config.n_grid = parse_grid(grid_str);
  config.reps = reps;
  config.master_seed = seed;
  config.sd_divisor = divisor_str == "n" ? SdDivisor::n : SdDivisor::n_minus_1;
  config.exec = exec;

  const auto comma = estimators_str.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("--estimators expects two comma-separated labels");
  }
  config.estimator_pair = {parse_estimator_label(trim(estimators_str.substr(0, comma))),
                           parse_estimator_label(trim(estimators_str.substr(comma + 1)))};

  const RmseReport report = run_rmse(config);
  write_rmse_csv(report, out.stream());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate sample mean and standard deviation from five-number summaries"};
  app.require_subcommand(1);

  auto* convert = app.add_subcommand("convert", "Convert study rows from CSV");
  std::string in_path = "-", out_path = "-", err_path, method_str = "auto", scenario_str;
  convert->add_option("--in", in_path, "input CSV file, '-' for stdin");
  convert->add_option("--out", out_path, "output CSV file, '-' for stdout");
  convert->add_option("--errors", err_path,
                      "error sidecar CSV (default <out>.errors.csv, stderr for stdout)");
  convert->add_option("--method", method_str, "estimator family")
      ->check(CLI::IsMember({"auto", "shi", "wan", "bland", "hozo", "luo"}));
  convert->add_option("--scenario", scenario_str, "force reporting scenario")
      ->check(CLI::IsMember({"s1", "s2", "s3"}));

  auto* table = app.add_subcommand("table", "Print the theta1/theta2 coefficient table");
  int q_max = 60;
  std::string table_format = "text", table_out = "-";
  table->add_option("--qmax", q_max, "largest Q (n = 4Q+1)")->check(CLI::PositiveNumber);
  table->add_option("--format", table_format)->check(CLI::IsMember({"text", "csv"}));
  table->add_option("--out", table_out, "output file, '-' for stdout");

  auto* weights = app.add_subcommand("weights", "Optimal weights for given sample sizes");
  std::vector<int> n_list;
  std::string mode = "approx", weights_out = "-", cache_path;
  weights->add_option("--n", n_list, "sample sizes")->delimiter(',')->required();
  weights->add_option("--mode", mode)->check(CLI::IsMember({"approx", "exact"}));
  weights->add_option("--out", weights_out, "output file, '-' for stdout");
  weights->add_option("--cache", cache_path, "moment cache file (exact mode)");

  auto* simulate = app.add_subcommand("simulate", "Run the RMSE or histogram studies");
  std::string dist_str = "normal:50,17", grid_str = "default", sim_out = "-";
  std::string estimators_str = "wan_sd_s3,shi_sd", divisor_str = "n-1";
  std::int64_t reps = 200000;
  std::uint64_t seed = default_seed();
  bool histogram = false, serial = false;
  int hist_n = 5, threads = 0;
  simulate->add_option("--dist", dist_str, "parent distribution, e.g. normal:50,17");
  simulate->add_option("--grid", grid_str, "'default' or comma-separated sample sizes");
  simulate->add_option("--reps", reps, "replications per grid point")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "master seed (env FIVENUM_SEED supplies the default)");
  simulate->add_flag("--histogram", histogram, "emit raw per-replication estimates instead");
  simulate->add_option("--n", hist_n, "sample size for --histogram");
  simulate->add_option("--out", sim_out, "output file, '-' for stdout");
  simulate->add_option("--estimators", estimators_str, "existing,new SD estimator labels");
  simulate->add_option("--sd-divisor", divisor_str, "full-sample SD divisor")
      ->check(CLI::IsMember({"n-1", "n"}));
  simulate->add_flag("--serial", serial, "run the serial reference path");
  simulate->add_option("--threads", threads, "worker threads (0 = library default)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (convert->parsed()) {
      return run_convert(in_path, out_path, err_path, method_str, scenario_str);
    }
    if (table->parsed()) return run_table(q_max, table_format, table_out);
    if (weights->parsed()) return run_weights(n_list, mode, weights_out, cache_path);
    return run_simulate(dist_str, grid_str, reps, seed, histogram, hist_n, sim_out,
                        estimators_str, divisor_str, serial, threads);
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
