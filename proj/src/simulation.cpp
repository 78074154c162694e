#include "fivenum/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fivenum/errors.hpp"
#include "fivenum/text.hpp"

namespace fivenum {
namespace {

void validate_sd_label(EstimatorLabel label) {
  switch (label) {
    case EstimatorLabel::hozo_sd:
    case EstimatorLabel::wan_sd_s1:
    case EstimatorLabel::wan_sd_s2:
    case EstimatorLabel::bland_sd:
    case EstimatorLabel::wan_sd_s3:
    case EstimatorLabel::shi_sd:
      return;
    default:
      throw std::invalid_argument("run_rmse: estimator_pair entries must be SD estimators, got " +
                                  std::string(to_string(label)));
  }
}

QuartileConvention convention_for(int n) {
  return (n >= 5 && (n - 1) % 4 == 0) ? QuartileConvention::paper_4q1
                                      : QuartileConvention::interpolated;
}

double full_sample_sd(std::span<const double> values, SdDivisor divisor) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (divisor == SdDivisor::n_minus_1 ? n - 1.0 : n));
}

struct RmseBlock {
  double num_existing = 0.0;
  double num_new = 0.0;
  double denom = 0.0;
};

}  // namespace

std::vector<int> default_n_grid() { return {5, 9, 13, 21, 29, 41, 61, 85, 121, 161, 201}; }

RmseReport run_rmse(const SimulationConfig& config) {
  if (config.reps < 1000) throw std::invalid_argument("run_rmse: reps must be >= 1000");
  if (config.n_grid.empty()) throw std::invalid_argument("run_rmse: n_grid is empty");
  for (int n : config.n_grid) {
    if (n < 5) throw std::invalid_argument("run_rmse: every grid n must be >= 5");
  }
  if (config.block_size < 1) throw std::invalid_argument("run_rmse: block_size must be >= 1");
  validate_sd_label(config.estimator_pair.first);
  validate_sd_label(config.estimator_pair.second);

  RmseReport report;
  report.config = config;
  report.sigma = true_sigma(config.dist);
  const double sigma = report.sigma;
  const std::int64_t blocks =
      (config.reps + config.block_size - 1) / config.block_size;

  for (std::size_t grid_index = 0; grid_index < config.n_grid.size(); ++grid_index) {
    const int n = config.n_grid[grid_index];
    const QuartileConvention convention = convention_for(n);
    std::vector<RmseBlock> acc(static_cast<std::size_t>(blocks));

    for_each_block(blocks, config.exec, [&](std::int64_t b) {
      // One stream per (grid point, block); pure function of the master seed.
      Rng rng(config.master_seed,
              (static_cast<std::uint64_t>(grid_index) << 32) | static_cast<std::uint64_t>(b));
      std::vector<double> buf(static_cast<std::size_t>(n));
      RmseBlock local;
      const std::int64_t lo = b * config.block_size;
      const std::int64_t hi = std::min(config.reps, lo + config.block_size);
      for (std::int64_t rep = lo; rep < hi; ++rep) {
        for (double& v : buf) v = draw_one(config.dist, rng);
        const double s_full = full_sample_sd(buf, config.sd_divisor);
        std::sort(buf.begin(), buf.end());
        const detail::SummaryValues sv = detail::summary_values(buf, convention);
        const FiveNumberSummary summary(sv.min, sv.q1, sv.median, sv.q3, sv.max, n);
        const double est_existing = evaluate_sd(config.estimator_pair.first, summary).value;
        const double est_new = evaluate_sd(config.estimator_pair.second, summary).value;
        if (!std::isfinite(s_full) || !std::isfinite(est_existing) || !std::isfinite(est_new)) {
          throw numeric_error("run_rmse: non-finite estimate at n=" + std::to_string(n) +
                              ", replication " + std::to_string(rep));
        }
        local.num_existing += (est_existing - sigma) * (est_existing - sigma);
        local.num_new += (est_new - sigma) * (est_new - sigma);
        local.denom += (s_full - sigma) * (s_full - sigma);
      }
      acc[static_cast<std::size_t>(b)] = local;
    });

    RmseBlock total;
    for (const RmseBlock& s : acc) {
      total.num_existing += s.num_existing;
      total.num_new += s.num_new;
      total.denom += s.denom;
    }
    if (!(total.denom > 0.0)) {
      throw numeric_error("run_rmse: degenerate full-sample error sum at n=" +
                          std::to_string(n));
    }

    RmsePoint point;
    point.n = n;
    point.rmse_existing = total.num_existing / total.denom;
    point.rmse_new = total.num_new / total.denom;

    // Jackknife over blocks for the ratio rmse_new / rmse_existing.
    double se = 0.0;
    if (blocks >= 2) {
      std::vector<double> loo;
      loo.reserve(acc.size());
      for (const RmseBlock& s : acc) {
        const double ex = total.num_existing - s.num_existing;
        const double nw = total.num_new - s.num_new;
        loo.push_back(nw / ex);
      }
      double mean = 0.0;
      for (double v : loo) mean += v;
      mean /= static_cast<double>(loo.size());
      double ss = 0.0;
      for (double v : loo) ss += (v - mean) * (v - mean);
      const double b_count = static_cast<double>(loo.size());
      se = std::sqrt((b_count - 1.0) / b_count * ss);
    }
    point.mc_se = se;
    report.points.push_back(point);
  }
  return report;
}

void write_rmse_csv(const RmseReport& report, std::ostream& out) {
  out << "dist,n,T,rmse_existing,rmse_new,mc_se\n";
  const std::string label = distribution_label(report.config.dist);
  for (const RmsePoint& p : report.points) {
    out << label << ',' << p.n << ',' << report.config.reps << ','
        << format_sig9(p.rmse_existing) << ',' << format_sig9(p.rmse_new) << ','
        << format_sig9(p.mc_se) << '\n';
  }
}

HistogramScenario histogram_scenario(int n, std::int64_t reps, std::uint64_t seed,
                                     Execution exec) {
  if (n < 5) throw std::invalid_argument("histogram_scenario: n must be >= 5");
  if (reps < 1000) throw std::invalid_argument("histogram_scenario: reps must be >= 1000");

  HistogramScenario out;
  out.n = n;
  out.reps = reps;
  out.seed = seed;
  out.range_based.resize(static_cast<std::size_t>(reps));
  out.iqr_based.resize(static_cast<std::size_t>(reps));

  const QuartileConvention convention = convention_for(n);
  const NormalizationConstants k = normalization_constants(n);
  const std::int64_t block_size = 1000;
  const std::int64_t blocks = (reps + block_size - 1) / block_size;

  for_each_block(blocks, exec, [&](std::int64_t b) {
    Rng rng(seed, static_cast<std::uint64_t>(b));
    std::vector<double> buf(static_cast<std::size_t>(n));
    const std::int64_t lo = b * block_size;
    const std::int64_t hi = std::min(reps, lo + block_size);
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      for (double& v : buf) v = rng.normal();
      std::sort(buf.begin(), buf.end());
      const detail::SummaryValues sv = detail::summary_values(buf, convention);
      out.range_based[static_cast<std::size_t>(rep)] = (sv.max - sv.min) / k.xi;
      out.iqr_based[static_cast<std::size_t>(rep)] = (sv.q3 - sv.q1) / k.eta;
    }
  });
  return out;
}

void write_histogram_csv(const HistogramScenario& scenario, std::ostream& out) {
  out << "range_based,iqr_based\n";
  for (std::size_t i = 0; i < scenario.range_based.size(); ++i) {
    out << format_sig9(scenario.range_based[i]) << ',' << format_sig9(scenario.iqr_based[i])
        << '\n';
  }
}

}  // namespace fivenum
