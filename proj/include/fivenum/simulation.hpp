#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "fivenum/distributions.hpp"
#include "fivenum/estimators.hpp"
#include "fivenum/parallel.hpp"
#include "fivenum/summary.hpp"

namespace fivenum {

enum class SdDivisor { n_minus_1, n };

struct SimulationConfig {
  DistributionSpec dist = Normal(50.0, 17.0);
  std::vector<int> n_grid;
  std::int64_t reps = 200'000;
  std::uint64_t master_seed = 0;
  // (existing, new); both must be SD estimators over a full summary.
  std::pair<EstimatorLabel, EstimatorLabel> estimator_pair = {EstimatorLabel::wan_sd_s3,
                                                              EstimatorLabel::shi_sd};
  SdDivisor sd_divisor = SdDivisor::n_minus_1;
  // Fixed block partition of the replications; part of the deterministic
  // seeding contract, independent of thread count.
  std::int64_t block_size = 1000;
  Execution exec = Execution::parallel;
};

// n = 4Q+1 grid from 5 to 201 used by the RMSE comparisons.
std::vector<int> default_n_grid();

struct RmsePoint {
  int n;
  double rmse_existing;  // sum (S_ex - sigma)^2 / sum (S - sigma)^2
  double rmse_new;
  // Leave-one-block-out (jackknife) standard error of the ratio
  // rmse_new / rmse_existing (the denominator sums cancel in that ratio).
  double mc_se;
};

struct RmseReport {
  SimulationConfig config;
  double sigma = 0.0;  // true standard deviation the errors are taken against
  std::vector<RmsePoint> points;
};

// For every n in the grid: draws T samples, computes the full-sample SD and
// both summary-based estimates per replication, and accumulates the
// relative-MSE ratios block by block. Identical configs give identical
// reports no matter how many threads run the blocks.
RmseReport run_rmse(const SimulationConfig& config);

// CSV with header "dist,n,T,rmse_existing,rmse_new,mc_se".
void write_rmse_csv(const RmseReport& report, std::ostream& out);

// Raw per-replication estimates from standard-normal samples (true sigma 1),
// range-normalized vs IQR-normalized, for histogram rendering downstream.
struct HistogramScenario {
  int n = 0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> range_based;  // (b - a) / xi(n) per replication
  std::vector<double> iqr_based;    // (q3 - q1) / eta(n) per replication
};

HistogramScenario histogram_scenario(int n, std::int64_t reps, std::uint64_t seed,
                                     Execution exec = Execution::parallel);

// Two-column CSV with header "range_based,iqr_based".
void write_histogram_csv(const HistogramScenario& scenario, std::ostream& out);

}  // namespace fivenum
