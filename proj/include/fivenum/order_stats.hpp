#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fivenum/errors.hpp"
#include "fivenum/estimators.hpp"
#include "fivenum/moments.hpp"
#include "fivenum/parallel.hpp"

namespace fivenum {

struct MomentMethod {
  enum class Kind { quadrature, monte_carlo };
  Kind kind = Kind::quadrature;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;

  static MomentMethod quadrature() { return {}; }
  static MomentMethod monte_carlo(std::int64_t reps, std::uint64_t seed) {
    return {Kind::monte_carlo, reps, seed};
  }
};

struct QuadratureMomentOptions {
  double abs_tol = 1e-8;  // absolute tolerance per moment integral
  double z_max = 9.0;     // integration domain [-z_max, z_max]
};

struct MonteCarloMomentOptions {
  std::int64_t reps = 1'000'000;
  std::uint64_t seed = 0;
  // Replications are split into fixed-size blocks; block b draws from a
  // stream seeded by mix_seed(seed, b), so the result does not depend on
  // how blocks are scheduled across threads.
  std::int64_t block_size = 10'000;
  Execution exec = Execution::parallel;
};

// Monte Carlo estimate of the moments plus leave-one-block-out (jackknife)
// standard errors, including for the derived weight diagnostics.
struct MonteCarloMoments {
  OrderStatMoments moments;
  double se_e_min = 0.0;
  double se_e_q1 = 0.0;
  double se_var_range = 0.0;
  double se_var_iqr = 0.0;
  double se_cov_range_iqr = 0.0;
  double j = 0.0;
  double se_j = 0.0;
  double w_opt = 0.0;
  double se_w_opt = 0.0;
  std::int64_t reps = 0;
  int blocks = 0;
};

// Deterministic path: integrates the single and pairwise order-statistic
// densities over [-z_max, z_max] (ordered triangle for pairs) with adaptive
// refinement. Combinatorial prefactors are evaluated in log space.
OrderStatMoments order_stat_moments_quadrature(SampleSizeQ size,
                                               const QuadratureMomentOptions& options = {});

// Independent stochastic path: sorted standard-normal replications.
MonteCarloMoments order_stat_moments_monte_carlo(SampleSizeQ size,
                                                 const MonteCarloMomentOptions& options);

// Umbrella dispatch; monte_carlo requires reps >= 10,000.
OrderStatMoments order_stat_moments(SampleSizeQ size, const MomentMethod& method);

// J(n) = [var_range/xi^2 - cov/(xi eta)] / [var_iqr/eta^2 - cov/(xi eta)].
// Throws numeric_error when either side of the ratio is not positive.
double j_of_n(const OrderStatMoments& moments, const NormalizationConstants& constants);

// w_opt(n) = 1 / (1 + J(n)), strictly inside (0, 1).
double optimal_weight_exact(const OrderStatMoments& moments,
                            const NormalizationConstants& constants);

// Least-squares fit of c1 * n^c2 + c0 to (n, J(n)) samples.
struct PowerLawFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;        // constrained to (0, 1)
  double residual = 0.0;  // sum of squared errors of (c0, c1, c2)
  // Pre-polish log-log OLS stage (populated when c0 is fixed at 0).
  double loglog_c1 = 0.0;
  double loglog_c2 = 0.0;
  double loglog_residual = 0.0;
};

struct PowerLawOptions {
  bool fix_c0 = true;  // default: c0 pinned at 0, fit by log-log OLS
  bool polish = true;  // coordinate descent on the untransformed residual
};

// Requires at least 10 samples spanning n from 5 to at least 401 with all
// J values positive.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples,
                          const PowerLawOptions& options = {});

// (n, J(n)) over the grid n = 4Q+1 for Q = q_min..q_max from quadrature
// moments. Grid entries are independent and run in parallel.
std::vector<std::pair<double, double>> j_grid(int q_min, int q_max,
                                              const QuadratureMomentOptions& options = {},
                                              Execution exec = Execution::parallel);

// Optional plain-text cache of computed moments, keyed by (n, method,
// tolerance). Rows are "n e_min e_q1 var_range var_iqr cov_range_iqr" in
// fixed decimal notation with enough digits that reloaded values are
// bit-identical to the stored ones.
class MomentCache {
 public:
  MomentCache(std::filesystem::path path, std::string method_key, double tolerance);

  std::optional<OrderStatMoments> find(int n) const;
  void insert(const OrderStatMoments& moments);
  void save() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::filesystem::path path_;
  std::string method_key_;
  double tolerance_;
  std::map<int, OrderStatMoments> entries_;
};

// Cache-aware wrapper around the quadrature path; results are identical
// with and without the cache.
OrderStatMoments order_stat_moments_cached(SampleSizeQ size,
                                           const QuadratureMomentOptions& options,
                                           MomentCache& cache);

}  // namespace fivenum
