#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "fivenum/order_stats.hpp"

using namespace fivenum;

namespace {

// Quadrature oracle values computed independently (adaptive integration of
// the order-statistic densities at tolerance 1e-11).
struct FrozenMoments {
  int n;
  double e_min, e_q1, var_range, var_iqr, cov;
  double j, w;
};

constexpr FrozenMoments kFrozen[] = {
    {5, -1.1629644736, -0.4950189705, 0.7466376009, 0.3231525707, 0.2371179638,
     0.14640744, 0.87229022},
    {29, -2.0285221460, -0.6420486101, 0.4837838184, 0.0796096253, 0.0428407271,
     0.52824768, 0.65434419},
    {85, -2.4489448758, -0.6633699576, 0.3787547214, 0.0284465022, 0.0132118330,
     0.98004484, 0.50503907},
};

// Plain Monte Carlo oracle built on the standard library's own normal
// sampler, independent of the engine's inversion-based stream.
struct McOracle {
  OrderStatMoments mean;       // across blocks
  OrderStatMoments se;         // standard error of each field
};

McOracle mc_oracle(int n, int blocks, int reps_per_block, unsigned seed) {
  const int q = (n - 1) / 4;
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  std::vector<double> buf(static_cast<std::size_t>(n));

  std::vector<OrderStatMoments> per_block;
  for (int b = 0; b < blocks; ++b) {
    double s_min = 0, s_q1 = 0, s_q3 = 0, s_max = 0;
    double sr = 0, srr = 0, si = 0, sii = 0, sri = 0;
    for (int rep = 0; rep < reps_per_block; ++rep) {
      for (double& v : buf) v = normal(engine);
      std::sort(buf.begin(), buf.end());
      const double z1 = buf.front(), zq = buf[q], z3 = buf[3 * q], zn = buf.back();
      const double range = zn - z1, iqr = z3 - zq;
      s_min += z1;
      s_q1 += zq;
      s_q3 += z3;
      s_max += zn;
      sr += range;
      srr += range * range;
      si += iqr;
      sii += iqr * iqr;
      sri += range * iqr;
    }
    const double t = reps_per_block;
    OrderStatMoments m;
    m.n = n;
    m.e_min = s_min / t;
    m.e_max = s_max / t;
    m.e_q1 = s_q1 / t;
    m.e_q3 = s_q3 / t;
    m.var_range = (srr - sr * sr / t) / (t - 1.0);
    m.var_iqr = (sii - si * si / t) / (t - 1.0);
    m.cov_range_iqr = (sri - sr * si / t) / (t - 1.0);
    per_block.push_back(m);
  }

  auto mean_and_se = [&](auto field) {
    double mean = 0.0;
    for (const auto& m : per_block) mean += field(m);
    mean /= blocks;
    double ss = 0.0;
    for (const auto& m : per_block) ss += (field(m) - mean) * (field(m) - mean);
    const double se = std::sqrt(ss / (blocks - 1.0) / blocks);
    return std::pair{mean, se};
  };

  McOracle out;
  out.mean.n = out.se.n = n;
#define FIELD(name)                                                        \
  {                                                                        \
    auto [m, s] = mean_and_se([](const OrderStatMoments& x) { return x.name; }); \
    out.mean.name = m;                                                     \
    out.se.name = s;                                                       \
  }
  FIELD(e_min)
  FIELD(e_q1)
  FIELD(e_q3)
  FIELD(e_max)
  FIELD(var_range)
  FIELD(var_iqr)
  FIELD(cov_range_iqr)
#undef FIELD
  return out;
}

}  // namespace

TEST_CASE("sample size validation") {
  CHECK(SampleSizeQ::from_n(5).q == 1);
  CHECK(SampleSizeQ::from_n(401).q == 100);
  CHECK(SampleSizeQ::from_q(3).n == 13);
  CHECK_THROWS_AS(SampleSizeQ::from_n(6), std::invalid_argument);
  CHECK_THROWS_AS(SampleSizeQ::from_n(1), std::invalid_argument);
  CHECK_THROWS_AS(SampleSizeQ::from_n(4), std::invalid_argument);
  CHECK_THROWS_AS(SampleSizeQ::from_q(0), std::invalid_argument);
}

TEST_CASE("quadrature moments match the independent oracle values") {
  for (const FrozenMoments& f : kFrozen) {
    const OrderStatMoments m = order_stat_moments_quadrature(SampleSizeQ::from_n(f.n));
    CAPTURE(f.n);
    CHECK(m.e_min == doctest::Approx(f.e_min).epsilon(1e-6));
    CHECK(m.e_q1 == doctest::Approx(f.e_q1).epsilon(1e-6));
    CHECK(m.var_range == doctest::Approx(f.var_range).epsilon(1e-6));
    CHECK(m.var_iqr == doctest::Approx(f.var_iqr).epsilon(1e-6));
    CHECK(m.cov_range_iqr == doctest::Approx(f.cov).epsilon(1e-5));
    // symmetry holds exactly by construction
    CHECK(m.e_max == -m.e_min);
    CHECK(m.e_q3 == -m.e_q1);
    // Cauchy-Schwarz
    CHECK(std::fabs(m.cov_range_iqr) <= std::sqrt(m.var_range * m.var_iqr));

    const NormalizationConstants k = normalization_constants(f.n);
    CHECK(j_of_n(m, k) == doctest::Approx(f.j).epsilon(1e-5));
    CHECK(optimal_weight_exact(m, k) == doctest::Approx(f.w).epsilon(1e-5));
  }
}

TEST_CASE("expected extremes for n = 5") {
  const OrderStatMoments m = order_stat_moments_quadrature(SampleSizeQ::from_n(5));
  CHECK(m.e_max == doctest::Approx(1.16296).epsilon(2e-5));
  CHECK(m.e_max - m.e_min == doctest::Approx(2.3259).epsilon(2e-4));
}

TEST_CASE("quadrature agrees with a library-independent Monte Carlo oracle") {
  const McOracle oracle = mc_oracle(5, 20, 10000, 1234567u);
  const OrderStatMoments quad = order_stat_moments_quadrature(SampleSizeQ::from_n(5));
  auto close = [](double value, double mean, double se) {
    return std::fabs(value - mean) <= 3.0 * se + 1e-9;
  };
  CHECK(close(quad.e_min, oracle.mean.e_min, oracle.se.e_min));
  CHECK(close(quad.e_max, oracle.mean.e_max, oracle.se.e_max));
  CHECK(close(quad.e_q1, oracle.mean.e_q1, oracle.se.e_q1));
  CHECK(close(quad.var_range, oracle.mean.var_range, oracle.se.var_range));
  CHECK(close(quad.var_iqr, oracle.mean.var_iqr, oracle.se.var_iqr));
  CHECK(close(quad.cov_range_iqr, oracle.mean.cov_range_iqr, oracle.se.cov_range_iqr));
}

TEST_CASE("engine Monte Carlo path agrees with quadrature within 3 SE") {
  for (int n : {5, 29}) {
    MonteCarloMomentOptions opt;
    opt.reps = 60000;
    opt.block_size = 1000;  // 60 blocks keeps the jackknife SE itself stable
    opt.seed = 911;
    const MonteCarloMoments mc = order_stat_moments_monte_carlo(SampleSizeQ::from_n(n), opt);
    const OrderStatMoments quad = order_stat_moments_quadrature(SampleSizeQ::from_n(n));
    CAPTURE(n);
    CHECK(std::fabs(mc.moments.e_min - quad.e_min) <= 3.0 * mc.se_e_min);
    CHECK(std::fabs(mc.moments.e_q1 - quad.e_q1) <= 3.0 * mc.se_e_q1);
    CHECK(std::fabs(mc.moments.var_range - quad.var_range) <= 3.0 * mc.se_var_range);
    CHECK(std::fabs(mc.moments.var_iqr - quad.var_iqr) <= 3.0 * mc.se_var_iqr);
    CHECK(std::fabs(mc.moments.cov_range_iqr - quad.cov_range_iqr) <=
          3.0 * mc.se_cov_range_iqr);
    const NormalizationConstants k = normalization_constants(n);
    CHECK(std::fabs(mc.w_opt - optimal_weight_exact(quad, k)) <= 3.0 * mc.se_w_opt);
  }
}

TEST_CASE("Monte Carlo path is deterministic and thread-count independent") {
  MonteCarloMomentOptions opt;
  opt.reps = 20000;
  opt.seed = 77;
  const SampleSizeQ size = SampleSizeQ::from_n(9);

  opt.exec = Execution::parallel;
  const MonteCarloMoments a = order_stat_moments_monte_carlo(size, opt);
  const MonteCarloMoments b = order_stat_moments_monte_carlo(size, opt);
  opt.exec = Execution::serial;
  const MonteCarloMoments c = order_stat_moments_monte_carlo(size, opt);

  CHECK(a.moments.e_min == b.moments.e_min);
  CHECK(a.moments.var_range == b.moments.var_range);
  CHECK(a.moments.cov_range_iqr == b.moments.cov_range_iqr);
  CHECK(a.w_opt == b.w_opt);
  // serial reference produces bit-identical results
  CHECK(a.moments.e_min == c.moments.e_min);
  CHECK(a.moments.e_q1 == c.moments.e_q1);
  CHECK(a.moments.var_range == c.moments.var_range);
  CHECK(a.moments.var_iqr == c.moments.var_iqr);
  CHECK(a.moments.cov_range_iqr == c.moments.cov_range_iqr);
  CHECK(a.w_opt == c.w_opt);
  CHECK(a.se_w_opt == c.se_w_opt);

  opt.seed = 78;
  const MonteCarloMoments d = order_stat_moments_monte_carlo(size, opt);
  CHECK(a.moments.var_range != d.moments.var_range);

  opt.reps = 9999;
  CHECK_THROWS_AS(order_stat_moments(size, MomentMethod::monte_carlo(9999, 1)),
                  std::invalid_argument);
}

TEST_CASE("J is scale free: computing from mu + sigma Z draws changes nothing") {
  const int n = 13, q = 3;
  const double mu = 50.0, sigma = 17.0;
  std::mt19937_64 engine(4242);
  std::normal_distribution<double> normal;
  std::vector<double> z(n), x(n);

  double zr = 0, zrr = 0, zi = 0, zii = 0, zri = 0;
  double xr = 0, xrr = 0, xi_s = 0, xii = 0, xri = 0;
  const int reps = 20000;
  for (int rep = 0; rep < reps; ++rep) {
    for (int i = 0; i < n; ++i) {
      z[i] = normal(engine);
      x[i] = mu + sigma * z[i];
    }
    std::sort(z.begin(), z.end());
    std::sort(x.begin(), x.end());
    const double zrange = z[n - 1] - z[0], ziqr = z[3 * q] - z[q];
    const double xrange = x[n - 1] - x[0], xiqr = x[3 * q] - x[q];
    zr += zrange; zrr += zrange * zrange; zi += ziqr; zii += ziqr * ziqr; zri += zrange * ziqr;
    xr += xrange; xrr += xrange * xrange; xi_s += xiqr; xii += xiqr * xiqr; xri += xrange * xiqr;
  }
  const double t = reps;
  auto j_from = [&](double sr, double srr, double si, double sii, double sri) {
    OrderStatMoments m;
    m.n = n;
    m.var_range = (srr - sr * sr / t) / (t - 1.0);
    m.var_iqr = (sii - si * si / t) / (t - 1.0);
    m.cov_range_iqr = (sri - sr * si / t) / (t - 1.0);
    return j_of_n(m, normalization_constants(n));
  };
  const double j_z = j_from(zr, zrr, zi, zii, zri);
  const double j_x = j_from(xr, xrr, xi_s, xii, xri);
  CHECK(j_x == doctest::Approx(j_z).epsilon(1e-9));
}

TEST_CASE("J increases and the optimal weight decreases over the grid") {
  const auto grid = j_grid(1, 8);
  REQUIRE(grid.size() == 8);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(grid[i].first == doctest::Approx(4.0 * (i + 1) + 1.0));
    CHECK(grid[i].second > 0.0);
    const double w = 1.0 / (1.0 + grid[i].second);
    CHECK(w > 0.0);
    CHECK(w < 1.0);
    if (i > 0) CHECK(grid[i].second > grid[i - 1].second);
  }
}

TEST_CASE("j_of_n rejects inconsistent inputs") {
  const OrderStatMoments m = order_stat_moments_quadrature(SampleSizeQ::from_n(5));
  CHECK_THROWS_AS(j_of_n(m, normalization_constants(9)), std::invalid_argument);

  OrderStatMoments broken = m;
  broken.cov_range_iqr = 10.0;  // dwarfs both variance terms
  CHECK_THROWS_AS(j_of_n(broken, normalization_constants(5)), numeric_error);
}

TEST_CASE("power-law fit recovers its own model family") {
  std::vector<std::pair<double, double>> samples;
  for (int q = 1; q <= 100; ++q) {
    const double n = 4.0 * q + 1.0;
    samples.push_back({n, 0.07 * std::pow(n, 0.6)});
  }
  const PowerLawFit fit = fit_power_law(samples);
  CHECK(fit.c0 == 0.0);
  CHECK(fit.c1 == doctest::Approx(0.07).epsilon(1e-10));
  CHECK(fit.c2 == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(fit.residual <= 1e-20);
  CHECK(fit.loglog_c1 == doctest::Approx(0.07).epsilon(1e-10));
  CHECK(fit.loglog_c2 == doctest::Approx(0.6).epsilon(1e-10));

  for (auto& [n, j] : samples) j = 0.2 * std::pow(n, 0.3);
  const PowerLawFit fit2 = fit_power_law(samples);
  CHECK(fit2.c1 == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(fit2.c2 == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("power-law fit with free intercept") {
  std::vector<std::pair<double, double>> samples;
  for (int q = 1; q <= 100; ++q) {
    const double n = 4.0 * q + 1.0;
    samples.push_back({n, 0.05 * std::pow(n, 0.55) + 0.3});
  }
  PowerLawOptions opt;
  opt.fix_c0 = false;
  const PowerLawFit fit = fit_power_law(samples, opt);
  CHECK(fit.c0 == doctest::Approx(0.3).epsilon(1e-5));
  CHECK(fit.c1 == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(fit.c2 == doctest::Approx(0.55).epsilon(1e-5));
}

TEST_CASE("power-law fit input validation") {
  std::vector<std::pair<double, double>> few = {{5, 0.1}, {401, 1.0}};
  CHECK_THROWS_AS(fit_power_law(few), std::invalid_argument);

  std::vector<std::pair<double, double>> samples;
  for (int q = 1; q <= 50; ++q) {
    samples.push_back({4.0 * q + 1.0, 0.07 * std::pow(4.0 * q + 1.0, 0.6)});
  }
  // max n = 201 < 401: insufficient span
  CHECK_THROWS_AS(fit_power_law(samples), std::invalid_argument);

  for (int q = 51; q <= 100; ++q) {
    samples.push_back({4.0 * q + 1.0, 0.07 * std::pow(4.0 * q + 1.0, 0.6)});
  }
  samples[3].second = -0.2;
  CHECK_THROWS_AS(fit_power_law(samples), std::invalid_argument);
}

TEST_CASE("moment cache round trips bit-identically") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "fivenum_moment_cache_test.txt";
  fs::remove(path);

  const QuadratureMomentOptions opt;
  {
    MomentCache cache(path, "quadrature", opt.abs_tol);
    const OrderStatMoments direct = order_stat_moments_quadrature(SampleSizeQ::from_n(5), opt);
    const OrderStatMoments via_cache =
        order_stat_moments_cached(SampleSizeQ::from_n(5), opt, cache);
    CHECK(via_cache.e_min == direct.e_min);
    CHECK(via_cache.var_range == direct.var_range);
    cache.save();
  }
  {
    MomentCache cache(path, "quadrature", opt.abs_tol);
    CHECK(cache.size() == 1);
    const OrderStatMoments direct = order_stat_moments_quadrature(SampleSizeQ::from_n(5), opt);
    const auto hit = cache.find(5);
    REQUIRE(hit.has_value());
    CHECK(hit->e_min == direct.e_min);
    CHECK(hit->e_q1 == direct.e_q1);
    CHECK(hit->e_max == direct.e_max);
    CHECK(hit->e_q3 == direct.e_q3);
    CHECK(hit->var_range == direct.var_range);
    CHECK(hit->var_iqr == direct.var_iqr);
    CHECK(hit->cov_range_iqr == direct.cov_range_iqr);
    // cached and uncached results are the same object values
    const OrderStatMoments again = order_stat_moments_cached(SampleSizeQ::from_n(5), opt, cache);
    CHECK(again.cov_range_iqr == direct.cov_range_iqr);
  }
  // a different tolerance key must not silently reuse the file
  CHECK_THROWS_AS(MomentCache(path, "quadrature", 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(MomentCache(path, "monte_carlo", opt.abs_tol), std::invalid_argument);
  fs::remove(path);
}
