#include "fivenum/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fivenum/normal.hpp"
#include "fivenum/quadrature.hpp"
#include "fivenum/rng.hpp"

namespace fivenum {
namespace {

constexpr double kLogInvSqrt2Pi = -0.9189385332046727418;

double log_phi(double z) { return kLogInvSqrt2Pi - 0.5 * z * z; }

// Initial uniform subdivision fine enough that order-statistic densities
// (whose width shrinks like 1/sqrt(n)) always land on several panels.
int panels_for(int n) { return 16 + n / 4; }

// E[Z_(r)] and E[Z_(r)^2] for one rank.
std::pair<double, double> single_rank_moments(int n, int r,
                                              const QuadratureMomentOptions& opt) {
  const double logc = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(r)) -
                      std::lgamma(n - r + 1.0);
  const int below = r - 1, above = n - r;
  auto density = [&](double z) {
    double lf = logc + log_phi(z);
    if (below > 0) lf += below * std::log(detail::normal_cdf_raw(z));
    if (above > 0) lf += above * std::log(detail::normal_sf_raw(z));
    return std::exp(lf);
  };
  const QuadratureControl ctl{opt.abs_tol, panels_for(n)};
  const double m1 =
      integrate([&](double z) { return z * density(z); }, -opt.z_max, opt.z_max, ctl);
  const double m2 =
      integrate([&](double z) { return z * z * density(z); }, -opt.z_max, opt.z_max, ctl);
  return {m1, m2};
}

// E[Z_(r) Z_(s)] for r < s over the ordered triangle x < y.
double pair_product_moment(int n, int r, int s, const QuadratureMomentOptions& opt) {
  const double logc = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(r)) -
                      std::lgamma(static_cast<double>(s - r)) - std::lgamma(n - s + 1.0);
  const int below = r - 1, between = s - r - 1, above = n - s;
  const double zmax = opt.z_max;
  // Inner errors show up as noise on the outer integrand, so the inner
  // budget is a small fraction of the total per unit of outer length.
  const QuadratureControl inner_ctl{0.1 * opt.abs_tol / (2.0 * zmax), panels_for(n)};
  const QuadratureControl outer_ctl{0.5 * opt.abs_tol, panels_for(n)};

  auto outer = [&](double x) {
    if (x >= zmax) return 0.0;
    const double cdf_x = detail::normal_cdf_raw(x);
    const double sf_x = detail::normal_sf_raw(x);
    const double log_below_phi_x =
        logc + log_phi(x) + (below > 0 ? below * std::log(cdf_x) : 0.0);
    auto f = [&](double y) {
      double lf = log_below_phi_x + log_phi(y);
      if (between > 0) {
        const double mid = (x + y <= 0.0) ? detail::normal_cdf_raw(y) - cdf_x
                                          : sf_x - detail::normal_sf_raw(y);
        if (!(mid > 0.0)) return 0.0;
        lf += between * std::log(mid);
      }
      if (above > 0) lf += above * std::log(detail::normal_sf_raw(y));
      return x * y * std::exp(lf);
    };
    return integrate(f, x, zmax, inner_ctl);
  };
  return integrate(outer, -zmax, zmax, outer_ctl);
}

void check_moment_consistency(const OrderStatMoments& m, const char* what) {
  const bool ok = m.var_range > 0.0 && m.var_iqr > 0.0 &&
                  std::fabs(m.cov_range_iqr) <= std::sqrt(m.var_range * m.var_iqr) &&
                  std::isfinite(m.e_min) && std::isfinite(m.e_q1);
  if (!ok) {
    throw numeric_error(std::string(what) + ": inconsistent order-statistic moments for n=" +
                        std::to_string(m.n));
  }
}

// Sufficient statistics of one replication block.
struct BlockSums {
  std::int64_t count = 0;
  double s_min = 0, s_q1 = 0, s_q3 = 0, s_max = 0;
  double s_range = 0, s_range2 = 0;
  double s_iqr = 0, s_iqr2 = 0;
  double s_cross = 0;

  BlockSums& operator-=(const BlockSums& o) {
    count -= o.count;
    s_min -= o.s_min; s_q1 -= o.s_q1; s_q3 -= o.s_q3; s_max -= o.s_max;
    s_range -= o.s_range; s_range2 -= o.s_range2;
    s_iqr -= o.s_iqr; s_iqr2 -= o.s_iqr2;
    s_cross -= o.s_cross;
    return *this;
  }
  BlockSums& operator+=(const BlockSums& o) {
    count += o.count;
    s_min += o.s_min; s_q1 += o.s_q1; s_q3 += o.s_q3; s_max += o.s_max;
    s_range += o.s_range; s_range2 += o.s_range2;
    s_iqr += o.s_iqr; s_iqr2 += o.s_iqr2;
    s_cross += o.s_cross;
    return *this;
  }
};

OrderStatMoments moments_from_sums(int n, const BlockSums& s) {
  const double t = static_cast<double>(s.count);
  OrderStatMoments m;
  m.n = n;
  // Symmetrize the location estimates so e_max == -e_min holds exactly.
  m.e_min = 0.5 * (s.s_min - s.s_max) / t;
  m.e_max = -m.e_min;
  m.e_q1 = 0.5 * (s.s_q1 - s.s_q3) / t;
  m.e_q3 = -m.e_q1;
  m.var_range = (s.s_range2 - s.s_range * s.s_range / t) / (t - 1.0);
  m.var_iqr = (s.s_iqr2 - s.s_iqr * s.s_iqr / t) / (t - 1.0);
  m.cov_range_iqr = (s.s_cross - s.s_range * s.s_iqr / t) / (t - 1.0);
  return m;
}

double jackknife_se(std::span<const double> leave_one_out) {
  const double b = static_cast<double>(leave_one_out.size());
  double mean = 0.0;
  for (double v : leave_one_out) mean += v;
  mean /= b;
  double ss = 0.0;
  for (double v : leave_one_out) ss += (v - mean) * (v - mean);
  return std::sqrt((b - 1.0) / b * ss);
}

}  // namespace

SampleSizeQ SampleSizeQ::from_n(int n) {
  if (n < 5 || (n - 1) % 4 != 0) {
    throw std::invalid_argument("sample size " + std::to_string(n) +
                                " is not of the form 4Q+1 with Q >= 1");
  }
  return {(n - 1) / 4, n};
}

SampleSizeQ SampleSizeQ::from_q(int q) {
  if (q < 1) throw std::invalid_argument("Q must be a positive integer");
  return {q, 4 * q + 1};
}

OrderStatMoments order_stat_moments_quadrature(SampleSizeQ size,
                                               const QuadratureMomentOptions& opt) {
  const int n = size.n;
  const int rank_q1 = size.q + 1;
  const int rank_q3 = 3 * size.q + 1;

  const auto [e1, e1_sq] = single_rank_moments(n, 1, opt);
  const auto [eq, eq_sq] = single_rank_moments(n, rank_q1, opt);
  const double var_min = e1_sq - e1 * e1;
  const double var_q1 = eq_sq - eq * eq;

  // By symmetry the remaining covariances mirror these four:
  // Cov(Zn, Zq3) = Cov(Z1, Zq1) and Cov(Zn, Zq1) = Cov(Z1, Zq3).
  const double cov_min_max = pair_product_moment(n, 1, n, opt) - e1 * (-e1);
  const double cov_q1_q3 = pair_product_moment(n, rank_q1, rank_q3, opt) - eq * (-eq);
  const double cov_min_q1 = pair_product_moment(n, 1, rank_q1, opt) - e1 * eq;
  const double cov_min_q3 = pair_product_moment(n, 1, rank_q3, opt) - e1 * (-eq);

  OrderStatMoments m;
  m.n = n;
  m.e_min = e1;
  m.e_max = -e1;
  m.e_q1 = eq;
  m.e_q3 = -eq;
  m.var_range = 2.0 * (var_min - cov_min_max);
  m.var_iqr = 2.0 * (var_q1 - cov_q1_q3);
  m.cov_range_iqr = 2.0 * (cov_min_q1 - cov_min_q3);
  check_moment_consistency(m, "order_stat_moments_quadrature");
  return m;
}

MonteCarloMoments order_stat_moments_monte_carlo(SampleSizeQ size,
                                                 const MonteCarloMomentOptions& opt) {
  if (opt.reps < 10'000) {
    throw std::invalid_argument("order_stat_moments_monte_carlo: reps must be >= 10,000");
  }
  const int n = size.n;
  // Keep at least ~10 blocks so the jackknife has something to resample.
  const std::int64_t block_size =
      std::min(opt.block_size, std::max<std::int64_t>(1000, opt.reps / 10));
  const std::int64_t n_blocks = (opt.reps + block_size - 1) / block_size;

  std::vector<BlockSums> sums(static_cast<std::size_t>(n_blocks));
  for_each_block(n_blocks, opt.exec, [&](std::int64_t b) {
    Rng rng(opt.seed, static_cast<std::uint64_t>(b));
    std::vector<double> buf(static_cast<std::size_t>(n));
    BlockSums local;
    const std::int64_t lo = b * block_size;
    const std::int64_t hi = std::min(opt.reps, lo + block_size);
    for (std::int64_t rep = lo; rep < hi; ++rep) {
      for (double& v : buf) v = rng.normal();
      std::sort(buf.begin(), buf.end());
      const double z_min = buf.front();
      const double z_q1 = buf[static_cast<std::size_t>(size.q)];
      const double z_q3 = buf[static_cast<std::size_t>(3 * size.q)];
      const double z_max = buf.back();
      const double range = z_max - z_min;
      const double iqr = z_q3 - z_q1;
      local.count += 1;
      local.s_min += z_min;
      local.s_q1 += z_q1;
      local.s_q3 += z_q3;
      local.s_max += z_max;
      local.s_range += range;
      local.s_range2 += range * range;
      local.s_iqr += iqr;
      local.s_iqr2 += iqr * iqr;
      local.s_cross += range * iqr;
    }
    sums[static_cast<std::size_t>(b)] = local;
  });

  BlockSums total;
  for (const BlockSums& s : sums) total += s;

  MonteCarloMoments out;
  out.moments = moments_from_sums(n, total);
  check_moment_consistency(out.moments, "order_stat_moments_monte_carlo");
  out.reps = opt.reps;
  out.blocks = static_cast<int>(n_blocks);

  const NormalizationConstants constants = normalization_constants(n);
  out.j = j_of_n(out.moments, constants);
  out.w_opt = 1.0 / (1.0 + out.j);

  if (n_blocks >= 2) {
    std::vector<double> lo_e_min, lo_e_q1, lo_vr, lo_vi, lo_cov, lo_j, lo_w;
    lo_e_min.reserve(sums.size());
    for (const BlockSums& s : sums) {
      BlockSums rest = total;
      rest -= s;
      const OrderStatMoments m = moments_from_sums(n, rest);
      lo_e_min.push_back(m.e_min);
      lo_e_q1.push_back(m.e_q1);
      lo_vr.push_back(m.var_range);
      lo_vi.push_back(m.var_iqr);
      lo_cov.push_back(m.cov_range_iqr);
      const double j = j_of_n(m, constants);
      lo_j.push_back(j);
      lo_w.push_back(1.0 / (1.0 + j));
    }
    out.se_e_min = jackknife_se(lo_e_min);
    out.se_e_q1 = jackknife_se(lo_e_q1);
    out.se_var_range = jackknife_se(lo_vr);
    out.se_var_iqr = jackknife_se(lo_vi);
    out.se_cov_range_iqr = jackknife_se(lo_cov);
    out.se_j = jackknife_se(lo_j);
    out.se_w_opt = jackknife_se(lo_w);
  }
  return out;
}

OrderStatMoments order_stat_moments(SampleSizeQ size, const MomentMethod& method) {
  if (method.kind == MomentMethod::Kind::quadrature) {
    return order_stat_moments_quadrature(size);
  }
  MonteCarloMomentOptions opt;
  opt.reps = method.reps;
  opt.seed = method.seed;
  return order_stat_moments_monte_carlo(size, opt).moments;
}

double j_of_n(const OrderStatMoments& moments, const NormalizationConstants& constants) {
  if (moments.n != constants.n) {
    throw std::invalid_argument("j_of_n: moments and constants computed for different n");
  }
  const double v_range = moments.var_range / (constants.xi * constants.xi);
  const double v_iqr = moments.var_iqr / (constants.eta * constants.eta);
  const double cov = moments.cov_range_iqr / (constants.xi * constants.eta);
  const double denominator = v_iqr - cov;
  const double numerator = v_range - cov;
  if (!(denominator > 0.0) || !(numerator > 0.0)) {
    throw numeric_error("j_of_n: moment ratio is not positive for n=" +
                        std::to_string(moments.n) + "; moment inputs look broken");
  }
  return numerator / denominator;
}

double optimal_weight_exact(const OrderStatMoments& moments,
                            const NormalizationConstants& constants) {
  return 1.0 / (1.0 + j_of_n(moments, constants));
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples,
                          const PowerLawOptions& options) {
  if (samples.size() < 10) {
    throw std::invalid_argument("fit_power_law: need at least 10 sample points");
  }
  double n_min = samples[0].first, n_max = samples[0].first;
  for (const auto& [n, j] : samples) {
    if (!(j > 0.0) || !std::isfinite(j)) {
      throw std::invalid_argument("fit_power_law: J values must be positive and finite");
    }
    n_min = std::min(n_min, n);
    n_max = std::max(n_max, n);
  }
  if (!(n_min <= 5.0 && n_max >= 401.0)) {
    throw std::invalid_argument("fit_power_law: samples must span n from 5 to at least 401");
  }

  auto sse = [&](double c0, double c1, double c2) {
    double acc = 0.0;
    for (const auto& [n, j] : samples) {
      const double r = c0 + c1 * std::pow(n, c2) - j;
      acc += r * r;
    }
    return acc;
  };

  PowerLawFit fit;
  if (options.fix_c0) {
    // Exact in the model family: regress log J on log n.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double count = static_cast<double>(samples.size());
    for (const auto& [n, j] : samples) {
      const double x = std::log(n), y = std::log(j);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / count;
    fit.loglog_c1 = std::exp(intercept);
    fit.loglog_c2 = slope;
    fit.loglog_residual = sse(0.0, fit.loglog_c1, fit.loglog_c2);
    fit.c0 = 0.0;
    fit.c1 = fit.loglog_c1;
    fit.c2 = fit.loglog_c2;
    fit.residual = fit.loglog_residual;

    if (options.polish) {
      double c1 = fit.c1, c2 = fit.c2, best = fit.residual;
      double step1 = 0.01 * c1, step2 = 0.01;
      for (int iter = 0; iter < 400 && (step1 > 1e-14 * c1 || step2 > 1e-14); ++iter) {
        bool improved = false;
        for (double d : {-step1, step1}) {
          if (c1 + d > 0.0 && sse(0.0, c1 + d, c2) < best) {
            c1 += d;
            best = sse(0.0, c1, c2);
            improved = true;
          }
        }
        for (double d : {-step2, step2}) {
          const double cand = c2 + d;
          if (cand > 0.0 && cand < 1.0 && sse(0.0, c1, cand) < best) {
            c2 = cand;
            best = sse(0.0, c1, c2);
            improved = true;
          }
        }
        if (!improved) {
          step1 *= 0.5;
          step2 *= 0.5;
        }
      }
      fit.c1 = c1;
      fit.c2 = c2;
      fit.residual = best;
    }
  } else {
    // Profile out the linear coefficients (c1, c0) and golden-section the
    // exponent over (0, 1).
    auto profiled = [&](double c2, double* c0_out, double* c1_out) {
      double s1 = 0, sp = 0, spp = 0, sj = 0, spj = 0;
      const double count = static_cast<double>(samples.size());
      for (const auto& [n, j] : samples) {
        const double p = std::pow(n, c2);
        s1 += 1.0;
        sp += p;
        spp += p * p;
        sj += j;
        spj += p * j;
      }
      (void)s1;
      const double det = count * spp - sp * sp;
      const double c1 = (count * spj - sp * sj) / det;
      const double c0 = (sj - c1 * sp) / count;
      if (c0_out) *c0_out = c0;
      if (c1_out) *c1_out = c1;
      return sse(c0, c1, c2);
    };
    constexpr double kGolden = 0.6180339887498949;
    double lo = 1e-3, hi = 1.0 - 1e-3;
    double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
    double f1 = profiled(x1, nullptr, nullptr), f2 = profiled(x2, nullptr, nullptr);
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kGolden * (hi - lo);
        f1 = profiled(x1, nullptr, nullptr);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kGolden * (hi - lo);
        f2 = profiled(x2, nullptr, nullptr);
      }
    }
    fit.c2 = 0.5 * (lo + hi);
    fit.residual = profiled(fit.c2, &fit.c0, &fit.c1);
  }

  if (!(fit.c2 > 0.0 && fit.c2 < 1.0)) {
    throw numeric_error("fit_power_law: fitted exponent " + std::to_string(fit.c2) +
                        " falls outside (0, 1); input is not concave power-law shaped");
  }
  return fit;
}

std::vector<std::pair<double, double>> j_grid(int q_min, int q_max,
                                              const QuadratureMomentOptions& options,
                                              Execution exec) {
  if (q_min < 1 || q_max < q_min) {
    throw std::invalid_argument("j_grid: requires 1 <= q_min <= q_max");
  }
  std::vector<std::pair<double, double>> grid(static_cast<std::size_t>(q_max - q_min + 1));
  for_each_block(static_cast<std::int64_t>(grid.size()), exec, [&](std::int64_t i) {
    const SampleSizeQ size = SampleSizeQ::from_q(q_min + static_cast<int>(i));
    const OrderStatMoments m = order_stat_moments_quadrature(size, options);
    grid[static_cast<std::size_t>(i)] = {static_cast<double>(size.n),
                                         j_of_n(m, normalization_constants(size.n))};
  });
  return grid;
}

MomentCache::MomentCache(std::filesystem::path path, std::string method_key,
                         double tolerance)
    : path_(std::move(path)), method_key_(std::move(method_key)), tolerance_(tolerance) {
  std::ifstream in(path_);
  if (!in) return;  // nothing cached yet
  std::string header;
  std::getline(in, header);
  char expected[128];
  std::snprintf(expected, sizeof expected, "# fivenum-moments method=%s tol=%.17g",
                method_key_.c_str(), tolerance_);
  if (header != expected) {
    throw std::invalid_argument("moment cache " + path_.string() +
                                " was written with a different method/tolerance key");
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    OrderStatMoments m;
    if (!(row >> m.n >> m.e_min >> m.e_q1 >> m.var_range >> m.var_iqr >> m.cov_range_iqr)) {
      throw std::invalid_argument("moment cache " + path_.string() + ": malformed row: " + line);
    }
    m.e_max = -m.e_min;
    m.e_q3 = -m.e_q1;
    entries_[m.n] = m;
  }
}

std::optional<OrderStatMoments> MomentCache::find(int n) const {
  const auto it = entries_.find(n);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void MomentCache::insert(const OrderStatMoments& moments) { entries_[moments.n] = moments; }

void MomentCache::save() const {
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write moment cache " + path_.string());
  char buf[256];
  std::snprintf(buf, sizeof buf, "# fivenum-moments method=%s tol=%.17g\n",
                method_key_.c_str(), tolerance_);
  out << buf;
  for (const auto& [n, m] : entries_) {
    std::snprintf(buf, sizeof buf, "%d %.24f %.24f %.24f %.24f %.24f\n", n, m.e_min, m.e_q1,
                  m.var_range, m.var_iqr, m.cov_range_iqr);
    out << buf;
  }
}

OrderStatMoments order_stat_moments_cached(SampleSizeQ size,
                                           const QuadratureMomentOptions& options,
                                           MomentCache& cache) {
  if (auto hit = cache.find(size.n)) return *hit;
  const OrderStatMoments m = order_stat_moments_quadrature(size, options);
  cache.insert(m);
  return m;
}

}  // namespace fivenum
