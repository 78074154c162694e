#include "fivenum/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "fivenum/normal.hpp"

namespace fivenum {
namespace {

void require_finite_ordered(double lo, double hi, const char* what) {
  if (!(std::isfinite(lo) && std::isfinite(hi))) {
    throw std::invalid_argument(std::string(what) + ": non-finite summary value");
  }
  if (lo > hi) {
    throw std::invalid_argument(std::string(what) + ": summary values out of order");
  }
}

void require_sample_size(int n, int min_n, const char* what) {
  if (n < min_n) {
    throw std::invalid_argument(std::string(what) + ": sample size must be >= " +
                                std::to_string(min_n));
  }
}

double weight_growth(int n) { return 0.07 * std::pow(static_cast<double>(n), 0.6); }

}  // namespace

FiveNumberSummary::FiveNumberSummary(double min_, double q1_, double median_, double q3_,
                                     double max_, int n_)
    : min(min_), q1(q1_), median(median_), q3(q3_), max(max_), n(n_) {
  require_finite_ordered(min, q1, "FiveNumberSummary");
  require_finite_ordered(q1, median, "FiveNumberSummary");
  require_finite_ordered(median, q3, "FiveNumberSummary");
  require_finite_ordered(q3, max, "FiveNumberSummary");
  require_sample_size(n, 1, "FiveNumberSummary");
}

ScenarioS1::ScenarioS1(double min_, double median_, double max_, int n_)
    : min(min_), median(median_), max(max_), n(n_) {
  require_finite_ordered(min, median, "ScenarioS1");
  require_finite_ordered(median, max, "ScenarioS1");
  require_sample_size(n, 1, "ScenarioS1");
}

ScenarioS2::ScenarioS2(double q1_, double median_, double q3_, int n_)
    : q1(q1_), median(median_), q3(q3_), n(n_) {
  require_finite_ordered(q1, median, "ScenarioS2");
  require_finite_ordered(median, q3, "ScenarioS2");
  require_sample_size(n, 1, "ScenarioS2");
}

NormalizationConstants normalization_constants(int n) {
  require_sample_size(n, 1, "normalization_constants");
  const double nn = n;
  const double xi = 2.0 * std_normal_quantile((nn - 0.375) / (nn + 0.25));
  // (0.75n - 0.125)/(n + 0.25) equals 0.5 at n = 1, so eta(1) = 0; every
  // estimator that divides by eta requires n >= 2.
  const double eta = 2.0 * std_normal_quantile((0.75 * nn - 0.125) / (nn + 0.25));
  const double g = weight_growth(n);
  return {n, xi, eta, (1.0 + g) * xi, eta * (1.0 + g) / g};
}

std::string_view to_string(EstimatorLabel label) {
  switch (label) {
    case EstimatorLabel::hozo_sd: return "hozo_sd";
    case EstimatorLabel::wan_sd_s1: return "wan_sd_s1";
    case EstimatorLabel::wan_sd_s2: return "wan_sd_s2";
    case EstimatorLabel::bland_sd: return "bland_sd";
    case EstimatorLabel::wan_sd_s3: return "wan_sd_s3";
    case EstimatorLabel::shi_sd: return "shi_sd";
    case EstimatorLabel::bland_mean: return "bland_mean";
    case EstimatorLabel::luo_mean: return "luo_mean";
    case EstimatorLabel::weighted_sd: return "weighted_sd";
  }
  return "unknown";
}

EstimatorLabel parse_estimator_label(std::string_view text) {
  for (EstimatorLabel label :
       {EstimatorLabel::hozo_sd, EstimatorLabel::wan_sd_s1, EstimatorLabel::wan_sd_s2,
        EstimatorLabel::bland_sd, EstimatorLabel::wan_sd_s3, EstimatorLabel::shi_sd,
        EstimatorLabel::bland_mean, EstimatorLabel::luo_mean, EstimatorLabel::weighted_sd}) {
    if (text == to_string(label)) return label;
  }
  throw std::invalid_argument("unknown estimator label: " + std::string(text));
}

Estimate sd_hozo_s1(const ScenarioS1& data) {
  const double range = data.max - data.min;
  double value;
  if (data.n <= 15) {
    const double mid = data.min - 2.0 * data.median + data.max;
    value = std::sqrt((range * range + 0.25 * mid * mid) / 12.0);
  } else if (data.n <= 70) {
    value = range / 4.0;
  } else {
    value = range / 6.0;
  }
  return {value, EstimatorLabel::hozo_sd, std::nullopt, std::nullopt};
}

Estimate sd_wan_s1(const ScenarioS1& data) {
  require_sample_size(data.n, 2, "sd_wan_s1");
  const double value = (data.max - data.min) / normalization_constants(data.n).xi;
  return {value, EstimatorLabel::wan_sd_s1, std::nullopt, std::nullopt};
}

Estimate sd_wan_s2(const ScenarioS2& data) {
  require_sample_size(data.n, 2, "sd_wan_s2");
  const double value = (data.q3 - data.q1) / normalization_constants(data.n).eta;
  return {value, EstimatorLabel::wan_sd_s2, std::nullopt, std::nullopt};
}

Estimate sd_bland(const FiveNumberSummary& data) {
  // The three-term expression equals the variance of the four segment
  // midpoints (a+q1)/2, (q1+m)/2, (m+q3)/2, (q3+b)/2 with equal weights;
  // evaluating it in centered form avoids most of the cancellation the
  // expanded sum-of-squares suffers from.
  const double mid[4] = {0.5 * (data.min + data.q1), 0.5 * (data.q1 + data.median),
                         0.5 * (data.median + data.q3), 0.5 * (data.q3 + data.max)};
  const double mean = 0.25 * (mid[0] + mid[1] + mid[2] + mid[3]);
  double radicand = 0.0;
  for (double v : mid) radicand += 0.25 * (v - mean) * (v - mean);
  if (radicand < 0.0) {
    if (radicand < -1e-12) {
      throw numeric_error("sd_bland: radicand " + std::to_string(radicand) +
                          " is negative beyond cancellation tolerance");
    }
    radicand = 0.0;
  }
  return {std::sqrt(radicand), EstimatorLabel::bland_sd, std::nullopt, std::nullopt};
}

Estimate sd_weighted(const FiveNumberSummary& data, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw std::invalid_argument("sd_weighted: weight must lie in [0, 1]");
  }
  require_sample_size(data.n, 2, "sd_weighted");
  const NormalizationConstants k = normalization_constants(data.n);
  const double range_part = (data.max - data.min) / k.xi;
  const double iqr_part = (data.q3 - data.q1) / k.eta;
  const double value = weight * range_part + (1.0 - weight) * iqr_part;
  return {value, EstimatorLabel::weighted_sd, weight, std::pair{range_part, iqr_part}};
}

Estimate sd_wan_s3(const FiveNumberSummary& data) {
  require_sample_size(data.n, 2, "sd_wan_s3");
  const NormalizationConstants k = normalization_constants(data.n);
  const double range_part = (data.max - data.min) / k.xi;
  const double iqr_part = (data.q3 - data.q1) / k.eta;
  return {0.5 * (range_part + iqr_part), EstimatorLabel::wan_sd_s3, 0.5,
          std::pair{range_part, iqr_part}};
}

double approx_optimal_weight(int n) {
  require_sample_size(n, 1, "approx_optimal_weight");
  return 1.0 / (1.0 + weight_growth(n));
}

Estimate sd_shi(const FiveNumberSummary& data) {
  require_sample_size(data.n, 2, "sd_shi");
  const NormalizationConstants k = normalization_constants(data.n);
  const double range_part = (data.max - data.min) / k.theta1;
  const double iqr_part = (data.q3 - data.q1) / k.theta2;
  return {range_part + iqr_part, EstimatorLabel::shi_sd, approx_optimal_weight(data.n),
          std::pair{range_part, iqr_part}};
}

Estimate mean_bland(const FiveNumberSummary& data) {
  const double value =
      (data.min + 2.0 * data.q1 + 2.0 * data.median + 2.0 * data.q3 + data.max) / 8.0;
  return {value, EstimatorLabel::bland_mean, std::nullopt, std::nullopt};
}

Estimate mean_luo(const FiveNumberSummary& data) {
  const double nn = data.n;
  const double w1 = 2.2 / (2.2 + std::pow(nn, 0.75));
  const double w2 = 0.7 - 0.72 / std::pow(nn, 0.55);
  const double value = w1 * 0.5 * (data.min + data.max) + w2 * 0.5 * (data.q1 + data.q3) +
                       (1.0 - w1 - w2) * data.median;
  return {value, EstimatorLabel::luo_mean, std::nullopt, std::nullopt};
}

Estimate evaluate_sd(EstimatorLabel label, const FiveNumberSummary& data) {
  switch (label) {
    case EstimatorLabel::hozo_sd:
      return sd_hozo_s1(ScenarioS1(data.min, data.median, data.max, data.n));
    case EstimatorLabel::wan_sd_s1:
      return sd_wan_s1(ScenarioS1(data.min, data.median, data.max, data.n));
    case EstimatorLabel::wan_sd_s2:
      return sd_wan_s2(ScenarioS2(data.q1, data.median, data.q3, data.n));
    case EstimatorLabel::bland_sd:
      return sd_bland(data);
    case EstimatorLabel::wan_sd_s3:
      return sd_wan_s3(data);
    case EstimatorLabel::shi_sd:
      return sd_shi(data);
    default:
      throw std::invalid_argument("evaluate_sd: " + std::string(to_string(label)) +
                                  " is not a standard deviation estimator");
  }
}

double mse_of_weight(double weight, const OrderStatMoments& moments,
                     const NormalizationConstants& constants, double sigma) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw std::invalid_argument("mse_of_weight: weight must lie in [0, 1]");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("mse_of_weight: sigma must be positive");
  if (moments.n != constants.n) {
    throw std::invalid_argument("mse_of_weight: moments and constants disagree on n");
  }
  const double v_range = moments.var_range / (constants.xi * constants.xi);
  const double v_iqr = moments.var_iqr / (constants.eta * constants.eta);
  const double cov = moments.cov_range_iqr / (constants.xi * constants.eta);
  return sigma * sigma *
         ((v_range + v_iqr - 2.0 * cov) * weight * weight - 2.0 * (v_iqr - cov) * weight +
          v_iqr);
}

std::vector<CoefficientRow> coefficient_table(int q_max) {
  if (q_max < 1) throw std::invalid_argument("coefficient_table: q_max must be >= 1");
  std::vector<CoefficientRow> rows;
  rows.reserve(static_cast<std::size_t>(q_max));
  for (int q = 1; q <= q_max; ++q) {
    const int n = 4 * q + 1;
    const NormalizationConstants k = normalization_constants(n);
    rows.push_back({q, n, k.theta1, k.theta2});
  }
  return rows;
}

void write_coefficient_table(const std::vector<CoefficientRow>& rows, std::ostream& out,
                             TableFormat format) {
  char buf[128];
  if (format == TableFormat::csv) {
    out << "Q,n,theta1,theta2\n";
    for (const CoefficientRow& r : rows) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.4f,%.4f\n", r.q, r.n, r.theta1, r.theta2);
      out << buf;
    }
    return;
  }
  std::snprintf(buf, sizeof buf, "%4s %6s %10s %10s\n", "Q", "n", "theta1", "theta2");
  out << buf;
  for (const CoefficientRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%4d %6d %10.4f %10.4f\n", r.q, r.n, r.theta1, r.theta2);
    out << buf;
  }
}

}  // namespace fivenum
