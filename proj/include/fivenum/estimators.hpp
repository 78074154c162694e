#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fivenum/moments.hpp"

namespace fivenum {

// Reported study statistics {a, q1, m, q3, b} with the sample size.
// Ordering a <= q1 <= m <= q3 <= b is enforced on construction; ties are
// allowed (a fully degenerate summary is valid and yields SD 0).
struct FiveNumberSummary {
  double min;
  double q1;
  double median;
  double q3;
  double max;
  int n;

  FiveNumberSummary(double min, double q1, double median, double q3, double max, int n);
};

// Partial reports: S1 = {a, m, b; n}, S2 = {q1, m, q3; n}.
struct ScenarioS1 {
  double min;
  double median;
  double max;
  int n;
  ScenarioS1(double min, double median, double max, int n);
};

struct ScenarioS2 {
  double q1;
  double median;
  double q3;
  int n;
  ScenarioS2(double q1, double median, double q3, int n);
};

using ScenarioData = std::variant<ScenarioS1, ScenarioS2, FiveNumberSummary>;

// Quantile-based divisors: xi and eta normalize the range and the IQR, and
// theta1/theta2 are the shortcut divisors combining them with the
// approximate optimal weight.
struct NormalizationConstants {
  int n;
  double xi;      // 2 * quantile((n - 0.375) / (n + 0.25))
  double eta;     // 2 * quantile((0.75n - 0.125) / (n + 0.25))
  double theta1;  // (1 + 0.07 n^0.6) * xi
  double theta2;  // eta * (1 + 0.07 n^0.6) / (0.07 n^0.6)
};

NormalizationConstants normalization_constants(int n);

enum class EstimatorLabel {
  hozo_sd,
  wan_sd_s1,
  wan_sd_s2,
  bland_sd,
  wan_sd_s3,
  shi_sd,
  bland_mean,
  luo_mean,
  weighted_sd,
};

std::string_view to_string(EstimatorLabel label);
EstimatorLabel parse_estimator_label(std::string_view text);

struct Estimate {
  double value;
  EstimatorLabel method;
  std::optional<double> weight_used;
  // (range-based component, IQR-based component) where applicable.
  std::optional<std::pair<double, double>> components;
};

// --- standard deviation estimators -------------------------------------

// Step rule: sqrt((b-a)^2 + (a-2m+b)^2/4)/sqrt(12) for n <= 15,
// (b-a)/4 for 15 < n <= 70, (b-a)/6 for n > 70.
Estimate sd_hozo_s1(const ScenarioS1& data);

// (b - a) / xi(n). Requires n >= 2 (xi(1) = 0).
Estimate sd_wan_s1(const ScenarioS1& data);

// (q3 - q1) / eta(n). Requires n >= 2 (eta(1) = 0).
Estimate sd_wan_s2(const ScenarioS2& data);

// Square root of the three-term quadratic form; independent of n. A
// radicand in [-1e-12, 0] is treated as cancellation noise and clamped to
// zero; anything more negative raises numeric_error.
Estimate sd_bland(const FiveNumberSummary& data);

// Average of the range- and IQR-based estimates.
Estimate sd_wan_s3(const FiveNumberSummary& data);

// w * (b-a)/xi + (1-w) * (q3-q1)/eta with w in [0, 1].
Estimate sd_weighted(const FiveNumberSummary& data, double weight);

// 1 / (1 + 0.07 n^0.6); strictly decreasing in n.
double approx_optimal_weight(int n);

// Shortcut form (b-a)/theta1 + (q3-q1)/theta2; agrees with
// sd_weighted(data, approx_optimal_weight(n)) to within rounding.
Estimate sd_shi(const FiveNumberSummary& data);

// --- mean estimators ----------------------------------------------------

// (a + 2 q1 + 2 m + 2 q3 + b) / 8.
Estimate mean_bland(const FiveNumberSummary& data);

// w1 (a+b)/2 + w2 (q1+q3)/2 + (1 - w1 - w2) m with
// w1 = 2.2/(2.2 + n^0.75), w2 = 0.7 - 0.72/n^0.55.
Estimate mean_luo(const FiveNumberSummary& data);

// Dispatch for the SD estimators by label (weighted_sd and the mean labels
// are rejected). Partial-report estimators consume the matching subset.
Estimate evaluate_sd(EstimatorLabel label, const FiveNumberSummary& data);

// --- weight diagnostics ---------------------------------------------------

// MSE of the weighted estimator as a quadratic in w, scaled by sigma^2:
// sigma^2 * [(vR + vI - 2c) w^2 - 2 (vI - c) w + vI] with
// vR = var_range/xi^2, vI = var_iqr/eta^2, c = cov/(xi eta).
double mse_of_weight(double weight, const OrderStatMoments& moments,
                     const NormalizationConstants& constants, double sigma);

// --- coefficient table ----------------------------------------------------

struct CoefficientRow {
  int q;
  int n;
  double theta1;
  double theta2;
};

// Rows for Q = 1..q_max, full precision; rounding happens at rendering.
std::vector<CoefficientRow> coefficient_table(int q_max);

enum class TableFormat { text, csv };

// csv: header "Q,n,theta1,theta2", 4-decimal fixed point.
// text: aligned columns with the same rounding.
void write_coefficient_table(const std::vector<CoefficientRow>& rows, std::ostream& out,
                             TableFormat format);

}  // namespace fivenum
