#include "fivenum/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fivenum {
namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double parse_number(std::string_view text, const char* what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) {
    throw std::invalid_argument(std::string(what) + ": cannot parse number '" + s + "'");
  }
  return v;
}

}  // namespace

Normal::Normal(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
  if (!std::isfinite(mu)) throw std::invalid_argument("Normal: mu must be finite");
  require_positive(sigma, "Normal: sigma");
}

LogNormal::LogNormal(double location_, double scale_) : location(location_), scale(scale_) {
  if (!std::isfinite(location)) throw std::invalid_argument("LogNormal: location must be finite");
  require_positive(scale, "LogNormal: scale");
}

ChiSquare::ChiSquare(int df_) : df(df_) {
  if (df < 1) throw std::invalid_argument("ChiSquare: df must be a positive integer");
}

BetaDist::BetaDist(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  require_positive(alpha, "BetaDist: alpha");
  require_positive(beta, "BetaDist: beta");
}

Weibull::Weibull(double shape_, double scale_) : shape(shape_), scale(scale_) {
  require_positive(shape, "Weibull: shape");
  require_positive(scale, "Weibull: scale");
}

double true_sigma(const DistributionSpec& dist) {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return d.sigma;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          const double s2 = d.scale * d.scale;
          return std::sqrt((std::exp(s2) - 1.0) * std::exp(2.0 * d.location + s2));
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
          return std::sqrt(2.0 * d.df);
        } else if constexpr (std::is_same_v<T, BetaDist>) {
          const double ab = d.alpha + d.beta;
          return std::sqrt(d.alpha * d.beta / (ab * ab * (ab + 1.0)));
        } else {
          const double g1 = std::tgamma(1.0 + 1.0 / d.shape);
          const double g2 = std::tgamma(1.0 + 2.0 / d.shape);
          return d.scale * std::sqrt(g2 - g1 * g1);
        }
      },
      dist);
}

double draw_one(const DistributionSpec& dist, Rng& rng) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return d.mu + d.sigma * rng.normal();
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return std::exp(d.location + d.scale * rng.normal());
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
          return 2.0 * rng.gamma(0.5 * d.df);
        } else if constexpr (std::is_same_v<T, BetaDist>) {
          const double x = rng.gamma(d.alpha);
          const double y = rng.gamma(d.beta);
          return x / (x + y);
        } else {
          return d.scale * std::pow(-std::log(rng.uniform_open01()), 1.0 / d.shape);
        }
      },
      dist);
}

std::vector<double> draw_sample(const DistributionSpec& dist, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("draw_sample: n must be positive");
  Rng rng(seed);
  std::vector<double> sample(static_cast<std::size_t>(n));
  for (double& v : sample) v = draw_one(dist, rng);
  std::sort(sample.begin(), sample.end());
  return sample;
}

DistributionSpec parse_distribution(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      params.push_back(parse_number(rest.substr(0, comma), "parse_distribution"));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  auto want = [&](std::size_t k) {
    if (params.size() != k) {
      throw std::invalid_argument("parse_distribution: '" + std::string(text) +
                                  "' should have " + std::to_string(k) + " parameter(s)");
    }
  };
  if (name == "normal") {
    want(2);
    return Normal(params[0], params[1]);
  }
  if (name == "lognormal") {
    want(2);
    return LogNormal(params[0], params[1]);
  }
  if (name == "chisq") {
    want(1);
    const int df = static_cast<int>(params[0]);
    if (static_cast<double>(df) != params[0]) {
      throw std::invalid_argument("parse_distribution: chisq df must be an integer");
    }
    return ChiSquare(df);
  }
  if (name == "beta") {
    want(2);
    return BetaDist(params[0], params[1]);
  }
  if (name == "weibull") {
    want(2);
    return Weibull(params[0], params[1]);
  }
  throw std::invalid_argument("parse_distribution: unknown distribution '" +
                              std::string(name) + "'");
}

std::string distribution_label(const DistributionSpec& dist) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return "normal:" + short_number(d.mu) + ";" + short_number(d.sigma);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return "lognormal:" + short_number(d.location) + ";" + short_number(d.scale);
        } else if constexpr (std::is_same_v<T, ChiSquare>) {
          return "chisq:" + std::to_string(d.df);
        } else if constexpr (std::is_same_v<T, BetaDist>) {
          return "beta:" + short_number(d.alpha) + ";" + short_number(d.beta);
        } else {
          return "weibull:" + short_number(d.shape) + ";" + short_number(d.scale);
        }
      },
      dist);
}

}  // namespace fivenum
