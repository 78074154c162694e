#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fivenum/rng.hpp"

namespace fivenum {

// The five parent distributions used by the simulation studies. Each spec
// validates its parameters on construction and reports its standard
// deviation in closed form.
struct Normal {
  Normal(double mu, double sigma);
  double mu, sigma;
};

struct LogNormal {
  LogNormal(double location, double scale);
  double location, scale;
};

struct ChiSquare {
  explicit ChiSquare(int df);
  int df;
};

struct BetaDist {
  BetaDist(double alpha, double beta);
  double alpha, beta;
};

struct Weibull {
  Weibull(double shape, double scale);
  double shape, scale;
};

using DistributionSpec = std::variant<Normal, LogNormal, ChiSquare, BetaDist, Weibull>;

// Closed-form standard deviation of the parent distribution.
double true_sigma(const DistributionSpec& dist);

// One variate from an existing stream.
double draw_one(const DistributionSpec& dist, Rng& rng);

// Deterministic sorted sample of size n for the given seed.
std::vector<double> draw_sample(const DistributionSpec& dist, int n, std::uint64_t seed);

// CLI syntax: "normal:50,17", "lognormal:4,0.3", "chisq:10", "beta:9,4",
// "weibull:2,35".
DistributionSpec parse_distribution(std::string_view text);

// Comma-free tag used in CSV output, e.g. "normal:50;17".
std::string distribution_label(const DistributionSpec& dist);

}  // namespace fivenum
