#pragma once

#include "fivenum/errors.hpp"

namespace fivenum {

// A probability strictly inside (0, 1). Construction rejects anything else,
// so downstream quantile code never has to deal with degenerate arguments.
class Probability {
 public:
  explicit Probability(double p);
  double value() const { return p_; }

 private:
  double p_;
};

// Standard normal density. Rejects non-finite input.
double std_normal_pdf(double x);

// Standard normal distribution function, computed through the complementary
// error function. Results that round to 0 or 1 in double precision are
// nudged to the nearest representable value inside (0, 1) so the return
// type's invariant holds for every finite x.
Probability std_normal_cdf(double x);

// Inverse of std_normal_cdf: rational initial approximation refined by
// Halley steps, accurate to a few ulp over [1e-10, 1 - 1e-10].
double std_normal_quantile(Probability p);
double std_normal_quantile(double p);

namespace detail {

// Unwrapped versions used in hot loops (quadrature integrands, samplers).
// Callers guarantee finite x / p in (0, 1).
double normal_cdf_raw(double x);   // lower tail
double normal_sf_raw(double x);    // upper tail, accurate for large x
double normal_pdf_raw(double x);
double normal_quantile_raw(double p);

}  // namespace detail

}  // namespace fivenum
