#pragma once

namespace fivenum {

// Sample sizes of the form n = 4Q + 1, the only ones for which the quartile
// order statistics Z_(Q+1) and Z_(3Q+1) are defined exactly.
struct SampleSizeQ {
  int q = 1;
  int n = 5;

  static SampleSizeQ from_n(int n);
  static SampleSizeQ from_q(int q);
};

// Moments of the standard-normal order statistics at ranks 1, Q+1, 3Q+1, n.
// e_max == -e_min and e_q3 == -e_q1 hold by construction (the engine computes
// the lower ranks and mirrors them).
struct OrderStatMoments {
  int n = 0;
  double e_min = 0.0;
  double e_q1 = 0.0;
  double e_q3 = 0.0;
  double e_max = 0.0;
  double var_range = 0.0;      // Var(Z_(n) - Z_(1))
  double var_iqr = 0.0;        // Var(Z_(3Q+1) - Z_(Q+1))
  double cov_range_iqr = 0.0;  // Cov(Z_(n) - Z_(1), Z_(3Q+1) - Z_(Q+1))
};

}  // namespace fivenum
