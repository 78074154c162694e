#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fivenum/errors.hpp"

namespace fivenum {

struct QuadratureControl {
  double abs_tol = 1e-8;
  // The interval is first split uniformly so that narrow features cannot
  // hide between the nodes of a single wide panel.
  int initial_subdivisions = 10;
  int max_panels = 40000;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK abscissae and weights).
inline constexpr double kGkNode[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kGkWeightK[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kGkWeightG[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

template <class F>
Panel evaluate_panel(const F& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  const double fc = f(c);
  double sum_k = kGkWeightK[7] * fc;
  double sum_g = kGkWeightG[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double v = f(c - h * kGkNode[i]) + f(c + h * kGkNode[i]);
    sum_k += kGkWeightK[i] * v;
    if (i % 2 == 1) sum_g += kGkWeightG[i / 2] * v;
  }
  Panel p{a, b, sum_k * h, std::fabs(sum_k - sum_g) * h};
  if (!std::isfinite(p.value) || !std::isfinite(p.err)) {
    p.value = 0.0;
    p.err = std::numeric_limits<double>::infinity();
  }
  return p;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration: the panel with the largest
// error estimate is bisected until the summed estimate meets the absolute
// tolerance. Throws numeric_error when the tolerance cannot be met.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureControl& ctl = {}) {
  if (a == b) return 0.0;
  if (!(a < b)) throw std::invalid_argument("integrate: requires a <= b");

  const int m = std::max(1, ctl.initial_subdivisions);
  std::priority_queue<detail::Panel> panels;
  double total_value = 0.0;
  double total_err = 0.0;
  for (int i = 0; i < m; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / m;
    const double hi = (i + 1 == m) ? b : a + (b - a) * static_cast<double>(i + 1) / m;
    const detail::Panel p = detail::evaluate_panel(f, lo, hi);
    total_value += p.value;
    total_err += p.err;
    panels.push(p);
  }

  const double min_width = (b - a) * 1e-13;
  while (total_err > ctl.abs_tol) {
    if (static_cast<int>(panels.size()) >= ctl.max_panels) {
      throw numeric_error("adaptive quadrature exceeded the panel budget at tolerance " +
                          std::to_string(ctl.abs_tol));
    }
    const detail::Panel worst = panels.top();
    if (worst.b - worst.a < min_width) {
      throw numeric_error("adaptive quadrature stalled on [" + std::to_string(worst.a) +
                          ", " + std::to_string(worst.b) +
                          "]; integrand looks singular or discontinuous");
    }
    panels.pop();
    total_value -= worst.value;
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    for (const detail::Panel& child : {detail::evaluate_panel(f, worst.a, mid),
                                       detail::evaluate_panel(f, mid, worst.b)}) {
      total_value += child.value;
      total_err += child.err;
      panels.push(child);
    }
  }
  return total_value;
}

}  // namespace fivenum
