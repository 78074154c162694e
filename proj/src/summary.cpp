#include "fivenum/summary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fivenum {
namespace detail {

namespace {

double interpolate_at(std::span<const double> sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = 1.0 + (static_cast<double>(n) - 1.0) * p;
  const double floor_h = std::floor(h);
  const std::size_t lo = static_cast<std::size_t>(floor_h) - 1;
  const double frac = h - floor_h;
  if (lo + 1 >= n || frac == 0.0) return sorted[std::min(lo, n - 1)];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SummaryValues summary_values(std::span<const double> sorted, QuartileConvention convention) {
  if (convention == QuartileConvention::paper_4q1) {
    const std::size_t q = (sorted.size() - 1) / 4;
    return {sorted.front(), sorted[q], sorted[2 * q], sorted[3 * q], sorted.back()};
  }
  return {sorted.front(), interpolate_at(sorted, 0.25), interpolate_at(sorted, 0.5),
          interpolate_at(sorted, 0.75), sorted.back()};
}

}  // namespace detail

FiveNumberSummary five_number_summary(std::span<const double> sorted_sample,
                                      QuartileConvention convention) {
  if (sorted_sample.empty()) {
    throw std::invalid_argument("five_number_summary: sample is empty");
  }
  if (!std::is_sorted(sorted_sample.begin(), sorted_sample.end())) {
    throw std::invalid_argument("five_number_summary: sample must be sorted ascending");
  }
  const int n = static_cast<int>(sorted_sample.size());
  if (convention == QuartileConvention::paper_4q1 && (n < 5 || (n - 1) % 4 != 0)) {
    throw std::invalid_argument(
        "five_number_summary: paper_4q1 convention requires n = 4Q+1 with Q >= 1");
  }
  const detail::SummaryValues v = detail::summary_values(sorted_sample, convention);
  return FiveNumberSummary(v.min, v.q1, v.median, v.q3, v.max, n);
}

}  // namespace fivenum
