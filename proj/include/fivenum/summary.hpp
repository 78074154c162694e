#pragma once

#include <span>

#include "fivenum/estimators.hpp"

namespace fivenum {

// How a sorted sample is reduced to a five-number summary.
//   paper_4q1:    n must equal 4Q+1; quartiles are the order statistics at
//                 ranks Q+1 and 3Q+1, the median at rank 2Q+1.
//   interpolated: quartiles/median linearly interpolated at positions
//                 1 + (n-1)p for p = 0.25, 0.5, 0.75. At n = 4Q+1 these
//                 positions are integral and the two conventions agree.
enum class QuartileConvention { paper_4q1, interpolated };

FiveNumberSummary five_number_summary(std::span<const double> sorted_sample,
                                      QuartileConvention convention);

namespace detail {

// Unchecked extraction used inside simulation loops; `sorted` must be
// ascending and non-empty.
struct SummaryValues {
  double min, q1, median, q3, max;
};

SummaryValues summary_values(std::span<const double> sorted, QuartileConvention convention);

}  // namespace detail

}  // namespace fivenum
