#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fivenum/estimators.hpp"

namespace fivenum {

// One row of the input CSV "study_id,n,a,q1,m,q3,b[,iqr]". Missing fields
// are empty cells. The optional iqr column lets callers supply an IQR width
// instead of the (q1, q3) pair: when q1 and q3 are empty and m is present,
// the pair is reconstructed symmetrically as m -/+ iqr/2.
struct StudyRecord {
  std::string study_id;
  int n = 0;
  std::optional<double> a, q1, m, q3, b;
  std::optional<double> iqr;
  int line = 0;
};

enum class ConvertMethod { auto_select, shi, wan, bland, hozo, luo };
ConvertMethod parse_convert_method(std::string_view text);

enum class Scenario { s1, s2, s3 };
std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view text);

struct ConvertedRow {
  std::string study_id;
  int n = 0;
  Scenario scenario = Scenario::s3;
  std::optional<double> mean_est;
  std::optional<EstimatorLabel> mean_method;
  std::optional<double> sd_est;
  std::optional<EstimatorLabel> sd_method;
  std::optional<double> weight_used;
};

struct RowError {
  int line = 0;
  std::string study_id;
  std::string reason;
};

struct ConvertResult {
  std::vector<ConvertedRow> rows;  // successful rows, input order
  std::vector<RowError> errors;   // failed rows with reasons, input order
};

// Converts a CSV stream. Rows that fail validation are reported in
// `errors`, never silently dropped; an unusable header short-circuits with
// a single line-1 error. method auto_select picks per scenario: S1 -> the
// range-normalized SD, S2 -> the IQR-normalized SD, S3 -> Luo mean plus the
// shortcut SD.
ConvertResult convert_stream(std::istream& in, ConvertMethod method,
                             std::optional<Scenario> scenario_override = std::nullopt);

// Header "study_id,n,scenario,mean_est,mean_method,sd_est,sd_method,weight_used".
void write_convert_csv(const ConvertResult& result, std::ostream& out);

// Sidecar header "line,study_id,reason".
void write_error_sidecar(const ConvertResult& result, std::ostream& out);

}  // namespace fivenum
