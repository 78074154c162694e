#include "fivenum/convert.hpp"

#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "fivenum/text.hpp"

namespace fivenum {
namespace {

constexpr std::string_view kBaseHeader = "study_id,n,a,q1,m,q3,b";
constexpr std::string_view kIqrHeader = "study_id,n,a,q1,m,q3,b,iqr";

std::optional<double> parse_optional_number(const std::string& field, const char* name,
                                            std::string* error) {
  if (field.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || !std::isfinite(v)) {
    *error = std::string("unparseable ") + name + " value '" + field + "'";
    return std::nullopt;
  }
  return v;
}

struct RowOutcome {
  std::optional<ConvertedRow> row;
  std::string error;
};

Scenario detect_scenario(const StudyRecord& r, std::string* error) {
  const bool s3 = r.a && r.q1 && r.m && r.q3 && r.b;
  const bool s1 = r.a && r.m && r.b && !r.q1 && !r.q3;
  const bool s2 = r.q1 && r.m && r.q3 && !r.a && !r.b;
  if (s3) return Scenario::s3;
  if (s1) return Scenario::s1;
  if (s2) return Scenario::s2;
  *error = "field pattern matches none of S1 {a m b} / S2 {q1 m q3} / S3 {all five}";
  return Scenario::s3;
}

bool has_fields_for(const StudyRecord& r, Scenario scenario) {
  switch (scenario) {
    case Scenario::s1: return r.a && r.m && r.b;
    case Scenario::s2: return r.q1 && r.m && r.q3;
    case Scenario::s3: return r.a && r.q1 && r.m && r.q3 && r.b;
  }
  return false;
}

void apply_estimate(ConvertedRow& out, const Estimate& est, bool is_mean) {
  if (is_mean) {
    out.mean_est = est.value;
    out.mean_method = est.method;
  } else {
    out.sd_est = est.value;
    out.sd_method = est.method;
    if (est.weight_used) out.weight_used = est.weight_used;
  }
}

RowOutcome process_record(StudyRecord r, ConvertMethod method,
                          std::optional<Scenario> scenario_override) {
  RowOutcome outcome;

  // Reconcile the auxiliary iqr column with q1/q3.
  if (r.iqr) {
    if (r.q1 && r.q3) {
      const double width = *r.q3 - *r.q1;
      if (std::fabs(width - *r.iqr) > 1e-9 * std::max(1.0, std::fabs(*r.iqr))) {
        outcome.error = "iqr column disagrees with q3 - q1";
        return outcome;
      }
    } else if (!r.q1 && !r.q3) {
      if (!r.m) {
        outcome.error = "iqr column without q1/q3 requires the median to be present";
        return outcome;
      }
      r.q1 = *r.m - 0.5 * *r.iqr;
      r.q3 = *r.m + 0.5 * *r.iqr;
    } else {
      outcome.error = "iqr column cannot be combined with only one of q1/q3";
      return outcome;
    }
  }

  Scenario scenario;
  if (scenario_override) {
    scenario = *scenario_override;
    if (!has_fields_for(r, scenario)) {
      outcome.error = std::string("row lacks the fields required for forced scenario ") +
                      std::string(to_string(scenario));
      return outcome;
    }
  } else {
    std::string detect_error;
    scenario = detect_scenario(r, &detect_error);
    if (!detect_error.empty()) {
      outcome.error = detect_error;
      return outcome;
    }
  }

  ConvertedRow row;
  row.study_id = r.study_id;
  row.n = r.n;
  row.scenario = scenario;

  try {
    auto s1_data = [&] { return ScenarioS1(*r.a, *r.m, *r.b, r.n); };
    auto s2_data = [&] { return ScenarioS2(*r.q1, *r.m, *r.q3, r.n); };
    auto s3_data = [&] { return FiveNumberSummary(*r.a, *r.q1, *r.m, *r.q3, *r.b, r.n); };

    switch (method) {
      case ConvertMethod::auto_select:
        if (scenario == Scenario::s1) {
          apply_estimate(row, sd_wan_s1(s1_data()), false);
        } else if (scenario == Scenario::s2) {
          apply_estimate(row, sd_wan_s2(s2_data()), false);
        } else {
          const FiveNumberSummary s = s3_data();
          apply_estimate(row, mean_luo(s), true);
          apply_estimate(row, sd_shi(s), false);
        }
        break;
      case ConvertMethod::shi: {
        if (scenario != Scenario::s3) {
          outcome.error = "method shi requires the full five-number summary";
          return outcome;
        }
        const FiveNumberSummary s = s3_data();
        apply_estimate(row, mean_luo(s), true);
        apply_estimate(row, sd_shi(s), false);
        break;
      }
      case ConvertMethod::wan:
        if (scenario == Scenario::s1) {
          apply_estimate(row, sd_wan_s1(s1_data()), false);
        } else if (scenario == Scenario::s2) {
          apply_estimate(row, sd_wan_s2(s2_data()), false);
        } else {
          apply_estimate(row, sd_wan_s3(s3_data()), false);
        }
        break;
      case ConvertMethod::bland: {
        if (scenario != Scenario::s3) {
          outcome.error = "method bland requires the full five-number summary";
          return outcome;
        }
        const FiveNumberSummary s = s3_data();
        apply_estimate(row, mean_bland(s), true);
        apply_estimate(row, sd_bland(s), false);
        break;
      }
      case ConvertMethod::hozo:
        if (scenario == Scenario::s2) {
          outcome.error = "method hozo needs min/median/max";
          return outcome;
        }
        apply_estimate(row, sd_hozo_s1(s1_data()), false);
        break;
      case ConvertMethod::luo:
        if (scenario != Scenario::s3) {
          outcome.error = "method luo requires the full five-number summary";
          return outcome;
        }
        apply_estimate(row, mean_luo(s3_data()), true);
        break;
    }
  } catch (const std::exception& e) {
    outcome.error = e.what();
    return outcome;
  }

  outcome.row = std::move(row);
  return outcome;
}

}  // namespace

ConvertMethod parse_convert_method(std::string_view text) {
  if (text == "auto") return ConvertMethod::auto_select;
  if (text == "shi") return ConvertMethod::shi;
  if (text == "wan") return ConvertMethod::wan;
  if (text == "bland") return ConvertMethod::bland;
  if (text == "hozo") return ConvertMethod::hozo;
  if (text == "luo") return ConvertMethod::luo;
  throw std::invalid_argument("unknown convert method '" + std::string(text) + "'");
}

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::s1: return "S1";
    case Scenario::s2: return "S2";
    case Scenario::s3: return "S3";
  }
  return "?";
}

Scenario parse_scenario(std::string_view text) {
  if (text == "s1" || text == "S1") return Scenario::s1;
  if (text == "s2" || text == "S2") return Scenario::s2;
  if (text == "s3" || text == "S3") return Scenario::s3;
  throw std::invalid_argument("unknown scenario '" + std::string(text) + "'");
}

ConvertResult convert_stream(std::istream& in, ConvertMethod method,
                             std::optional<Scenario> scenario_override) {
  ConvertResult result;
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) return result;  // empty input: header-only output
  ++line_no;
  const std::string header = trim(line);
  const bool has_iqr_column = header == kIqrHeader;
  if (header != kBaseHeader && !has_iqr_column) {
    result.errors.push_back({line_no, "",
                             "malformed header; expected '" + std::string(kBaseHeader) +
                                 "' or '" + std::string(kIqrHeader) + "'"});
    return result;
  }
  const std::size_t expected_fields = has_iqr_column ? 8 : 7;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != expected_fields) {
      result.errors.push_back({line_no, fields.empty() ? "" : fields[0],
                               "expected " + std::to_string(expected_fields) +
                                   " fields but got " + std::to_string(fields.size())});
      continue;
    }

    StudyRecord record;
    record.line = line_no;
    record.study_id = fields[0];
    if (record.study_id.empty()) {
      result.errors.push_back({line_no, "", "empty study_id"});
      continue;
    }
    char* end = nullptr;
    const long n = std::strtol(fields[1].c_str(), &end, 10);
    if (end != fields[1].c_str() + fields[1].size() || n < 1 || n > 1000000000L) {
      result.errors.push_back({line_no, record.study_id,
                               "sample size '" + fields[1] + "' is not a positive integer"});
      continue;
    }
    record.n = static_cast<int>(n);

    std::string parse_error;
    record.a = parse_optional_number(fields[2], "a", &parse_error);
    if (parse_error.empty()) record.q1 = parse_optional_number(fields[3], "q1", &parse_error);
    if (parse_error.empty()) record.m = parse_optional_number(fields[4], "m", &parse_error);
    if (parse_error.empty()) record.q3 = parse_optional_number(fields[5], "q3", &parse_error);
    if (parse_error.empty()) record.b = parse_optional_number(fields[6], "b", &parse_error);
    if (parse_error.empty() && has_iqr_column) {
      record.iqr = parse_optional_number(fields[7], "iqr", &parse_error);
    }
    if (!parse_error.empty()) {
      result.errors.push_back({line_no, record.study_id, parse_error});
      continue;
    }

    RowOutcome outcome = process_record(std::move(record), method, scenario_override);
    if (outcome.row) {
      result.rows.push_back(std::move(*outcome.row));
    } else {
      result.errors.push_back({line_no, fields[0], outcome.error});
    }
  }
  return result;
}

void write_convert_csv(const ConvertResult& result, std::ostream& out) {
  out << "study_id,n,scenario,mean_est,mean_method,sd_est,sd_method,weight_used\n";
  for (const ConvertedRow& r : result.rows) {
    out << r.study_id << ',' << r.n << ',' << to_string(r.scenario) << ',';
    if (r.mean_est) out << format_sig9(*r.mean_est);
    out << ',';
    if (r.mean_method) out << to_string(*r.mean_method);
    out << ',';
    if (r.sd_est) out << format_sig9(*r.sd_est);
    out << ',';
    if (r.sd_method) out << to_string(*r.sd_method);
    out << ',';
    if (r.weight_used) out << format_sig9(*r.weight_used);
    out << '\n';
  }
}

void write_error_sidecar(const ConvertResult& result, std::ostream& out) {
  out << "line,study_id,reason\n";
  for (const RowError& e : result.errors) {
    out << e.line << ',' << e.study_id << ',' << e.reason << '\n';
  }
}

}  // namespace fivenum
