#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace psim::report {

struct MetricColumn {
  std::string name;
  std::string pointer;  // JSON pointer into a run summary
};

/// Fixed metric column set shared by every CSV the tool writes.
const std::vector<MetricColumn>& metric_columns();

std::vector<double> metric_values(const nlohmann::json& summary);

std::string csv_field(std::string_view text);
std::string csv_number(double value);
std::string csv_line(const std::vector<std::string>& fields);

/// Header plus one row for a single run.
std::string run_csv(const nlohmann::json& summary);

double mean(const std::vector<double>& xs);
/// Sample standard deviation; 0 for fewer than two values.
double stddev(const std::vector<double>& xs);

}  // namespace psim::report
