#include "psim/report/csv.hpp"

#include <cmath>
#include <numeric>

#include "psim/sba/identity.hpp"

namespace psim::report {

using nlohmann::json;

const std::vector<MetricColumn>& metric_columns() {
  static const std::vector<MetricColumn> cols = {
      {"link_accuracy", "/privacy/link_accuracy"},
      {"traceability", "/privacy/traceability"},
      {"mean_anonymity_set", "/privacy/mean_anonymity_set"},
      {"mean_awareness", "/safety/mean_awareness"},
      {"min_awareness", "/safety/min_awareness"},
      {"ghost_count_max", "/safety/ghost_count_max"},
      {"ghost_entry_ticks", "/safety/ghost_entry_ticks"},
      {"missing_count_max", "/safety/missing_count_max"},
      {"missing_entry_ticks", "/safety/missing_entry_ticks"},
      {"starved_emissions", "/safety/starved_emissions"},
      {"silence_blind_time_s", "/safety/silence_blind_time_s"},
      {"changes", "/events/changes"},
      {"lock_grants", "/events/lock_grants"},
      {"tokens_issued", "/sba/tokens_issued"},
      {"tokens_denied", "/sba/tokens_denied"},
      {"invariant_violations", "/invariants/total"},
  };
  return cols;
}

std::vector<double> metric_values(const json& summary) {
  std::vector<double> out;
  for (const auto& c : metric_columns()) {
    json::json_pointer ptr(c.pointer);
    out.push_back(summary.contains(ptr) ? summary.at(ptr).get<double>() : 0.0);
  }
  return out;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double value) {
  if (!std::isfinite(value)) return "nan";
  return sba::canonical_number(value);
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

std::string run_csv(const json& summary) {
  std::vector<std::string> header = {"name", "config_digest", "seed", "policy"};
  std::vector<std::string> row = {summary.value("name", ""), summary.value("config_digest", ""),
                                  std::to_string(summary.value("seed", std::uint64_t{0})),
                                  summary.value("policy", "")};
  auto values = metric_values(summary);
  for (std::size_t i = 0; i < values.size(); ++i) {
    header.push_back(metric_columns()[i].name);
    row.push_back(csv_number(values[i]));
  }
  return csv_line(header) + csv_line(row);
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace psim::report
