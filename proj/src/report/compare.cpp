#include "psim/report/compare.hpp"

#include <atomic>
#include <thread>

#include "psim/engine/summary.hpp"
#include "psim/report/csv.hpp"

namespace psim::report {

using nlohmann::json;

namespace {

json strip_policy(const engine::ScenarioConfig& c) {
  json j = c.to_json();
  for (const auto& f : engine::policy_fields()) j.erase(f);
  return j;
}

}  // namespace

std::optional<std::string> misalignment(const engine::ScenarioConfig& a,
                                        const engine::ScenarioConfig& b) {
  json ja = strip_policy(a), jb = strip_policy(b);
  for (const auto& [key, value] : ja.items()) {
    if (!jb.contains(key) || jb.at(key) != value) return key;
  }
  return std::nullopt;
}

json ComparisonReport::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"label", r.label},
                         {"policy", r.policy},
                         {"run_digests", r.digests},
                         {"link_accuracy_mean", r.link_accuracy_mean},
                         {"link_accuracy_std", r.link_accuracy_std},
                         {"traceability", r.traceability},
                         {"mean_anonymity_set", r.mean_anonymity_set},
                         {"awareness_ratio", r.awareness_ratio},
                         {"ghost_count_max", r.ghost_count_max},
                         {"missing_count_max", r.missing_count_max},
                         {"starved_emissions", r.starved_emissions},
                         {"silence_blind_time_s", r.silence_blind_time_s}});
  }
  return {{"rows", rows_json}};
}

std::string ComparisonReport::to_csv() const {
  std::string out = csv_line({"label", "policy", "link_accuracy_mean", "link_accuracy_std",
                              "traceability", "mean_anonymity_set", "awareness_ratio",
                              "ghost_count_max", "missing_count_max", "starved_emissions",
                              "silence_blind_time_s", "run_digests"});
  for (const auto& r : rows) {
    std::string digests;
    for (const auto& d : r.digests) digests += (digests.empty() ? "" : ";") + d;
    out += csv_line({r.label, r.policy, csv_number(r.link_accuracy_mean),
                     csv_number(r.link_accuracy_std), csv_number(r.traceability),
                     csv_number(r.mean_anonymity_set), csv_number(r.awareness_ratio),
                     csv_number(r.ghost_count_max), csv_number(r.missing_count_max),
                     csv_number(r.starved_emissions), csv_number(r.silence_blind_time_s),
                     digests});
  }
  return out;
}

Result<ComparisonReport, std::string> compare(const std::vector<ComparisonInput>& inputs,
                                              std::size_t replications,
                                              std::size_t parallelism) {
  if (inputs.size() < 2) return std::string("compare needs at least two configs");
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    if (auto field = misalignment(inputs[0].config, inputs[i].config)) {
      return inputs[i].label + " differs from " + inputs[0].label + " in non-policy field '" +
             *field + "'";
    }
  }
  replications = std::max<std::size_t>(1, replications);
  std::size_t n = inputs.size() * replications;
  std::vector<json> summaries(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      engine::ScenarioConfig cfg = inputs[i / replications].config;
      cfg.seed += i % replications;
      summaries[i] = engine::run_scenario(cfg, false).summary;
    }
  };
  std::size_t threads = std::max<std::size_t>(1, std::min(parallelism, n));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ComparisonReport report;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    ComparisonRow row;
    row.label = inputs[k].label;
    row.policy = std::string(strategy::policy_kind(inputs[k].config.policy));
    std::vector<double> acc, trace, anon, aware, ghost, missing, starved, blind;
    for (std::size_t r = 0; r < replications; ++r) {
      const json& s = summaries[k * replications + r];
      row.digests.push_back(s.at("config_digest").get<std::string>());
      acc.push_back(s.at("privacy").at("link_accuracy").get<double>());
      trace.push_back(s.at("privacy").at("traceability").get<double>());
      anon.push_back(s.at("privacy").at("mean_anonymity_set").get<double>());
      aware.push_back(s.at("safety").at("mean_awareness").get<double>());
      ghost.push_back(s.at("safety").at("ghost_count_max").get<double>());
      missing.push_back(s.at("safety").at("missing_count_max").get<double>());
      starved.push_back(s.at("safety").at("starved_emissions").get<double>());
      blind.push_back(s.at("safety").at("silence_blind_time_s").get<double>());
    }
    row.link_accuracy_mean = mean(acc);
    row.link_accuracy_std = stddev(acc);
    row.traceability = mean(trace);
    row.mean_anonymity_set = mean(anon);
    row.awareness_ratio = mean(aware);
    row.ghost_count_max = mean(ghost);
    row.missing_count_max = mean(missing);
    row.starved_emissions = mean(starved);
    row.silence_blind_time_s = mean(blind);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace psim::report
