#include "psim/engine/summary.hpp"

namespace psim::engine {

using nlohmann::json;

json make_run_summary(const Simulation& sim, const AttackOutcome& attack) {
  const auto& cfg = sim.config();
  const auto& s = sim.stats();
  const auto& inv = sim.invariants();
  const auto& score = attack.score;
  auto audit = sim.core().audit();

  json j;
  j["config_digest"] = cfg.digest();
  j["name"] = cfg.name;
  j["seed"] = cfg.seed;
  j["policy"] = std::string(strategy::policy_kind(cfg.policy));
  j["simulated_duration_s"] = static_cast<double>(s.ticks) * cfg.tick_s;
  j["privacy"] = {{"link_accuracy", score.link_accuracy},
                  {"traceability", score.traceability},
                  {"mean_anonymity_set", score.mean_anonymity_set},
                  {"transitions", score.transitions},
                  {"correct_links", score.correct_links},
                  {"wrong_links", score.wrong_links},
                  {"tracklets", attack.tracklets.size()},
                  {"observations", sim.observations().observations().size()},
                  {"notices_heard", sim.observations().notices_heard()}};
  double mean_awareness =
      s.awareness_samples ? s.awareness_sum / static_cast<double>(s.awareness_samples) : 1.0;
  j["safety"] = {{"mean_awareness", mean_awareness},
                 {"min_awareness", s.awareness_min},
                 {"ghost_count_max", s.ghost_count_max},
                 {"ghost_ticks", s.ghost_ticks},
                 {"ghost_entry_ticks", s.ghost_entry_ticks},
                 {"missing_count_max", s.missing_count_max},
                 {"missing_entry_ticks", s.missing_entry_ticks},
                 {"starved_emissions", s.starved_emissions},
                 {"silence_blind_time_s", s.silence_blind_time_s},
                 {"denms_deferred", s.denms_deferred},
                 {"denms_dropped", s.denms_dropped}};
  json denied_by_reason = json::object();
  for (const auto& [k, v] : audit.tokens_denied_by_reason) denied_by_reason[k] = v;
  json verify_by_cause = json::object();
  for (const auto& [k, v] : audit.verification_failures_by_cause) verify_by_cause[k] = v;
  j["sba"] = {{"tokens_issued", audit.tokens_issued},
              {"tokens_denied", audit.tokens_denied},
              {"tokens_denied_by_reason", denied_by_reason},
              {"service_accepts", audit.service_accepts},
              {"service_rejects", audit.service_rejects},
              {"verification_failures_by_cause", verify_by_cause},
              {"enrolments", audit.enrolments},
              {"enrolments_rejected", audit.enrolments_rejected},
              {"ticket_batches", audit.ticket_batches},
              {"tickets_issued", audit.tickets_issued},
              {"provisioning_failures", audit.provisioning_failures}};
  json lock_denials = json::object();
  for (const auto& [k, v] : s.lock_denials) lock_denials[k] = v;
  j["events"] = {{"ticks", s.ticks},
                 {"changes", s.changes},
                 {"startup_changes", s.startup_changes},
                 {"forced_changes", s.forced_changes},
                 {"deferred_by_lock_ticks", s.deferred_by_lock},
                 {"deferred_by_readiness_ticks", s.deferred_by_readiness},
                 {"starvation_deferrals", s.starvation_deferrals},
                 {"cams_emitted", s.cams_emitted},
                 {"denms_emitted", s.denms_emitted},
                 {"notices_emitted", s.notices_emitted},
                 {"deliveries_attempted", s.deliveries_attempted},
                 {"deliveries_lost", s.deliveries_lost},
                 {"trips_completed", s.trips_completed},
                 {"lock_grants", s.lock_grants},
                 {"lock_denials", lock_denials},
                 {"replenish_events", s.replenish_events},
                 {"replenish_failures", s.replenish_failures},
                 {"coordinator_commands", s.coordinator_commands}};
  j["invariants"] = {{"pool_floor_violations", inv.pool_floor_violations},
                     {"sybil_violations", inv.sybil_violations},
                     {"stack_switch_violations", inv.stack_switch_violations},
                     {"stack_switches_measured", inv.stack_switches_measured},
                     {"max_stack_switch_gap_s", inv.max_stack_switch_gap_s},
                     {"silence_violations", inv.silence_violations},
                     {"silent_fraction_violations", inv.silent_fraction_violations},
                     {"lock_cap_violations", inv.lock_cap_violations},
                     {"total", inv.total()}};
  return j;
}

RunArtifacts run_scenario(const ScenarioConfig& config, bool with_trace) {
  Simulation sim(config, {with_trace, false});
  sim.run();
  AttackOutcome attack = sim.analyze();
  RunArtifacts out;
  out.summary = make_run_summary(sim, attack);
  out.ground_truth = sim.ledger().to_json();
  out.linkage = attack.linkage.to_json();
  out.invariants = sim.invariants();
  if (with_trace) {
    out.trace_lines.reserve(sim.trace().size());
    for (const auto& r : sim.trace()) out.trace_lines.push_back(adversary::trace_line(r));
  }
  return out;
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

}  // namespace psim::engine
