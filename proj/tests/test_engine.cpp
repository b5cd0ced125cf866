#include <gtest/gtest.h>

#include <json.hpp>

#include <map>
#include <set>

#include "psim/adversary/trace_io.hpp"
#include "psim/engine/scenario.hpp"
#include "psim/engine/simulation.hpp"
#include "psim/engine/summary.hpp"

namespace psim::engine {
namespace {

using nlohmann::json;

json minimal() {
  return json::parse(R"({
    "name": "unit",
    "duration_s": 20,
    "road": {"segments": [{"id": "a", "start": [0, 0], "end": [2000, 0], "speed_limit_mps": 13.9}]},
    "fleet": {"vehicles": [{"route": ["a"], "speed_mps": 10},
                           {"route": ["a"], "offset_m": 30, "speed_mps": 10,
                            "quasi_ids": {"length_m": 4.1, "width_m": 1.7}}]},
    "policy": {"kind": "periodic", "interval_s": 5}
  })");
}

ScenarioConfig load_ok(const json& doc) {
  auto r = load_scenario(doc);
  if (!r) ADD_FAILURE() << r.error().describe();
  return r.value();
}

bool rejects(json doc, const std::string& field) {
  auto r = load_scenario(doc);
  if (r) return false;
  for (const auto& v : r.error().violations) {
    if (v.field.find(field) != std::string::npos) return true;
  }
  ADD_FAILURE() << "rejected for another reason: " << r.error().describe();
  return false;
}

// ----------------------------------------------------------- validation

TEST(Scenario, MinimalLoadsWithDefaults) {
  auto c = load_ok(minimal());
  EXPECT_EQ(c.vehicles.size(), 2u);
  EXPECT_DOUBLE_EQ(c.tick_s, 0.05);
  EXPECT_DOUBLE_EQ(c.beacon_hz, 10.0);
  EXPECT_EQ(c.ticks_per_beacon(), 2);
  EXPECT_EQ(c.total_ticks(), 400);
  EXPECT_EQ(c.pool.min_concurrent_valid, 2u);
}

TEST(Scenario, RejectsBeaconRateAboveTenHertz) {
  auto doc = minimal();
  doc["beacon_hz"] = 20;
  EXPECT_TRUE(rejects(doc, "beacon_hz"));
}

TEST(Scenario, RejectsPoolFloorBelowTwo) {
  auto doc = minimal();
  doc["pool"] = {{"min_concurrent_valid", 1}, {"immediate_count", 2}};
  EXPECT_TRUE(rejects(doc, "pool.min_concurrent_valid"));
}

TEST(Scenario, RejectsUnknownFields) {
  auto doc = minimal();
  doc["silence"] = 2;
  EXPECT_TRUE(rejects(doc, "silence"));
  auto nested = minimal();
  nested["fleet"]["vehicles"][0]["colour"] = "red";
  EXPECT_TRUE(rejects(nested, "colour"));
}

TEST(Scenario, RejectsLockCaps) {
  auto doc = minimal();
  doc["locks"] = {{"max_single_s", 300}};
  EXPECT_TRUE(rejects(doc, "locks.max_single_s"));
  auto cumulative = minimal();
  cumulative["locks"] = {{"max_continuous_s", 901}};
  EXPECT_TRUE(rejects(cumulative, "locks.max_continuous_s"));
  auto event = minimal();
  event["locks"] = {{"events", {{{"vehicle", 0}, {"at_s", 1}, {"duration_s", 256}}}}};
  EXPECT_TRUE(rejects(event, "locks.events[0].duration_s"));
}

TEST(Scenario, RejectsOtherBadInput) {
  auto tick = minimal();
  tick["tick_s"] = 0.03;
  EXPECT_TRUE(rejects(tick, "tick_s"));
  auto route = minimal();
  route["fleet"]["vehicles"][0]["route"] = {"nowhere"};
  EXPECT_TRUE(rejects(route, "fleet.vehicles[0].route"));
  auto reuse = minimal();
  reuse["pool"] = {{"selection", "no_reuse"}, {"reuse_allowed", true}};
  EXPECT_TRUE(rejects(reuse, "pool.reuse_allowed"));
  auto kind = minimal();
  kind["policy"] = {{"kind", "random"}};
  EXPECT_TRUE(rejects(kind, "policy"));
  auto vehicle = minimal();
  vehicle["denm_events"] = {{{"vehicle", 5}, {"at_s", 1}}};
  EXPECT_TRUE(rejects(vehicle, "denm_events[0].vehicle"));
  auto cap = minimal();
  cap["pool"] = {{"size", 200}};
  EXPECT_TRUE(rejects(cap, "pool.size"));
}

TEST(Scenario, ParseAndIoErrorsAreDistinct) {
  auto parse = load_scenario_text("{not json");
  ASSERT_FALSE(parse);
  EXPECT_EQ(parse.error().kind, LoadError::Kind::kParse);
  auto io = load_scenario_file("/nonexistent/scenario.json");
  ASSERT_FALSE(io);
  EXPECT_EQ(io.error().kind, LoadError::Kind::kIo);
}

TEST(Scenario, CanonicalJsonRoundTrips) {
  auto c = load_ok(minimal());
  auto again = load_ok(c.to_json());
  EXPECT_EQ(c.to_json().dump(), again.to_json().dump());
  EXPECT_EQ(c.digest(), again.digest());
  EXPECT_EQ(c.digest().size(), 64u);
  auto other = minimal();
  other["seed"] = 2;
  EXPECT_NE(load_ok(other).digest(), c.digest());
}

TEST(Scenario, GeneratedFleet) {
  auto doc = minimal();
  doc["fleet"] = json::parse(R"({"generate": {"count": 5, "routes": [["a"]], "depart_spacing_s": 2,
                                 "speed_mps": 10, "speed_jitter_mps": 1}})");
  auto c = load_ok(doc);
  EXPECT_EQ(c.generator.count, 5u);
  Simulation sim(c);
  sim.run();
  std::set<VehicleId> changed;
  for (const auto& ch : sim.ledger().changes()) changed.insert(ch.vehicle);
  EXPECT_EQ(changed.size(), 5u);
}

// ---------------------------------------------------------------- runs

TEST(Simulation, RunsExactlyTheConfiguredTicks) {
  auto c = load_ok(minimal());
  Simulation sim(c);
  std::int64_t steps = 0;
  while (sim.step()) ++steps;
  EXPECT_EQ(steps, c.total_ticks());
  EXPECT_EQ(sim.stats().ticks, static_cast<std::uint64_t>(c.total_ticks()));
  EXPECT_FALSE(sim.step());
}

TEST(Simulation, SameSeedSameBytes) {
  auto c = load_ok(minimal());
  c.silence_s = 1;
  c.positioning_sigma_m = 0.5;
  c.packet_loss = 0.1;
  auto a = run_scenario(c, true);
  auto b = run_scenario(c, true);
  EXPECT_EQ(pretty(a.summary), pretty(b.summary));
  EXPECT_EQ(pretty(a.ground_truth), pretty(b.ground_truth));
  EXPECT_EQ(a.trace_lines, b.trace_lines);
  c.seed = 99;
  auto d = run_scenario(c, true);
  EXPECT_NE(a.trace_lines, d.trace_lines);
}

TEST(Simulation, ChangesFollowPeriodicSchedule) {
  auto c = load_ok(minimal());
  Simulation sim(c);
  sim.run();
  std::map<VehicleId, std::vector<double>> times;
  for (const auto& ch : sim.ledger().changes()) times[ch.vehicle].push_back(ch.t);
  for (const auto& [v, ts] : times) {
    ASSERT_EQ(ts.size(), 4u);  // 0, 5, 10, 15 within 20 s
    for (std::size_t k = 0; k < ts.size(); ++k) EXPECT_NEAR(ts[k], 5.0 * k, 1e-9);
  }
  EXPECT_EQ(sim.stats().changes, 6u);
  EXPECT_EQ(sim.stats().startup_changes, 2u);
}

TEST(Simulation, SilenceMeansNoBeaconsAndSingleIdentity) {
  auto c = load_ok(minimal());
  c.silence_s = 2;
  Simulation sim(c, {true, true});
  sim.run();
  std::map<VehicleId, std::vector<std::pair<double, double>>> silent;
  for (const auto& ch : sim.ledger().changes()) {
    if (!ch.startup) silent[ch.vehicle].push_back({ch.t, ch.silence_until});
  }
  std::map<std::pair<std::int64_t, VehicleId>, std::set<beaconing::StationId>> per_tick;
  for (const auto& rec : sim.trace()) {
    for (const auto& [from, until] : silent[rec.sender_truth_id]) {
      EXPECT_FALSE(rec.t >= from - 1e-9 && rec.t < until - 1e-9)
          << "vehicle " << rec.sender_truth_id << " emitted at " << rec.t;
    }
    per_tick[{std::llround(rec.t / c.tick_s), rec.sender_truth_id}].insert(rec.station_id);
  }
  for (const auto& [key, ids] : per_tick) EXPECT_LE(ids.size(), 2u);  // one CAM and one DENM id at most
  EXPECT_EQ(sim.invariants().total(), 0u);
  for (const auto& t : sim.tick_reports()) {
    if (t.active > 0) EXPECT_GE(t.min_pool_valid, 2u);
  }
}

TEST(Simulation, TraceCarriesNoSubscriberIdentity) {
  auto c = load_ok(minimal());
  Simulation sim(c, {true, false});
  sim.run();
  std::vector<std::string> secrets;
  for (const auto& [ec, supi_hash] : sim.core().ea().ledger()) {
    secrets.push_back(supi_hash);
    secrets.push_back(ec);
  }
  ASSERT_FALSE(secrets.empty());
  const std::set<std::string> allowed = {"t", "sender_truth_id", "station_id", "scope",
                                         "x", "y", "vx", "vy", "quasi_ids"};
  for (const auto& rec : sim.trace()) {
    std::string line = adversary::trace_line(rec);
    for (const auto& s : secrets) EXPECT_EQ(line.find(s), std::string::npos);
    json doc = json::parse(line);
    for (const auto& [k, v] : doc.items()) EXPECT_TRUE(allowed.count(k)) << k;
  }
  auto summary = make_run_summary(sim, sim.analyze()).dump();
  for (const auto& s : secrets) EXPECT_EQ(summary.find(s), std::string::npos);
}

TEST(Simulation, TraceRoundTripsIntoSameLinkage) {
  auto c = load_ok(minimal());
  c.silence_s = 1;
  auto art = run_scenario(c, true);
  std::string text;
  for (const auto& l : art.trace_lines) text += l + "\n";
  std::stringstream in(text);
  auto store = adversary::load_trace(in);
  ASSERT_TRUE(store);
  auto linkage = adversary::link(*store, c.adversary.linker);
  EXPECT_EQ(linkage.to_json().dump(), art.linkage.dump());
}

TEST(Simulation, LockDefersChange) {
  auto doc = minimal();
  doc["locks"] = {{"events", {{{"vehicle", 0}, {"app_id", "x"}, {"at_s", 4}, {"duration_s", 3}}}}};
  auto c = load_ok(doc);
  Simulation sim(c);
  sim.run();
  std::vector<double> times;
  for (const auto& ch : sim.ledger().changes()) {
    if (ch.vehicle == 0) times.push_back(ch.t);
  }
  ASSERT_GE(times.size(), 2u);
  EXPECT_NEAR(times[1], 7.0, 1e-9);  // due at 5, locked until 7
  EXPECT_GT(sim.stats().deferred_by_lock, 0u);
  EXPECT_EQ(sim.stats().lock_grants, 1u);
}

TEST(Simulation, NoticesPreventGhosts) {
  auto doc = minimal();
  doc["notify_deactivation"] = true;
  Simulation on(load_ok(doc), {false, true});
  on.run();
  doc["notify_deactivation"] = false;
  Simulation off(load_ok(doc), {false, true});
  off.run();
  EXPECT_EQ(on.stats().ghost_count_max, 0u);
  EXPECT_GT(off.stats().ghost_count_max, 0u);
  EXPECT_GT(on.stats().notices_emitted, 0u);
}

TEST(Simulation, StandardScenariosHoldInvariants) {
  for (const char* name : {"baseline_single", "ghost_regression", "network_triggered", "lock_abuse"}) {
    auto c = load_scenario_file(std::string(PSIM_SCENARIO_DIR) + "/" + name + ".json");
    ASSERT_TRUE(c) << name;
    Simulation sim(*c);
    sim.run();
    EXPECT_EQ(sim.invariants().total(), 0u) << name;
  }
}

TEST(Simulation, NetworkTriggeredRespectsSilentFraction) {
  auto c = load_scenario_file(std::string(PSIM_SCENARIO_DIR) + "/network_triggered.json");
  ASSERT_TRUE(c);
  Simulation sim(*c, {false, true});
  sim.run();
  EXPECT_GT(sim.stats().coordinator_commands, 0u);
  for (const auto& t : sim.tick_reports()) {
    if (t.active > 0) {
      EXPECT_LE(static_cast<double>(t.silent), c->max_silent_fraction * t.active + 1e-9) << t.tick;
    }
  }
}

TEST(Simulation, StarvationIsReported) {
  auto c = load_scenario_file(std::string(PSIM_SCENARIO_DIR) + "/extra/pool_starvation.json");
  ASSERT_TRUE(c);
  Simulation sim(*c);
  sim.run();
  EXPECT_GT(sim.stats().starved_emissions, 0u);
  EXPECT_GT(sim.invariants().pool_floor_violations, 0u);
}

}  // namespace
}  // namespace psim::engine
