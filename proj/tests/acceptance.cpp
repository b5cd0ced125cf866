// Acceptance suite. Prints one line per criterion and exits non-zero if any
// criterion fails. Thresholds are fixed below; oracles are written here,
// independently of the library code they check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psim/adversary/assignment.hpp"
#include "psim/adversary/linker.hpp"
#include "psim/common/rng.hpp"
#include "psim/engine/scenario.hpp"
#include "psim/engine/simulation.hpp"
#include "psim/engine/summary.hpp"
#include "psim/report/csv.hpp"
#include "psim/report/sweep.hpp"
#include "psim/sba/nrf.hpp"
#include "psim/sba/token.hpp"
#include "psim/strategy/locks.hpp"

namespace {

using namespace psim;
using nlohmann::json;
namespace fs = std::filesystem;

// Pinned tolerances and budgets.
constexpr double kTokenBudgetS = 5.0;
constexpr double kBaselineBudgetS = 1.0;
constexpr double kSymmetricBudgetS = 30.0;
constexpr double kSymmetricTarget = 0.5;
constexpr double kSymmetricTolerance = 0.05;
constexpr double kTieTolerance = 1e-12;  // relative, same as the solver's tie rule
constexpr double kSlack = 1e-9;         // accumulated simulated time

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

engine::ScenarioConfig scenario(const std::string& file) {
  auto loaded = engine::load_scenario_file(std::string(PSIM_SCENARIO_DIR) + "/" + file);
  if (!loaded) throw std::runtime_error(file + ": " + loaded.error().describe());
  return loaded.value();
}

engine::ScenarioConfig scenario_text(const std::string& text) {
  auto loaded = engine::load_scenario_text(text);
  if (!loaded) throw std::runtime_error(loaded.error().describe());
  return loaded.value();
}

std::vector<fs::path> standard_suite() {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(PSIM_SCENARIO_DIR)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- tokens

struct TokenFixture {
  sba::Nrf nrf;
  sba::NfProfile producer;
  sba::TokenVerificationKey key;

  static sba::TokenSigningKey signing_key(sba::SigScheme scheme, Rng& rng) {
    if (scheme == sba::SigScheme::kMacSharedSecret) return sba::TokenSigningKey::mac(rng.bytes(32));
    crypto::Seed seed{};
    auto b = rng.bytes(32);
    std::copy(b.begin(), b.end(), seed.begin());
    return sba::TokenSigningKey::asymmetric(seed);
  }

  TokenFixture(sba::SigScheme scheme, Rng& rng, std::size_t consumers)
      : nrf(sba::NrfConfig{"nrf-0", 300.0,
                           {{sba::NfType::kAmf, sba::NfType::kV2xAf, {"v2x-msg"}}}},
            signing_key(scheme, rng)) {
    producer.nf_instance_id = "v2xaf-0";
    producer.nf_type = sba::NfType::kV2xAf;
    producer.services = {"v2x-msg"};
    nrf.register_nf(producer);
    for (std::size_t i = 0; i < consumers; ++i) {
      sba::NfProfile amf;
      amf.nf_instance_id = "amf-" + std::to_string(i);
      amf.nf_type = sba::NfType::kAmf;
      nrf.register_nf(amf);
    }
    key = nrf.verification_key();
  }
};

Outcome token_mutations() {
  Stopwatch clock;
  Rng rng(2024);
  std::size_t clean = 0, clean_accepted = 0, mutations = 0, rejected = 0;
  for (auto scheme : {sba::SigScheme::kMacSharedSecret, sba::SigScheme::kAsymmetric}) {
    TokenFixture fx(scheme, rng, 4);
    for (int i = 0; i < 100; ++i) {
      double now = 10.0 + i;
      auto token = fx.nrf.request_access_token("amf-" + std::to_string(i % 4), {"v2x-msg"},
                                               sba::NfType::kV2xAf, now);
      if (!token) return {false, "token request denied"};
      ++clean;
      if (sba::verify_access_token(*token, fx.producer, fx.key, "v2x-msg", now + 1.0)) ++clean_accepted;
      for (int m = 0; m < 60; ++m) {
        auto flip = static_cast<std::uint8_t>(1 + rng.next_u64() % 255);
        bool ok = true;
        if (m % 3 == 2) {
          // Mutate the serialized form.
          std::string compact = token->to_compact();
          compact[rng.next_u64() % compact.size()] ^= static_cast<char>(flip);
          auto parsed = sba::AccessToken::from_compact(compact);
          ok = parsed && sba::verify_access_token(*parsed, fx.producer, fx.key, "v2x-msg", now + 1.0);
        } else {
          sba::AccessToken t = *token;
          Bytes& target = (m % 3 == 0) ? t.claims_bytes : t.signature;
          target[rng.next_u64() % target.size()] ^= flip;
          ok = static_cast<bool>(sba::verify_access_token(t, fx.producer, fx.key, "v2x-msg", now + 1.0));
        }
        ++mutations;
        if (!ok) ++rejected;
      }
    }
  }
  double s = clock.seconds();
  bool pass = mutations >= 10000 && rejected == mutations && clean_accepted == clean && s < kTokenBudgetS;
  return {pass, std::to_string(rejected) + "/" + std::to_string(mutations) + " mutations rejected, " +
                    std::to_string(clean_accepted) + "/" + std::to_string(clean) +
                    " clean accepted, " + fmt(s, 3) + " s"};
}

Outcome claim_schema() {
  Rng rng(77);
  std::size_t issued = 0, violations = 0;
  const std::set<std::string> required = {"iss", "sub", "aud", "scope", "exp"};
  for (auto scheme : {sba::SigScheme::kMacSharedSecret, sba::SigScheme::kAsymmetric}) {
    TokenFixture fx(scheme, rng, 7);
    for (int i = 0; i < 500; ++i) {
      double now = rng.uniform(0.0, 1e5);
      std::string consumer = "amf-" + std::to_string(i % 7);
      auto token = fx.nrf.request_access_token(consumer, {"v2x-msg"}, sba::NfType::kV2xAf, now);
      if (!token) {
        ++violations;
        continue;
      }
      ++issued;
      json doc = json::parse(token->claims_bytes.begin(), token->claims_bytes.end(), nullptr, false);
      bool ok = doc.is_object() && doc.size() == required.size();
      if (ok) {
        for (const auto& k : required) ok = ok && doc.contains(k);
      }
      ok = ok && doc["iss"].is_string() && doc["iss"] == fx.nrf.instance_id();
      ok = ok && doc["sub"].is_string() && doc["sub"] == consumer;
      ok = ok && doc["aud"].is_string() && doc["aud"] == "V2X_AF";
      ok = ok && doc["scope"].is_string() && doc["scope"] == "v2x-msg";
      ok = ok && doc["exp"].is_number() && std::abs(doc["exp"].get<double>() - (now + 300.0)) < 1e-6;
      if (!ok) ++violations;
    }
  }
  return {issued == 1000 && violations == 0,
          std::to_string(issued) + " issued, " + std::to_string(violations) + " schema violations"};
}

// -------------------------------------------------------------- baseline

Outcome baseline() {
  Stopwatch clock;
  auto cfg = scenario("baseline_single.json");
  engine::Simulation sim(cfg);
  sim.run();
  auto out = sim.analyze();
  double s = clock.seconds();
  bool shape = cfg.silence_s == 0.0 && cfg.adversary.coverage.full &&
               std::holds_alternative<strategy::PeriodicPolicy>(cfg.policy);
  bool pass = shape && out.score.transitions > 0 && out.score.link_accuracy == 1.0 &&
              out.score.traceability == 1.0 && s < kBaselineBudgetS;
  return {pass, "link_accuracy " + fmt(out.score.link_accuracy) + ", traceability " +
                    fmt(out.score.traceability) + " over " + std::to_string(out.score.transitions) +
                    " transitions, " + fmt(s, 3) + " s"};
}

// ------------------------------------------------- assignment oracle

// Normalised squared prediction error, written out from the motion model.
double oracle_link_cost(const adversary::Tracklet& e, const adversary::Tracklet& s,
                        const adversary::MotionModel& m) {
  double gap = s.first_t - e.last_t;
  if (gap <= kSlack || gap > m.max_gap_s + kSlack) return std::numeric_limits<double>::infinity();
  double px = e.last_position.x + e.last_velocity.x * gap;
  double py = e.last_position.y + e.last_velocity.y * gap;
  double dx = px - s.first_position.x, dy = py - s.first_position.y;
  double sigma = m.sigma0_m + m.beta_mps * gap;
  return (dx * dx + dy * dy) / (sigma * sigma);
}

struct OracleMatch {
  double min_cost = std::numeric_limits<double>::infinity();
  std::vector<int> choice;  // column per row, -1 unmatched; lexicographic first optimum
};

// All partial injections rows -> columns. Each row tries columns in
// ascending order, then "unmatched"; cost summed rows first, then columns
// left unmatched.
OracleMatch exhaustive_oracle(const std::vector<std::vector<double>>& cost, double no_match) {
  std::size_t rows = cost.size(), cols = rows ? cost[0].size() : 0;
  std::vector<std::pair<double, std::vector<int>>> all;
  std::vector<int> pick(rows, -1);
  std::vector<bool> taken(cols, false);
  std::function<void(std::size_t)> walk = [&](std::size_t r) {
    if (r == rows) {
      double total = 0.0;
      for (std::size_t i = 0; i < rows; ++i) total += pick[i] < 0 ? no_match : cost[i][pick[i]];
      for (std::size_t j = 0; j < cols; ++j) {
        if (!taken[j]) total += no_match;
      }
      all.emplace_back(total, pick);
      return;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (taken[j] || !std::isfinite(cost[r][j])) continue;
      taken[j] = true;
      pick[r] = static_cast<int>(j);
      walk(r + 1);
      taken[j] = false;
    }
    pick[r] = -1;
    walk(r + 1);
  };
  walk(0);
  OracleMatch best;
  for (const auto& [c, p] : all) best.min_cost = std::min(best.min_cost, c);
  double band = kTieTolerance * std::max(1.0, std::abs(best.min_cost));
  for (const auto& [c, p] : all) {
    if (c <= best.min_cost + band) {
      best.choice = p;
      break;
    }
  }
  return best;
}

// -------------------------------------------------------- symmetric

struct SymmetricRun {
  double accuracy = 1.0;
  std::size_t transitions = 0;
  bool oracle_agrees = true;
  std::string disagreement;
};

SymmetricRun symmetric_run(const engine::ScenarioConfig& cfg) {
  engine::Simulation sim(cfg);
  sim.run();
  auto out = sim.analyze();
  SymmetricRun r;
  const auto& model = cfg.adversary.linker.motion;
  std::map<beaconing::StationId, const adversary::Tracklet*> by_id;
  for (const auto& t : out.tracklets) by_id[t.station_id] = &t;

  // Every gap the linker solved, re-derived from tracklets and re-solved.
  for (const auto& gap : out.linkage.gaps) {
    std::vector<std::vector<double>> cost;
    for (const auto& e : gap.ends) {
      std::vector<double> row;
      for (const auto& s : gap.starts) {
        double c = oracle_link_cost(*by_id.at(e), *by_id.at(s), model);
        row.push_back(c > 2.0 * model.no_match_cost ? std::numeric_limits<double>::infinity() : c);
      }
      cost.push_back(row);
    }
    auto oracle = exhaustive_oracle(cost, model.no_match_cost);
    for (std::size_t i = 0; i < gap.ends.size(); ++i) {
      int mine = gap.end_to_start[i] ? static_cast<int>(*gap.end_to_start[i]) : -1;
      if (mine != oracle.choice[i]) {
        r.oracle_agrees = false;
        r.disagreement = "assignment differs from oracle";
      }
    }
    if (std::abs(gap.total_cost - oracle.min_cost) >
        kTieTolerance * std::max(1.0, oracle.min_cost)) {
      r.oracle_agrees = false;
      r.disagreement = "cost " + fmt(gap.total_cost, 17) + " vs oracle " + fmt(oracle.min_cost, 17);
    }
  }

  // Accuracy from ground truth and the linker's successor map.
  auto successors = out.linkage.successors();
  std::size_t correct = 0;
  for (const auto& ch : sim.ledger().changes()) {
    if (ch.startup || !ch.old_cam) continue;
    if (!by_id.count(*ch.old_cam) || !by_id.count(ch.new_cam)) continue;
    ++r.transitions;
    auto it = successors.find(*ch.old_cam);
    if (it != successors.end() && it->second == ch.new_cam) ++correct;
  }
  r.accuracy = r.transitions ? static_cast<double>(correct) / r.transitions : 1.0;
  if (r.accuracy != out.score.link_accuracy) {
    r.oracle_agrees = false;
    r.disagreement = "score " + fmt(out.score.link_accuracy) + " vs oracle " + fmt(r.accuracy);
  }
  return r;
}

Outcome symmetric_confusion() {
  Stopwatch clock;
  auto cfg = scenario("symmetric_crossing.json");
  if (cfg.silence_s < 2.0 ||
      !std::holds_alternative<strategy::SynchronizedPolicy>(cfg.policy) || cfg.vehicles.size() != 2) {
    return {false, "scenario is not a synchronized two-vehicle crossing with silence >= 2 s"};
  }
  double sum = 0.0;
  std::size_t runs = 0, disagreements = 0, without_transition = 0;
  std::string first_issue;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    cfg.seed = seed;
    auto r = symmetric_run(cfg);
    sum += r.accuracy;
    ++runs;
    if (r.transitions == 0) ++without_transition;
    if (!r.oracle_agrees) {
      ++disagreements;
      if (first_issue.empty()) first_issue = "seed " + std::to_string(seed) + ": " + r.disagreement;
    }
  }
  double mean = sum / runs;
  double s = clock.seconds();
  bool pass = std::abs(mean - kSymmetricTarget) <= kSymmetricTolerance && disagreements == 0 &&
              without_transition == 0 && s < kSymmetricBudgetS;
  std::string detail = "mean link_accuracy " + fmt(mean) + " over " + std::to_string(runs) +
                       " seeds, " + std::to_string(disagreements) + " oracle disagreements, " +
                       fmt(s, 3) + " s";
  if (!first_issue.empty()) detail += " (" + first_issue + ")";
  return {pass, detail};
}

// ---------------------------------------------------------- sweeps

report::SweepSpec sweep_spec(const std::string& file) {
  auto spec = report::load_sweep_file(std::string(PSIM_SCENARIO_DIR) + "/sweeps/" + file);
  if (!spec) throw std::runtime_error("cannot load sweep " + file);
  return spec.value();
}

Outcome silence_monotonicity() {
  auto spec = sweep_spec("silence_sweep.json");
  if (spec.axes.size() != 1 || spec.axes[0].path != "silence_s") return {false, "unexpected sweep axes"};
  auto result = report::run_sweep(spec, 1);
  if (!result.all_ok()) return {false, "a sweep run failed"};
  std::map<std::size_t, std::pair<double, std::size_t>> per_cell;
  for (const auto& run : result.runs) {
    auto& cell = per_cell[run.cell];
    cell.first += run.summary->at("privacy").at("link_accuracy").get<double>();
    ++cell.second;
  }
  std::vector<double> silence, means;
  for (std::size_t c = 0; c < spec.axes[0].values.size(); ++c) {
    silence.push_back(spec.axes[0].values[c].get<double>());
    means.push_back(per_cell[c].first / per_cell[c].second);
  }
  bool pass = std::is_sorted(silence.begin(), silence.end());
  std::string detail;
  for (std::size_t c = 0; c < means.size(); ++c) {
    if (c > 0 && means[c] > means[c - 1]) pass = false;
    detail += (c ? ", " : "") + fmt(silence[c]) + " s -> " + fmt(means[c]);
  }
  return {pass, "mean link_accuracy " + detail};
}

// ------------------------------------------------------------- locks

Outcome lock_fuzz() {
  Rng rng(9001);
  const strategy::LockLimits limits{};
  const std::vector<std::string> apps = {"a", "b", "c", "d"};
  std::size_t requests = 0, grants = 0, violations = 0;
  const double tick = 0.05;
  for (int vehicle = 0; vehicle < 100; ++vehicle) {
    strategy::LockState state(limits);
    std::vector<strategy::Lock> granted;
    double pseudonym_until = rng.uniform(100.0, 2000.0);
    for (std::int64_t k = 0; requests < static_cast<std::size_t>(vehicle + 1) * 1000; ++k) {
      double now = k * tick;
      if (now >= pseudonym_until) pseudonym_until = now + rng.uniform(10.0, 2000.0);
      int attempts = rng.bernoulli(0.01) ? 1 + static_cast<int>(rng.next_u64() % 3) : 0;
      for (int a = 0; a < attempts; ++a) {
        double duration = rng.uniform(-20.0, 320.0);
        const auto& app = apps[rng.next_u64() % apps.size()];
        bool approve = rng.bernoulli(0.8);
        auto validator = [approve](std::string_view, double) { return approve; };
        auto lock = strategy::request_lock(state, app, duration, now, pseudonym_until, validator);
        ++requests;
        if (!lock) continue;
        ++grants;
        if (lock->expires_at - lock->granted_at > limits.max_single_s + kSlack) ++violations;
        if (lock->expires_at > pseudonym_until + kSlack) ++violations;
        if (lock->granted_at < now - kSlack || lock->expires_at <= lock->granted_at) ++violations;
        granted.push_back(*lock);
      }
      state.end_tick(now);
    }
    // Continuous locked spans: union of granted intervals, touching merged.
    std::sort(granted.begin(), granted.end(),
              [](const auto& x, const auto& y) { return x.granted_at < y.granted_at; });
    double span_start = 0.0, span_end = -1.0;
    for (const auto& l : granted) {
      if (l.granted_at > span_end + kSlack) {
        span_start = l.granted_at;
        span_end = l.expires_at;
      } else {
        span_end = std::max(span_end, l.expires_at);
      }
      if (span_end - span_start > limits.max_continuous_s + kSlack) {
        ++violations;
        span_end = l.expires_at;  // count each offending grant once
        span_start = l.granted_at;
      }
    }
  }
  bool pass = requests >= 100000 && grants > 0 && violations == 0;
  return {pass, std::to_string(requests) + " requests, " + std::to_string(grants) + " grants, " +
                    std::to_string(violations) + " cap violations"};
}

// ------------------------------------------------- pool floor, Sybil

Outcome pool_floor_and_sybil() {
  std::size_t runs = 0, floor_violations = 0, sybil = 0, audited = 0;
  std::string where;
  for (const auto& path : standard_suite()) {
    auto cfg = scenario(path.filename().string());
    engine::Simulation sim(cfg, {true, true});
    sim.run();
    ++runs;
    for (const auto& t : sim.tick_reports()) {
      if (t.active == 0) continue;
      if (t.min_pool_valid < 2) {
        ++floor_violations;
        if (where.empty()) where = path.filename().string() + " tick " + std::to_string(t.tick);
      }
    }
    // At most one on-air identifier per scope per vehicle per tick.
    std::map<std::tuple<std::int64_t, VehicleId, AppScope>, std::set<beaconing::StationId>> seen;
    for (const auto& rec : sim.trace()) {
      auto tick = static_cast<std::int64_t>(std::llround(rec.t / cfg.tick_s));
      seen[{tick, rec.sender_truth_id, rec.station_id.scope}].insert(rec.station_id);
    }
    for (const auto& [key, ids] : seen) {
      ++audited;
      if (ids.size() > 1) ++sybil;
    }
    floor_violations += sim.invariants().pool_floor_violations;
    sybil += sim.invariants().sybil_violations;
  }
  bool pass = runs > 0 && floor_violations == 0 && sybil == 0;
  std::string detail = std::to_string(runs) + " runs, " + std::to_string(floor_violations) +
                       " floor violations, " + std::to_string(sybil) + " Sybil violations over " +
                       std::to_string(audited) + " (tick, vehicle, scope) emissions";
  if (!where.empty()) detail += ", first at " + where;
  return {pass, detail};
}

// ------------------------------------------------------------- ghosts

Outcome ghost_regression() {
  auto off = scenario("ghost_regression.json");
  auto on = scenario("ghost_regression_notify.json");
  if (off.notify_deactivation || !on.notify_deactivation || on.packet_loss != 0.0 ||
      off.ldm_timeout_s != 1.5 || on.ldm_timeout_s != 1.5 || off.vehicles.size() != 2) {
    return {false, "scenario pair is not the expected regression setup"};
  }
  auto max_ghosts = [](const engine::ScenarioConfig& cfg) {
    engine::Simulation sim(cfg, {false, true});
    sim.run();
    std::size_t m = 0;
    for (const auto& t : sim.tick_reports()) m = std::max(m, t.ghost_total);
    return std::make_pair(m, sim.stats().changes);
  };
  auto [ghosts_off, changes_off] = max_ghosts(off);
  auto [ghosts_on, changes_on] = max_ghosts(on);
  bool pass = changes_off > 0 && changes_on > 0 && ghosts_off >= 1 && ghosts_on == 0;
  return {pass, "max ghosts without notices " + std::to_string(ghosts_off) + ", with notices " +
                    std::to_string(ghosts_on)};
}

// ------------------------------------------------------ stack switch

Outcome stack_switch() {
  auto cfg = scenario("highway_periodic.json");
  cfg.name = "stack_switch";
  cfg.policy = strategy::PeriodicPolicy{4.0};
  cfg.silence_s = 0.0;
  cfg.beacon_hz = 10.0;
  engine::Simulation sim(cfg, {true, false});
  sim.run();
  std::map<beaconing::StationId, std::pair<double, double>> span;  // first, last emission
  for (const auto& rec : sim.trace()) {
    auto [it, fresh] = span.try_emplace(rec.station_id, rec.t, rec.t);
    if (!fresh) it->second.second = rec.t;
  }
  const double limit = 1.0 / cfg.beacon_hz + 0.1 + kSlack;
  std::size_t measured = 0, violations = 0;
  double worst = 0.0;
  for (const auto& ch : sim.ledger().changes()) {
    if (ch.startup || !ch.old_cam) continue;
    auto old_it = span.find(*ch.old_cam);
    auto new_it = span.find(ch.new_cam);
    if (old_it == span.end() || new_it == span.end()) continue;
    double gap = new_it->second.first - old_it->second.second;
    ++measured;
    worst = std::max(worst, gap);
    if (gap > limit) ++violations;
  }
  bool pass = measured >= 1000 && violations == 0 && sim.invariants().stack_switch_violations == 0;
  return {pass, std::to_string(measured) + " changes measured, max gap " + fmt(worst) + " s, " +
                    std::to_string(violations) + " over " + fmt(limit, 3) + " s"};
}

// ------------------------------------------------------ segment trips

Outcome segment_geometry() {
  const std::string base = R"({
    "name": "segment_geometry", "duration_s": 480, "radio_range_m": 300,
    "road": {"segments": [{"id": "long", "start": [0, 0], "end": [9000, 0], "speed_limit_mps": 16.7}]},
    "fleet": {"generate": {"count": 25, "routes": [["long"]], "depart_spacing_s": 4,
                           "speed_mps": 14.0, "speed_jitter_mps": 2.0}},
    "policy": {"kind": "segment"}, "silence_s": 0})";
  auto cfg = scenario_text(base);
  const strategy::SegmentPolicy p{};
  std::size_t trips = 0, seconds = 0, subsequent = 0, violations = 0;
  for (std::uint64_t seed = 1; trips < 1000; ++seed) {
    cfg.seed = seed;
    engine::Simulation sim(cfg);
    sim.run();
    std::map<VehicleId, std::vector<const engine::ChangeEvent*>> per_vehicle;
    for (const auto& ch : sim.ledger().changes()) per_vehicle[ch.vehicle].push_back(&ch);
    for (auto& [v, list] : per_vehicle) {
      std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->t < b->t; });
      if (!list.front()->startup) ++violations;
      ++trips;
      for (std::size_t k = 1; k < list.size(); ++k) {
        const auto& ch = *list[k];
        if (ch.forced || ch.startup) ++violations;
        if (k == 1) {
          ++seconds;
          if (ch.odometer_trip_m < p.second_min_m - kSlack || ch.odometer_trip_m > p.second_max_m + kSlack)
            ++violations;
        } else {
          ++subsequent;
          if (ch.odometer_since_last_m < p.subsequent_min_m - kSlack) ++violations;
          if (ch.elapsed_since_last_s < p.time_min_s - kSlack) ++violations;
          if (!ch.sampled_time_s || *ch.sampled_time_s < p.time_min_s - kSlack ||
              *ch.sampled_time_s > p.time_max_s + kSlack ||
              ch.elapsed_since_last_s < *ch.sampled_time_s - kSlack) {
            ++violations;
          }
        }
      }
    }
  }
  bool pass = trips >= 1000 && seconds > 0 && subsequent > 0 && violations == 0;
  return {pass, std::to_string(trips) + " trips, " + std::to_string(seconds) + " second and " +
                    std::to_string(subsequent) + " subsequent changes, " +
                    std::to_string(violations) + " violations"};
}

// --------------------------------------------------- assignment oracle

Outcome assignment_equivalence() {
  Rng rng(31337);
  const adversary::MotionModel model{};
  std::size_t instances = 0, mismatches = 0, hungarian_mismatches = 0;
  for (int n = 0; n < 600; ++n) {
    std::size_t rows = 1 + rng.next_u64() % 6, cols = 1 + rng.next_u64() % 6;
    std::vector<adversary::Tracklet> ends, starts;
    for (std::size_t i = 0; i < rows; ++i) {
      adversary::Tracklet t;
      t.station_id = {rng.next_u64(), AppScope::kCam};
      t.last_t = 100.0;
      t.last_position = {rng.uniform(0, 60), rng.uniform(0, 10)};
      t.last_velocity = {rng.uniform(5, 15), rng.uniform(-1, 1)};
      ends.push_back(t);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      adversary::Tracklet t;
      t.station_id = {rng.next_u64(), AppScope::kCam};
      t.first_t = 100.0 + rng.uniform(0.1, 4.0);
      t.first_position = {rng.uniform(0, 100), rng.uniform(0, 10)};
      t.first_velocity = {10, 0};
      starts.push_back(t);
    }
    auto gap = adversary::associate_across_gap(ends, starts, model);
    // The linker orders both sides by id; rebuild the oracle in that order.
    std::map<beaconing::StationId, const adversary::Tracklet*> by_id;
    for (const auto& t : ends) by_id[t.station_id] = &t;
    for (const auto& t : starts) by_id[t.station_id] = &t;
    std::vector<std::vector<double>> cost;
    for (const auto& e : gap.ends) {
      std::vector<double> row;
      for (const auto& s : gap.starts) row.push_back(oracle_link_cost(*by_id.at(e), *by_id.at(s), model));
      cost.push_back(row);
    }
    auto oracle = exhaustive_oracle(cost, model.no_match_cost);
    ++instances;
    if (gap.total_cost != oracle.min_cost) ++mismatches;

    adversary::AssignmentProblem problem{cost, model.no_match_cost};
    if (adversary::solve_hungarian(problem).total_cost != oracle.min_cost) ++hungarian_mismatches;
  }
  bool pass = instances >= 500 && mismatches == 0 && hungarian_mismatches == 0;
  return {pass, std::to_string(instances) + " instances, " + std::to_string(mismatches) +
                    " linker and " + std::to_string(hungarian_mismatches) +
                    " Hungarian cost mismatches"};
}

// -------------------------------------------------------- determinism

Outcome determinism() {
  std::size_t files = 0, differing = 0;
  std::string first;
  for (const auto& path : standard_suite()) {
    auto cfg = scenario(path.filename().string());
    auto a = engine::run_scenario(cfg, true);
    auto b = engine::run_scenario(cfg, true);
    ++files;
    bool same = engine::pretty(a.summary) == engine::pretty(b.summary) &&
                engine::pretty(a.ground_truth) == engine::pretty(b.ground_truth) &&
                engine::pretty(a.linkage) == engine::pretty(b.linkage) &&
                a.trace_lines == b.trace_lines;
    if (!same) {
      ++differing;
      if (first.empty()) first = path.filename().string();
    }
  }
  std::size_t sweeps = 0;
  for (const auto& name : {"silence_sweep.json", "policy_sweep.json"}) {
    auto spec = sweep_spec(name);
    auto serial = report::run_sweep(spec, 1);
    auto parallel = report::run_sweep(spec, 8);
    ++sweeps;
    bool same = report::sweep_csv(serial) == report::sweep_csv(parallel);
    for (std::size_t i = 0; same && i < serial.runs.size(); ++i) {
      same = serial.runs[i].summary && parallel.runs[i].summary &&
             engine::pretty(*serial.runs[i].summary) == engine::pretty(*parallel.runs[i].summary);
    }
    if (!same) {
      ++differing;
      if (first.empty()) first = name;
    }
  }
  std::string detail = std::to_string(files) + " scenarios repeated, " + std::to_string(sweeps) +
                       " sweeps at parallelism 1 and 8, " + std::to_string(differing) + " differ";
  if (!first.empty()) detail += " (first: " + first + ")";
  return {files > 0 && differing == 0, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {1, "token mutation rejection", token_mutations},
      {2, "issued claim schema", claim_schema},
      {3, "single vehicle baseline", baseline},
      {4, "symmetric confusion", symmetric_confusion},
      {5, "silence monotonicity", silence_monotonicity},
      {6, "lock caps under fuzzing", lock_fuzz},
      {7, "pool floor and single identity", pool_floor_and_sybil},
      {8, "ghost regression", ghost_regression},
      {9, "stack switch latency", stack_switch},
      {10, "segment policy geometry", segment_geometry},
      {11, "assignment oracle equivalence", assignment_equivalence},
      {12, "determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << (c.number < 10 ? "0" : "") << c.number
              << "] " << c.name << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
