#include "psim/engine/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "psim/common/crypto.hpp"

namespace psim::engine {

using nlohmann::json;

namespace {

// Reads one JSON object, tracking which keys were consumed so that
// leftovers can be reported as unknown fields.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<Violation>& out)
      : obj_(obj), path_(std::move(path)), out_(out) {
    if (!obj_.is_object()) fail("", "must be an object");
  }

  bool has(const std::string& key) const { return obj_.is_object() && obj_.contains(key); }

  const json* child(const std::string& key) {
    if (!has(key)) return nullptr;
    seen_.insert(key);
    return &obj_.at(key);
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void fail(const std::string& key, const std::string& what) {
    out_.push_back({key.empty() ? path_ : field(key), what});
  }

  void number(const std::string& key, double& target) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_number()) return fail(key, "must be a number");
    target = v->get<double>();
  }

  void optional_number(const std::string& key, std::optional<double>& target) {
    const json* v = child(key);
    if (!v || v->is_null()) return;  // null means unset
    if (!v->is_number()) return fail(key, "must be a number");
    target = v->get<double>();
  }

  template <typename U>
  void unsigned_int(const std::string& key, U& target) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_number_unsigned() &&
        !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      return fail(key, "must be a non-negative integer");
    }
    target = static_cast<U>(v->get<std::uint64_t>());
  }

  void boolean(const std::string& key, bool& target) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_boolean()) return fail(key, "must be a boolean");
    target = v->get<bool>();
  }

  void string(const std::string& key, std::string& target) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_string()) return fail(key, "must be a string");
    target = v->get<std::string>();
  }

  void point(const std::string& key, Vec2& target) {
    const json* v = child(key);
    if (!v) return;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      return fail(key, "must be [x, y]");
    }
    target = {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  void finish() {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) fail(key, "unknown field");
    }
  }

  std::vector<Violation>& out() { return out_; }

 private:
  const json& obj_;
  std::string path_;
  std::vector<Violation>& out_;
  std::set<std::string> seen_;
};

template <typename F>
void each(Reader& parent, const std::string& key, F&& f) {
  const json* v = parent.child(key);
  if (!v) return;
  if (!v->is_array()) return parent.fail(key, "must be an array");
  for (std::size_t i = 0; i < v->size(); ++i) {
    f((*v)[i], parent.field(key) + "[" + std::to_string(i) + "]");
  }
}

void read_strings(const json& v, const std::string& path, std::vector<std::string>& out,
                  std::vector<Violation>& violations) {
  if (!v.is_array()) {
    violations.push_back({path, "must be an array of strings"});
    return;
  }
  for (const auto& s : v) {
    if (!s.is_string()) {
      violations.push_back({path, "must be an array of strings"});
      return;
    }
    out.push_back(s.get<std::string>());
  }
}

void read_quasi(Reader& r, const std::string& key, beaconing::QuasiIds& q) {
  const json* v = r.child(key);
  if (!v) return;
  Reader qr(*v, r.field(key), r.out());
  qr.number("length_m", q.vehicle_length_m);
  qr.number("width_m", q.vehicle_width_m);
  qr.finish();
}

void read_intervals(Reader& r, const std::string& key, std::vector<Interval>& out) {
  const json* v = r.child(key);
  if (!v) return;
  bool ok = v->is_array();
  if (ok) {
    for (const auto& e : *v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        ok = false;
        break;
      }
      out.push_back({e[0].get<double>(), e[1].get<double>()});
    }
  }
  if (!ok) r.fail(key, "must be a list of [start_s, end_s]");
}

void read_policy(Reader& root, ScenarioConfig& cfg) {
  const json* v = root.child("policy");
  if (!v) return;
  Reader r(*v, "policy", root.out());
  std::string kind = "periodic";
  r.string("kind", kind);
  if (kind == "periodic") {
    strategy::PeriodicPolicy p;
    r.number("interval_s", p.interval_s);
    cfg.policy = p;
  } else if (kind == "segment") {
    strategy::SegmentPolicy p;
    r.number("second_min_m", p.second_min_m);
    r.number("second_max_m", p.second_max_m);
    r.number("subsequent_min_m", p.subsequent_min_m);
    r.number("time_min_s", p.time_min_s);
    r.number("time_max_s", p.time_max_s);
    cfg.policy = p;
  } else if (kind == "synchronized") {
    strategy::SynchronizedPolicy p;
    r.number("interval_s", p.interval_s);
    r.number("window_s", p.window_s);
    cfg.policy = p;
  } else if (kind == "network_triggered") {
    strategy::NetworkTriggeredPolicy p;
    r.number("interval_s", p.interval_s);
    r.number("coordination_period_s", p.coordination_period_s);
    cfg.policy = p;
  } else {
    r.fail("kind", "must be periodic, segment, synchronized or network_triggered");
  }
  r.finish();
}

void read_pool(Reader& root, ScenarioConfig& cfg) {
  const json* v = root.child("pool");
  if (!v) return;
  Reader r(*v, "pool", root.out());
  auto& p = cfg.pool;
  r.unsigned_int("size", p.size);
  r.unsigned_int("min_concurrent_valid", p.min_concurrent_valid);
  std::string selection(strategy::to_string(p.selection));
  r.string("selection", selection);
  if (auto s = strategy::parse_selection(selection)) {
    p.selection = *s;
  } else {
    r.fail("selection", "must be round_robin or no_reuse");
  }
  p.reuse_allowed = p.selection == strategy::Selection::kRoundRobin;
  r.boolean("reuse_allowed", p.reuse_allowed);
  r.number("validity_s", p.schedule.validity_s);
  r.number("stagger_s", p.schedule.stagger_s);
  r.unsigned_int("immediate_count", p.schedule.immediate_count);
  r.number("replenish_lead_s", p.replenish_lead_s);
  r.finish();
}

void read_locks(Reader& root, ScenarioConfig& cfg) {
  const json* v = root.child("locks");
  if (!v) return;
  Reader r(*v, "locks", root.out());
  r.number("max_single_s", cfg.lock_limits.max_single_s);
  r.number("max_continuous_s", cfg.lock_limits.max_continuous_s);
  r.unsigned_int("renewal_threshold", cfg.lock_limits.renewal_threshold);
  each(r, "events", [&](const json& e, const std::string& path) {
    Reader er(e, path, r.out());
    LockEvent ev;
    er.unsigned_int("vehicle", ev.vehicle);
    er.string("app_id", ev.app_id);
    er.number("at_s", ev.at_s);
    er.number("duration_s", ev.duration_s);
    er.unsigned_int("repeat", ev.repeat);
    er.number("period_s", ev.period_s);
    er.finish();
    cfg.lock_events.push_back(ev);
  });
  r.finish();
}

void read_fleet(Reader& root, ScenarioConfig& cfg) {
  const json* v = root.child("fleet");
  if (!v) return;
  Reader r(*v, "fleet", root.out());
  each(r, "vehicles", [&](const json& e, const std::string& path) {
    Reader vr(e, path, r.out());
    VehicleSpec spec;
    if (const json* route = vr.child("route")) {
      read_strings(*route, vr.field("route"), spec.route, r.out());
    }
    vr.number("depart_s", spec.depart_s);
    vr.number("offset_m", spec.offset_m);
    vr.number("speed_mps", spec.speed_mps);
    vr.number("accel_mps2", spec.accel_mps2);
    vr.optional_number("target_speed_mps", spec.target_speed_mps);
    read_quasi(vr, "quasi_ids", spec.quasi_ids);
    vr.number("clock_skew_s", spec.clock_skew_s);
    read_intervals(vr, "busy_transfer", spec.busy_transfer);
    read_intervals(vr, "safety_critical", spec.safety_critical);
    vr.finish();
    cfg.vehicles.push_back(std::move(spec));
  });
  if (const json* g = r.child("generate")) {
    Reader gr(*g, "fleet.generate", r.out());
    auto& gen = cfg.generator;
    gr.unsigned_int("count", gen.count);
    each(gr, "routes", [&](const json& e, const std::string& path) {
      std::vector<std::string> route;
      read_strings(e, path, route, r.out());
      gen.routes.push_back(std::move(route));
    });
    gr.number("depart_spacing_s", gen.depart_spacing_s);
    gr.number("offset_spacing_m", gen.offset_spacing_m);
    gr.number("speed_mps", gen.speed_mps);
    gr.number("speed_jitter_mps", gen.speed_jitter_mps);
    read_quasi(gr, "quasi_ids", gen.quasi_ids);
    gr.number("quasi_jitter_m", gen.quasi_jitter_m);
    gr.number("clock_skew_max_s", gen.clock_skew_max_s);
    gr.finish();
  }
  r.finish();
}

void read_adversary(Reader& root, ScenarioConfig& cfg) {
  const json* v = root.child("adversary");
  if (!v) return;
  Reader r(*v, "adversary", root.out());
  auto& a = cfg.adversary;
  std::string coverage = "full";
  r.string("coverage", coverage);
  if (coverage == "full") {
    a.coverage.full = true;
  } else if (coverage == "posts") {
    a.coverage.full = false;
  } else {
    r.fail("coverage", "must be full or posts");
  }
  each(r, "posts", [&](const json& e, const std::string& path) {
    Reader pr(e, path, r.out());
    adversary::ListeningPost post;
    pr.point("center", post.center);
    pr.number("radius_m", post.radius_m);
    pr.finish();
    if (post.radius_m <= 0.0) r.out().push_back({path + ".radius_m", "must be > 0"});
    a.coverage.posts.push_back(post);
  });
  r.number("sigma0_m", a.linker.motion.sigma0_m);
  r.number("beta_mps", a.linker.motion.beta_mps);
  r.number("no_match_cost", a.linker.motion.no_match_cost);
  r.number("max_gap_s", a.linker.motion.max_gap_s);
  r.boolean("semantic", a.linker.semantic);
  r.number("semantic_tolerance_m", a.linker.semantic_tolerance_m);
  r.finish();
}

void read_sba(Reader& root, ScenarioConfig& cfg) {
  const json* v = root.child("sba");
  if (!v) return;
  Reader r(*v, "sba", root.out());
  r.number("token_ttl_s", cfg.sba.token_ttl_s);
  r.number("ec_lifetime_s", cfg.sba.ec_lifetime_s);
  std::string scheme(sba::to_string(cfg.sba.sig_scheme));
  r.string("sig_scheme", scheme);
  if (auto s = sba::parse_sig_scheme(scheme)) {
    cfg.sba.sig_scheme = *s;
  } else {
    r.fail("sig_scheme", "must be mac or asymmetric");
  }
  r.unsigned_int("batch_cap", cfg.sba.batch_cap);
  r.finish();
}

void require(std::vector<Violation>& out, bool ok, std::string field, std::string what) {
  if (!ok) out.push_back({std::move(field), std::move(what)});
}

void validate(const ScenarioConfig& c, std::vector<Violation>& out) {
  require(out, c.duration_s > 0.0, "duration_s", "must be > 0");
  require(out, c.tick_s > 0.0, "tick_s", "must be > 0");
  require(out, c.beacon_hz > 0.0 && c.beacon_hz <= 10.0, "beacon_hz",
          "must be in (0, 10]");
  if (c.tick_s > 0.0 && c.beacon_hz > 0.0) {
    double ratio = 1.0 / (c.beacon_hz * c.tick_s);
    require(out, ratio >= 1.0 - 1e-9 && std::abs(ratio - std::round(ratio)) < 1e-6,
            "tick_s", "must divide the beacon period");
  }
  require(out, c.positioning_sigma_m >= 0.0, "positioning_sigma_m", "must be >= 0");
  require(out, c.packet_loss >= 0.0 && c.packet_loss <= 1.0, "packet_loss",
          "must be in [0, 1]");
  require(out, c.radio_range_m > 0.0, "radio_range_m", "must be > 0");
  require(out, c.ldm_timeout_s > 0.0, "ldm_timeout_s", "must be > 0");

  mobility::RoadNetwork road;
  for (std::size_t i = 0; i < c.segments.size(); ++i) {
    if (auto err = road.add_segment(c.segments[i])) {
      out.push_back({"road.segments[" + std::to_string(i) + "]", *err});
    }
  }
  auto check_route = [&](const std::vector<std::string>& route, const std::string& path) {
    std::string err;
    if (route.empty()) {
      out.push_back({path, "must name at least one segment"});
    } else if (!road.resolve_route(route, &err)) {
      out.push_back({path, err});
    }
  };
  for (std::size_t i = 0; i < c.vehicles.size(); ++i) {
    const auto& v = c.vehicles[i];
    std::string p = "fleet.vehicles[" + std::to_string(i) + "]";
    check_route(v.route, p + ".route");
    require(out, v.depart_s >= 0.0, p + ".depart_s", "must be >= 0");
    require(out, v.offset_m >= 0.0, p + ".offset_m", "must be >= 0");
    require(out, v.speed_mps >= 0.0, p + ".speed_mps", "must be >= 0");
    require(out, !v.target_speed_mps || *v.target_speed_mps >= 0.0,
            p + ".target_speed_mps", "must be >= 0");
    require(out, v.quasi_ids.vehicle_length_m > 0.0 && v.quasi_ids.vehicle_width_m > 0.0,
            p + ".quasi_ids", "dimensions must be > 0");
    for (const auto* list : {&v.busy_transfer, &v.safety_critical}) {
      for (const auto& iv : *list) {
        require(out, iv.start_s <= iv.end_s, p, "interval start must not exceed end");
      }
    }
  }
  const auto& g = c.generator;
  if (g.count > 0) {
    require(out, !g.routes.empty(), "fleet.generate.routes", "must not be empty");
    for (std::size_t i = 0; i < g.routes.size(); ++i) {
      check_route(g.routes[i], "fleet.generate.routes[" + std::to_string(i) + "]");
    }
    require(out, g.speed_mps >= g.speed_jitter_mps && g.speed_jitter_mps >= 0.0,
            "fleet.generate.speed_jitter_mps", "must be in [0, speed_mps]");
    require(out, g.quasi_jitter_m >= 0.0, "fleet.generate.quasi_jitter_m", "must be >= 0");
    require(out, g.clock_skew_max_s >= 0.0, "fleet.generate.clock_skew_max_s",
            "must be >= 0");
    require(out, g.depart_spacing_s >= 0.0 && g.offset_spacing_m >= 0.0, "fleet.generate",
            "spacings must be >= 0");
  }
  std::size_t fleet = c.vehicles.size() + g.count;

  if (auto err = strategy::validate_policy(c.policy)) out.push_back({"policy", *err});
  require(out, c.silence_s >= 0.0, "silence_s", "must be >= 0");
  require(out, c.max_silent_fraction >= 0.0 && c.max_silent_fraction <= 1.0,
          "max_silent_fraction", "must be in [0, 1]");

  const auto& p = c.pool;
  require(out, p.min_concurrent_valid >= 2, "pool.min_concurrent_valid", "must be >= 2");
  require(out, p.size >= p.min_concurrent_valid, "pool.size",
          "must be >= min_concurrent_valid");
  require(out, p.size <= c.sba.batch_cap, "pool.size", "must not exceed sba.batch_cap");
  require(out, !(p.selection == strategy::Selection::kNoReuse && p.reuse_allowed),
          "pool.reuse_allowed", "must be false with no_reuse selection");
  require(out, p.schedule.validity_s > 0.0, "pool.validity_s", "must be > 0");
  require(out, p.schedule.stagger_s >= 0.0, "pool.stagger_s", "must be >= 0");
  require(out, p.schedule.immediate_count >= p.min_concurrent_valid,
          "pool.immediate_count", "must be >= min_concurrent_valid");
  require(out, p.replenish_lead_s >= 0.0 && p.replenish_lead_s < p.schedule.validity_s,
          "pool.replenish_lead_s", "must be in [0, validity_s)");

  const auto& l = c.lock_limits;
  require(out, l.max_single_s > 0.0 && l.max_single_s <= 255.0, "locks.max_single_s",
          "must be in (0, 255]");
  require(out, l.max_continuous_s > 0.0 && l.max_continuous_s <= 900.0,
          "locks.max_continuous_s", "must be in (0, 900]");
  for (std::size_t i = 0; i < c.lock_events.size(); ++i) {
    const auto& e = c.lock_events[i];
    std::string path = "locks.events[" + std::to_string(i) + "]";
    require(out, e.vehicle < fleet, path + ".vehicle", "must name a fleet vehicle");
    require(out, e.duration_s > 0.0 && e.duration_s <= l.max_single_s,
            path + ".duration_s", "must be in (0, max_single_s]");
    require(out, e.at_s >= 0.0, path + ".at_s", "must be >= 0");
    require(out, e.repeat >= 1, path + ".repeat", "must be >= 1");
    require(out, e.repeat == 1 || e.period_s > 0.0, path + ".period_s",
            "must be > 0 when repeat > 1");
  }
  for (std::size_t i = 0; i < c.denm_events.size(); ++i) {
    const auto& e = c.denm_events[i];
    std::string path = "denm_events[" + std::to_string(i) + "]";
    require(out, e.vehicle < fleet, path + ".vehicle", "must name a fleet vehicle");
    require(out, e.at_s >= 0.0, path + ".at_s", "must be >= 0");
  }
  for (std::size_t i = 0; i < c.base_stations.size(); ++i) {
    require(out, c.base_stations[i].radius_m > 0.0,
            "base_stations[" + std::to_string(i) + "].radius_m", "must be > 0");
  }
  const auto& m = c.adversary.linker.motion;
  require(out, m.sigma0_m > 0.0, "adversary.sigma0_m", "must be > 0");
  require(out, m.beta_mps >= 0.0, "adversary.beta_mps", "must be >= 0");
  require(out, m.no_match_cost > 0.0, "adversary.no_match_cost", "must be > 0");
  require(out, m.max_gap_s > 0.0, "adversary.max_gap_s", "must be > 0");
  require(out, c.adversary.linker.semantic_tolerance_m >= 0.0,
          "adversary.semantic_tolerance_m", "must be >= 0");
  require(out, c.adversary.coverage.full || !c.adversary.coverage.posts.empty(),
          "adversary.posts", "must not be empty with posts coverage");
  require(out, c.sba.token_ttl_s > 0.0, "sba.token_ttl_s", "must be > 0");
  require(out, c.sba.ec_lifetime_s > 0.0, "sba.ec_lifetime_s", "must be > 0");
  require(out, c.sba.batch_cap >= 1, "sba.batch_cap", "must be >= 1");
}

json quasi_json(const beaconing::QuasiIds& q) {
  return {{"length_m", q.vehicle_length_m}, {"width_m", q.vehicle_width_m}};
}

json intervals_json(const std::vector<Interval>& list) {
  json a = json::array();
  for (const auto& iv : list) a.push_back({iv.start_s, iv.end_s});
  return a;
}

json policy_json(const strategy::ChangePolicy& policy) {
  json j;
  j["kind"] = std::string(strategy::policy_kind(policy));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, strategy::PeriodicPolicy>) {
          j["interval_s"] = p.interval_s;
        } else if constexpr (std::is_same_v<T, strategy::SegmentPolicy>) {
          j["second_min_m"] = p.second_min_m;
          j["second_max_m"] = p.second_max_m;
          j["subsequent_min_m"] = p.subsequent_min_m;
          j["time_min_s"] = p.time_min_s;
          j["time_max_s"] = p.time_max_s;
        } else if constexpr (std::is_same_v<T, strategy::SynchronizedPolicy>) {
          j["interval_s"] = p.interval_s;
          j["window_s"] = p.window_s;
        } else {
          j["interval_s"] = p.interval_s;
          j["coordination_period_s"] = p.coordination_period_s;
        }
      },
      policy);
  return j;
}

}  // namespace

std::int64_t ScenarioConfig::ticks_per_beacon() const {
  return static_cast<std::int64_t>(std::llround(1.0 / (beacon_hz * tick_s)));
}

std::int64_t ScenarioConfig::total_ticks() const {
  return static_cast<std::int64_t>(std::floor(duration_s / tick_s + 1e-9));
}

json ScenarioConfig::to_json() const {
  json j;
  j["name"] = name;
  j["seed"] = seed;
  j["duration_s"] = duration_s;
  j["tick_s"] = tick_s;
  j["beacon_hz"] = beacon_hz;
  j["positioning_sigma_m"] = positioning_sigma_m;
  j["packet_loss"] = packet_loss;
  j["radio_range_m"] = radio_range_m;
  j["ldm_timeout_s"] = ldm_timeout_s;

  json segs = json::array();
  for (const auto& s : segments) {
    segs.push_back({{"id", s.id},
                    {"start", {s.start.x, s.start.y}},
                    {"end", {s.end.x, s.end.y}},
                    {"speed_limit_mps", s.speed_limit_mps}});
  }
  j["road"] = {{"segments", segs}};

  json vs = json::array();
  for (const auto& v : vehicles) {
    json e = {{"route", v.route},
              {"depart_s", v.depart_s},
              {"offset_m", v.offset_m},
              {"speed_mps", v.speed_mps},
              {"accel_mps2", v.accel_mps2},
              {"quasi_ids", quasi_json(v.quasi_ids)},
              {"clock_skew_s", v.clock_skew_s},
              {"busy_transfer", intervals_json(v.busy_transfer)},
              {"safety_critical", intervals_json(v.safety_critical)}};
    e["target_speed_mps"] = v.target_speed_mps ? json(*v.target_speed_mps) : json(nullptr);
    vs.push_back(e);
  }
  const auto& g = generator;
  j["fleet"] = {{"vehicles", vs},
                {"generate",
                 {{"count", g.count},
                  {"routes", g.routes},
                  {"depart_spacing_s", g.depart_spacing_s},
                  {"offset_spacing_m", g.offset_spacing_m},
                  {"speed_mps", g.speed_mps},
                  {"speed_jitter_mps", g.speed_jitter_mps},
                  {"quasi_ids", quasi_json(g.quasi_ids)},
                  {"quasi_jitter_m", g.quasi_jitter_m},
                  {"clock_skew_max_s", g.clock_skew_max_s}}}};
  if (vehicles.empty()) j["fleet"]["vehicles"] = json::array();
  if (g.routes.empty()) j["fleet"]["generate"]["routes"] = json::array();

  j["policy"] = policy_json(policy);
  j["silence_s"] = silence_s;
  j["notify_deactivation"] = notify_deactivation;
  j["max_silent_fraction"] = max_silent_fraction;
  j["pool"] = {{"size", pool.size},
               {"min_concurrent_valid", pool.min_concurrent_valid},
               {"selection", std::string(strategy::to_string(pool.selection))},
               {"reuse_allowed", pool.reuse_allowed},
               {"validity_s", pool.schedule.validity_s},
               {"stagger_s", pool.schedule.stagger_s},
               {"immediate_count", pool.schedule.immediate_count},
               {"replenish_lead_s", pool.replenish_lead_s}};
  json events = json::array();
  for (const auto& e : lock_events) {
    events.push_back({{"vehicle", e.vehicle},
                      {"app_id", e.app_id},
                      {"at_s", e.at_s},
                      {"duration_s", e.duration_s},
                      {"repeat", e.repeat},
                      {"period_s", e.period_s}});
  }
  j["locks"] = {{"max_single_s", lock_limits.max_single_s},
                {"max_continuous_s", lock_limits.max_continuous_s},
                {"renewal_threshold", lock_limits.renewal_threshold},
                {"events", events}};
  json denms = json::array();
  for (const auto& e : denm_events) {
    denms.push_back({{"vehicle", e.vehicle},
                     {"at_s", e.at_s},
                     {"event_type", std::string(beaconing::to_string(e.event_type))}});
  }
  j["denm_events"] = denms;
  json bss = json::array();
  for (const auto& b : base_stations) {
    bss.push_back({{"position", {b.position.x, b.position.y}}, {"radius_m", b.radius_m}});
  }
  j["base_stations"] = bss;
  json posts = json::array();
  for (const auto& p : adversary.coverage.posts) {
    posts.push_back({{"center", {p.center.x, p.center.y}}, {"radius_m", p.radius_m}});
  }
  const auto& m = adversary.linker.motion;
  j["adversary"] = {{"coverage", adversary.coverage.full ? "full" : "posts"},
                    {"posts", posts},
                    {"sigma0_m", m.sigma0_m},
                    {"beta_mps", m.beta_mps},
                    {"no_match_cost", m.no_match_cost},
                    {"max_gap_s", m.max_gap_s},
                    {"semantic", adversary.linker.semantic},
                    {"semantic_tolerance_m", adversary.linker.semantic_tolerance_m}};
  j["sba"] = {{"token_ttl_s", sba.token_ttl_s},
              {"ec_lifetime_s", sba.ec_lifetime_s},
              {"sig_scheme", std::string(sba::to_string(sba.sig_scheme))},
              {"batch_cap", sba.batch_cap}};
  return j;
}

std::string ScenarioConfig::digest() const {
  return hex_encode(crypto::sha256(to_bytes(to_json().dump())));
}

std::string LoadError::describe() const {
  std::ostringstream os;
  if (kind == Kind::kIo) os << "i/o error";
  else if (kind == Kind::kParse) os << "parse error";
  else os << "invalid scenario";
  for (const auto& v : violations) os << "\n  " << v.field << ": " << v.constraint;
  return os.str();
}

Result<ScenarioConfig, LoadError> load_scenario(const json& doc) {
  ScenarioConfig cfg;
  std::vector<Violation> out;
  {
    Reader r(doc, "", out);
    if (!doc.is_object()) return LoadError{LoadError::Kind::kValidation, out};
    r.string("name", cfg.name);
    r.unsigned_int("seed", cfg.seed);
    r.number("duration_s", cfg.duration_s);
    r.number("tick_s", cfg.tick_s);
    r.number("beacon_hz", cfg.beacon_hz);
    r.number("positioning_sigma_m", cfg.positioning_sigma_m);
    r.number("packet_loss", cfg.packet_loss);
    r.number("radio_range_m", cfg.radio_range_m);
    r.number("ldm_timeout_s", cfg.ldm_timeout_s);
    if (const json* road = r.child("road")) {
      Reader rr(*road, "road", out);
      each(rr, "segments", [&](const json& e, const std::string& path) {
        Reader sr(e, path, out);
        mobility::Segment s;
        sr.string("id", s.id);
        sr.point("start", s.start);
        sr.point("end", s.end);
        sr.number("speed_limit_mps", s.speed_limit_mps);
        sr.finish();
        cfg.segments.push_back(s);
      });
      rr.finish();
    }
    read_fleet(r, cfg);
    read_policy(r, cfg);
    r.number("silence_s", cfg.silence_s);
    r.boolean("notify_deactivation", cfg.notify_deactivation);
    r.number("max_silent_fraction", cfg.max_silent_fraction);
    read_pool(r, cfg);
    read_locks(r, cfg);
    each(r, "denm_events", [&](const json& e, const std::string& path) {
      Reader er(e, path, out);
      DenmEvent ev;
      er.unsigned_int("vehicle", ev.vehicle);
      er.number("at_s", ev.at_s);
      std::string type(beaconing::to_string(ev.event_type));
      er.string("event_type", type);
      if (auto t = beaconing::parse_denm_event_type(type)) {
        ev.event_type = *t;
      } else {
        er.fail("event_type", "must be hazard, accident, roadwork or weather");
      }
      er.finish();
      cfg.denm_events.push_back(ev);
    });
    each(r, "base_stations", [&](const json& e, const std::string& path) {
      Reader br(e, path, out);
      BaseStation b;
      br.point("position", b.position);
      br.number("radius_m", b.radius_m);
      br.finish();
      cfg.base_stations.push_back(b);
    });
    read_adversary(r, cfg);
    read_sba(r, cfg);
    r.finish();
  }
  if (out.empty()) validate(cfg, out);
  if (!out.empty()) return LoadError{LoadError::Kind::kValidation, std::move(out)};
  return cfg;
}

Result<ScenarioConfig, LoadError> load_scenario_text(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    return LoadError{LoadError::Kind::kParse, {{"<document>", "not valid JSON"}}};
  }
  return load_scenario(doc);
}

Result<ScenarioConfig, LoadError> load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return LoadError{LoadError::Kind::kIo, {{path, "cannot be read"}}};
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario_text(buf.str());
}

const std::vector<std::string>& policy_fields() {
  static const std::vector<std::string> fields = {
      "name", "policy", "silence_s", "notify_deactivation", "max_silent_fraction", "pool"};
  return fields;
}

}  // namespace psim::engine
