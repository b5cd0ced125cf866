#include "psim/engine/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "psim/beaconing/ldm.hpp"
#include "psim/strategy/change.hpp"

namespace psim::engine {

using beaconing::StationId;
using nlohmann::json;

void GroundTruthLedger::record_change(const ChangeEvent& event) {
  changes_.push_back(event);
  auto& list = intervals_[event.vehicle];
  for (auto& iv : list) {
    if (!iv.until && ((event.old_cam && iv.id == *event.old_cam) ||
                      (event.old_denm && iv.id == *event.old_denm))) {
      iv.until = event.t;
    }
  }
  list.push_back({event.new_cam, event.t, std::nullopt});
  list.push_back({event.new_denm, event.t, std::nullopt});
  owner_[event.new_cam] = event.vehicle;
  owner_[event.new_denm] = event.vehicle;
}

void GroundTruthLedger::close(VehicleId vehicle, double t) {
  auto it = intervals_.find(vehicle);
  if (it == intervals_.end()) return;
  for (auto& iv : it->second) {
    if (!iv.until) iv.until = t;
  }
}

std::optional<VehicleId> GroundTruthLedger::owner(const StationId& id) const {
  auto it = owner_.find(id);
  if (it == owner_.end()) return std::nullopt;
  return it->second;
}

adversary::GroundTruthView GroundTruthLedger::truth_view() const {
  adversary::GroundTruthView view;
  view.owner = owner_;
  for (const auto& c : changes_) {
    if (c.startup || !c.old_cam) continue;
    view.changes.push_back({c.vehicle, c.t, c.silence_until, c.region, *c.old_cam, c.new_cam});
  }
  return view;
}

json GroundTruthLedger::to_json() const {
  json vehicles = json::array();
  for (const auto& [id, list] : intervals_) {
    json ids = json::array();
    for (const auto& iv : list) {
      ids.push_back({{"station_id", iv.id.to_string()},
                     {"scope", std::string(to_string(iv.id.scope))},
                     {"from", iv.from},
                     {"until", iv.until ? json(*iv.until) : json(nullptr)}});
    }
    vehicles.push_back({{"vehicle", id}, {"identities", ids}});
  }
  json changes = json::array();
  for (const auto& c : changes_) {
    auto opt_id = [](const std::optional<StationId>& s) {
      return s ? json(s->to_string()) : json(nullptr);
    };
    auto opt_num = [](const std::optional<double>& d) { return d ? json(*d) : json(nullptr); };
    changes.push_back({{"vehicle", c.vehicle},
                       {"t", c.t},
                       {"startup", c.startup},
                       {"forced", c.forced},
                       {"region", c.region},
                       {"old_cam", opt_id(c.old_cam)},
                       {"old_denm", opt_id(c.old_denm)},
                       {"new_cam", c.new_cam.to_string()},
                       {"new_denm", c.new_denm.to_string()},
                       {"silence_until", c.silence_until},
                       {"odometer_trip_m", c.odometer_trip_m},
                       {"odometer_since_last_m", c.odometer_since_last_m},
                       {"elapsed_since_last_s", c.elapsed_since_last_s},
                       {"sampled_distance_m", opt_num(c.sampled_distance_m)},
                       {"sampled_time_s", opt_num(c.sampled_time_s)}});
  }
  return {{"vehicles", vehicles}, {"changes", changes}};
}

namespace {

struct Vehicle {
  Vehicle(VehicleId vid, VehicleSpec s, const strategy::PoolSpec& pool,
          const strategy::ChangePolicy& policy, const strategy::LockLimits& limits,
          Rng strat, Rng noise)
      : id(vid),
        spec(std::move(s)),
        identity(pool, pool),
        trigger(policy),
        locks(limits),
        strategy_rng(std::move(strat)),
        noise_rng(std::move(noise)) {}

  VehicleId id;
  VehicleSpec spec;
  mobility::Route route;
  mobility::MotionState motion;
  mobility::TripState trip;
  bool active = false;
  bool done = false;
  bool just_departed = false;
  sba::Supi supi;
  std::optional<sba::EnrollmentCertificate> ec;
  strategy::IdentityState identity;
  strategy::ChangeTrigger trigger;
  strategy::LockState locks;
  strategy::ReadinessState readiness;
  beaconing::Ldm ldm;
  beaconing::BeaconSource source;
  Rng strategy_rng;
  Rng noise_rng;
  std::vector<beaconing::DeactivationNotice> outbox;
  std::vector<DenmEvent> pending_denms;
  std::optional<double> last_cam_time;
  std::optional<double> switch_from;
  std::optional<double> lock_union_start;
  std::optional<double> lock_union_end;
  int region = 0;

  Vec2 position() const { return motion.kinematics.position; }
};

struct ScheduledLock {
  double at_s;
  VehicleId vehicle;
  std::string app_id;
  double duration_s;
};

struct Emitted {
  VehicleId sender;
  beaconing::Message msg;
  Vec2 position;
};

}  // namespace

struct Simulation::Impl {
  ScenarioConfig cfg;
  SimulationOptions opt;
  Rng root;
  Rng loss_rng;
  sba::CoreNetwork core;
  std::vector<Vehicle> vehicles;
  GroundTruthLedger ledger;
  std::map<StationId, beaconing::IdentityInfo> registry;
  adversary::ObservationStore store;
  std::vector<adversary::TraceRecord> trace;
  RunStats stats;
  InvariantReport inv;
  std::vector<TickReport> reports;
  std::int64_t tick = 0;
  std::int64_t ticks_per_beacon = 1;
  std::int64_t total_ticks = 0;
  std::int64_t coordination_ticks = 0;  // 0 unless network triggered
  std::map<int, double> region_awareness;
  std::vector<ScheduledLock> lock_schedule;
  std::size_t next_lock = 0;
  std::vector<DenmEvent> denm_schedule;
  std::size_t next_denm = 0;

  static sba::CoreNetworkConfig core_config(const ScenarioConfig& c) {
    sba::CoreNetworkConfig out;
    out.token_ttl_s = c.sba.token_ttl_s;
    out.ec_lifetime_s = c.sba.ec_lifetime_s;
    out.sig_scheme = c.sba.sig_scheme;
    out.batch_cap = c.sba.batch_cap;
    return out;
  }

  Impl(ScenarioConfig config, SimulationOptions options)
      : cfg(std::move(config)),
        opt(options),
        root(cfg.seed),
        loss_rng(root.fork("loss")),
        core(core_config(cfg), root.fork("sba")),
        store(cfg.adversary.coverage) {
    ticks_per_beacon = cfg.ticks_per_beacon();
    total_ticks = cfg.total_ticks();
    if (const auto* nt = std::get_if<strategy::NetworkTriggeredPolicy>(&cfg.policy)) {
      coordination_ticks = std::max<std::int64_t>(
          1, std::llround(nt->coordination_period_s / cfg.tick_s));
    }
    build_fleet();
    enrol_fleet();
    for (const auto& e : cfg.lock_events) {
      for (std::size_t k = 0; k < e.repeat; ++k) {
        lock_schedule.push_back(
            {e.at_s + static_cast<double>(k) * e.period_s, e.vehicle, e.app_id, e.duration_s});
      }
    }
    std::stable_sort(lock_schedule.begin(), lock_schedule.end(),
                     [](const auto& a, const auto& b) { return a.at_s < b.at_s; });
    denm_schedule = cfg.denm_events;
    std::stable_sort(denm_schedule.begin(), denm_schedule.end(),
                     [](const auto& a, const auto& b) { return a.at_s < b.at_s; });
  }

  void build_fleet() {
    std::vector<VehicleSpec> specs = cfg.vehicles;
    const auto& g = cfg.generator;
    Rng fleet_rng = root.fork("fleet");
    for (std::size_t i = 0; i < g.count; ++i) {
      VehicleSpec s;
      std::size_t r = g.routes.size();
      s.route = g.routes[i % r];
      s.depart_s = static_cast<double>(i) * g.depart_spacing_s;
      s.offset_m = static_cast<double>(i / r) * g.offset_spacing_m;
      s.speed_mps = g.speed_mps;
      if (g.speed_jitter_mps > 0.0) {
        s.speed_mps += fleet_rng.uniform(-g.speed_jitter_mps, g.speed_jitter_mps);
      }
      s.quasi_ids = g.quasi_ids;
      if (g.quasi_jitter_m > 0.0) {
        s.quasi_ids.vehicle_length_m += fleet_rng.uniform(-g.quasi_jitter_m, g.quasi_jitter_m);
        s.quasi_ids.vehicle_width_m += fleet_rng.uniform(-g.quasi_jitter_m, g.quasi_jitter_m);
      }
      if (g.clock_skew_max_s > 0.0) {
        s.clock_skew_s = fleet_rng.uniform(-g.clock_skew_max_s, g.clock_skew_max_s);
      }
      specs.push_back(std::move(s));
    }
    mobility::RoadNetwork road;
    for (const auto& seg : cfg.segments) road.add_segment(seg);
    Rng strat = root.fork("strategy");
    Rng noise = root.fork("noise");
    vehicles.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
      auto vid = static_cast<VehicleId>(i);
      std::string label = "vehicle-" + std::to_string(i);
      Vehicle v(vid, std::move(specs[i]), cfg.pool, cfg.policy, cfg.lock_limits,
                strat.fork(label), noise.fork(label));
      v.route.segments = road.resolve_route(v.spec.route).value();
      double target = v.spec.target_speed_mps.value_or(v.spec.speed_mps);
      v.motion = mobility::initial_motion(v.route, v.spec.offset_m, v.spec.speed_mps,
                                          v.spec.accel_mps2, target);
      v.source.quasi_ids = v.spec.quasi_ids;
      vehicles.push_back(std::move(v));
    }
  }

  void enrol_fleet() {
    Rng subscribers = root.fork("subscribers");
    Rng nonces = root.fork("suci");
    for (auto& v : vehicles) {
      Bytes raw = subscribers.bytes(16);
      std::copy(raw.begin(), raw.end(), v.supi.value.begin());
      core.add_subscriber(v.supi);
    }
    for (auto& v : vehicles) {
      Bytes nonce = nonces.bytes(16);
      auto suci = sba::conceal_supi(v.supi, core.keystore(), core.home_key_id(), nonce);
      if (!suci) continue;
      auto ec = core.enroll(suci.value(), 0.0);
      if (ec) v.ec = ec.value();
    }
  }

  double now() const { return static_cast<double>(tick) * cfg.tick_s; }

  int region_of(Vec2 p) const {
    int best = 0;
    double best_d = 0.0;
    for (std::size_t i = 0; i < cfg.base_stations.size(); ++i) {
      double d = distance(p, cfg.base_stations[i].position);
      if (d <= cfg.base_stations[i].radius_m && (best == 0 || d < best_d)) {
        best = static_cast<int>(i) + 1;
        best_d = d;
      }
    }
    return best;
  }

  bool region_coordinated(int region) const {
    return cfg.base_stations.empty() ? region == 0 : region > 0;
  }

  // --- mobility -------------------------------------------------------
  void mobility_stage(double t) {
    for (auto& v : vehicles) {
      v.just_departed = false;
      if (v.done) continue;
      if (!v.active) {
        if (t + kTimeEpsilon < v.spec.depart_s) continue;
        v.active = true;
        v.just_departed = true;
        v.trip = {};
        v.trip.trip_start_time = t;
        if (v.motion.complete) finish_trip(v, t);
        continue;
      }
      auto r = mobility::step_kinematics(v.motion, v.route, cfg.tick_s);
      v.trip.advance(r.distance_m, cfg.tick_s);
      v.motion = r.state;
      if (v.motion.complete) finish_trip(v, t);
    }
    for (auto& v : vehicles) {
      if (v.active) v.region = region_of(v.position());
    }
  }

  void finish_trip(Vehicle& v, double t) {
    v.active = false;
    v.done = true;
    ++stats.trips_completed;
    ledger.close(v.id, t);
  }

  // --- strategy -------------------------------------------------------
  bool replenish(Vehicle& v, strategy::PseudonymPool& pool, double t) {
    if (!v.ec) return false;
    if (!pool.needs_replenish(t)) return true;
    strategy::TicketSource source = [&](const sba::EnrollmentCertificate& ec, std::size_t count,
                                        AppScope scope, double at)
        -> Result<std::vector<sba::AuthorizationTicket>, std::string> {
      auto batch = core.provision(ec, count, scope, at, pool.spec().schedule);
      if (!batch) return batch.error().stage + ":" + batch.error().reason;
      return std::move(batch.value());
    };
    auto r = strategy::replenish_pool(pool, *v.ec, source, t);
    if (!r) {
      ++stats.replenish_failures;
      return false;
    }
    if (r.value() > 0) ++stats.replenish_events;
    return true;
  }

  bool perform_change(Vehicle& v, double t, bool forced) {
    ChangeEvent ev;
    ev.vehicle = v.id;
    ev.t = t;
    ev.forced = forced;
    ev.region = v.region;
    ev.odometer_trip_m = v.trip.odometer_since_trip_start;
    ev.odometer_since_last_m = v.trip.odometer_since_last_change;
    ev.elapsed_since_last_s = v.trip.time_since_last_change;
    if (const auto& th = v.trigger.thresholds()) {
      ev.sampled_distance_m = th->distance_m;
      if (v.trigger.changes() > 1) ev.sampled_time_s = th->time_window_s;
    }
    auto r = strategy::execute_change(v.id, v.identity, v.trip, v.readiness, cfg.silence_s,
                                      cfg.notify_deactivation, t);
    if (!r) {
      ++stats.starvation_deferrals;
      return false;
    }
    const auto& rec = r.value();
    v.trigger.on_change();
    ev.startup = rec.startup;
    ev.old_cam = rec.old_cam;
    ev.old_denm = rec.old_denm;
    ev.new_cam = rec.new_cam;
    ev.new_denm = rec.new_denm;
    ev.silence_until = rec.silence_until;
    if (rec.old_cam) registry[*rec.old_cam].retired = true;
    if (rec.old_denm) registry[*rec.old_denm].retired = true;
    registry[rec.new_cam] = {v.id, false};
    registry[rec.new_denm] = {v.id, false};
    for (const auto& n : rec.notices) v.outbox.push_back(n);
    ledger.record_change(ev);
    if (rec.startup) {
      ++stats.startup_changes;
    } else {
      ++stats.changes;
      if (forced) ++stats.forced_changes;
      v.switch_from = cfg.silence_s == 0.0 ? v.last_cam_time : std::nullopt;
    }
    return true;
  }

  bool active_expired(const Vehicle& v, double t) const {
    const auto* cam = v.identity.cam_pool.active();
    const auto* denm = v.identity.denm_pool.active();
    return (cam && !cam->valid_at(t)) || (denm && !denm->valid_at(t)) ||
           (!cam && v.identity.cam_id) || (!denm && v.identity.denm_id);
  }

  bool self_due(Vehicle& v, double t) {
    if (const auto* sync = std::get_if<strategy::SynchronizedPolicy>(&cfg.policy)) {
      return strategy::synchronized_due(*sync, v.readiness.last_change_time, v.spec.clock_skew_s, t);
    }
    if (std::holds_alternative<strategy::NetworkTriggeredPolicy>(cfg.policy)) return false;
    double next_step = v.motion.speed_mps * cfg.tick_s;
    return v.trigger.evaluate(v.trip, v.strategy_rng, next_step);
  }

  void strategy_stage(double t) {
    for (auto& v : vehicles) {
      if (!v.active) continue;
      v.readiness.busy_transfer = std::any_of(v.spec.busy_transfer.begin(), v.spec.busy_transfer.end(),
                                              [&](const Interval& iv) { return iv.contains(t); });
      v.readiness.safety_critical =
          std::any_of(v.spec.safety_critical.begin(), v.spec.safety_critical.end(),
                      [&](const Interval& iv) { return iv.contains(t); });
      if (v.just_departed) {
        replenish(v, v.identity.cam_pool, t);
        replenish(v, v.identity.denm_pool, t);
        perform_change(v, t, false);
        continue;
      }
      if (!v.identity.cam_id) {
        // Startup never succeeded; keep trying.
        perform_change(v, t, false);
        continue;
      }
      if (active_expired(v, t)) {
        perform_change(v, t, true);
        continue;
      }
      if (v.identity.in_silence(t)) continue;
      if (!self_due(v, t)) continue;
      if (strategy::is_change_permitted(v.locks, v.readiness, t)) {
        perform_change(v, t, false);
      } else if (v.locks.locked_at(t)) {
        ++stats.deferred_by_lock;
      } else {
        ++stats.deferred_by_readiness;
      }
    }
    if (coordination_ticks > 0 && tick % coordination_ticks == 0) coordinate(t);
  }

  void coordinate(double t) {
    const auto& nt = std::get<strategy::NetworkTriggeredPolicy>(cfg.policy);
    std::map<int, std::vector<strategy::CoordinatorCandidate>> views;
    for (const auto& v : vehicles) {
      if (!v.active || !region_coordinated(v.region) || !v.identity.cam_id) continue;
      strategy::CoordinatorCandidate c;
      c.id = v.id;
      c.last_change_time = v.readiness.last_change_time;
      c.permitted = strategy::is_change_permitted(v.locks, v.readiness, t);
      c.due = v.trip.time_since_last_change >= nt.interval_s - kTimeEpsilon;
      c.in_silence = v.identity.in_silence(t);
      views[v.region].push_back(c);
    }
    for (const auto& [region, view] : views) {
      for (VehicleId id : strategy::coordinate_network_change(view, cfg.max_silent_fraction)) {
        ++stats.coordinator_commands;
        perform_change(vehicles[id], t, false);
      }
    }
  }

  // --- sba ------------------------------------------------------------
  void sba_stage(double t) {
    for (auto& v : vehicles) {
      if (!v.active) continue;
      replenish(v, v.identity.cam_pool, t);
      replenish(v, v.identity.denm_pool, t);
      v.identity.cam_pool.prune(t);
      v.identity.denm_pool.prune(t);
    }
    while (next_lock < lock_schedule.size() &&
           lock_schedule[next_lock].at_s <= t + kTimeEpsilon) {
      const auto& req = lock_schedule[next_lock++];
      Vehicle& v = vehicles[req.vehicle];
      auto valid_until = v.identity.active_valid_until();
      if (!v.active || !valid_until) {
        ++stats.lock_denials["vehicle_inactive"];
        continue;
      }
      int region = v.region;
      strategy::NetworkValidator validator = [&, region](std::string_view, double at) {
        auto token_ok = core.service_request(sba::NfType::kV2xAf, sba::kV2xMessagingService, at);
        auto it = region_awareness.find(region);
        double awareness = it == region_awareness.end() ? 1.0 : it->second;
        return token_ok.ok() && awareness >= 0.8;
      };
      auto r = v.locks.request(req.app_id, req.duration_s, t, *valid_until, validator);
      if (!r) {
        ++stats.lock_denials[std::string(strategy::to_string(r.error()))];
        continue;
      }
      ++stats.lock_grants;
      audit_lock(v, r.value(), *valid_until);
    }
  }

  void audit_lock(Vehicle& v, const strategy::Lock& lock, double valid_until) {
    double d = lock.expires_at - lock.granted_at;
    if (v.lock_union_end && lock.granted_at <= *v.lock_union_end + kTimeEpsilon) {
      v.lock_union_end = std::max(*v.lock_union_end, lock.expires_at);
    } else {
      v.lock_union_start = lock.granted_at;
      v.lock_union_end = lock.expires_at;
    }
    if (d > 255.0 + kTimeEpsilon ||
        *v.lock_union_end - *v.lock_union_start > 900.0 + kTimeEpsilon ||
        lock.expires_at > valid_until + kTimeEpsilon) {
      ++inv.lock_cap_violations;
    }
  }

  // --- beaconing and ingest -------------------------------------------
  void beaconing_stage(double t) {
    std::vector<mobility::PositionedVehicle> world;
    for (const auto& v : vehicles) {
      if (v.active) world.push_back({v.id, v.position()});
    }
    mobility::SpatialGrid grid(world, std::max(cfg.radio_range_m, 1.0));

    std::vector<Emitted> emitted;
    for (auto& v : vehicles) {
      if (!v.active) {
        v.outbox.clear();
        continue;
      }
      for (const auto& n : v.outbox) {
        emitted.push_back({v.id, n, v.position()});
        ++stats.notices_emitted;
      }
      v.outbox.clear();
    }
    for (auto& v : vehicles) {
      if (!v.active) continue;
      auto& src = v.source;
      src.true_position = v.position();
      src.velocity = v.motion.kinematics.velocity;
      src.in_silence = v.identity.in_silence(t);
      const auto* cam_ticket = v.identity.cam_pool.active();
      src.cam_id = cam_ticket && cam_ticket->valid_at(t) ? v.identity.cam_id : std::nullopt;
      auto out = beaconing::emit_cam(src, tick, cfg.tick_s, ticks_per_beacon,
                                     cfg.positioning_sigma_m, v.noise_rng);
      if (out.status == beaconing::EmitStatus::kStarved) ++stats.starved_emissions;
      if (out.status != beaconing::EmitStatus::kEmitted) continue;
      ++stats.cams_emitted;
      if (v.switch_from) {
        double gap = t - *v.switch_from;
        ++inv.stack_switches_measured;
        inv.max_stack_switch_gap_s = std::max(inv.max_stack_switch_gap_s, gap);
        if (gap > 1.0 / cfg.beacon_hz + 0.1 + 1e-9) ++inv.stack_switch_violations;
        v.switch_from.reset();
      }
      v.last_cam_time = t;
      emitted.push_back({v.id, *out.cam, v.position()});
    }
    while (next_denm < denm_schedule.size() && denm_schedule[next_denm].at_s <= t + kTimeEpsilon) {
      const auto& e = denm_schedule[next_denm++];
      Vehicle& v = vehicles[e.vehicle];
      if (!v.active) {
        ++stats.denms_dropped;
      } else {
        v.pending_denms.push_back(e);
        if (v.identity.in_silence(t)) ++stats.denms_deferred;
      }
    }
    for (auto& v : vehicles) {
      if (!v.active || v.pending_denms.empty() || v.identity.in_silence(t)) continue;
      const auto* ticket = v.identity.denm_pool.active();
      for (const auto& e : v.pending_denms) {
        if (!ticket || !ticket->valid_at(t) || !v.identity.denm_id) {
          ++stats.denms_dropped;
          continue;
        }
        beaconing::Denm d{*v.identity.denm_id, t, v.position(), e.event_type};
        emitted.push_back({v.id, d, v.position()});
        ++stats.denms_emitted;
      }
      v.pending_denms.clear();
    }

    std::map<VehicleId, std::pair<std::set<StationId>, std::set<StationId>>> sent;
    for (const auto& m : emitted) {
      const Vehicle& sender = vehicles[m.sender];
      bool notice = std::holds_alternative<beaconing::DeactivationNotice>(m.msg);
      if (!notice) {
        const auto& id = beaconing::sender_of(m.msg);
        auto& ids = sent[m.sender];
        (id.scope == AppScope::kCam ? ids.first : ids.second).insert(id);
        if (sender.identity.in_silence(t)) ++inv.silence_violations;
      }
      for (VehicleId r : grid.query(m.position, cfg.radio_range_m)) {
        if (r == m.sender) continue;
        ++stats.deliveries_attempted;
        if (cfg.packet_loss > 0.0 && loss_rng.bernoulli(cfg.packet_loss)) {
          ++stats.deliveries_lost;
          continue;
        }
        beaconing::receive_message(vehicles[r].ldm, m.msg, t, true);
      }
    }
    for (const auto& [id, ids] : sent) {
      if (ids.first.size() > 1 || ids.second.size() > 1) ++inv.sybil_violations;
    }

    TickReport report;
    report.tick = tick;
    report.now = t;
    report.min_pool_valid = std::numeric_limits<std::size_t>::max();
    beaconing::IdentityResolver resolve = [&](const StationId& id) -> std::optional<beaconing::IdentityInfo> {
      auto it = registry.find(id);
      if (it == registry.end()) return std::nullopt;
      return it->second;
    };
    std::map<int, std::pair<double, std::size_t>> region_sum;
    double awareness_tick = 0.0;
    for (auto& v : vehicles) {
      if (!v.active) continue;
      v.ldm.evict(t, cfg.ldm_timeout_s);
      std::vector<VehicleId> neighbours;
      for (VehicleId n : grid.query(v.position(), cfg.radio_range_m)) {
        if (n != v.id) neighbours.push_back(n);
      }
      auto q = beaconing::ldm_quality(v.ldm, neighbours, resolve);
      report.ghost_total += q.ghost_count;
      report.missing_total += q.missing_count;
      awareness_tick += q.awareness_ratio;
      stats.awareness_sum += q.awareness_ratio;
      ++stats.awareness_samples;
      stats.awareness_min = std::min(stats.awareness_min, q.awareness_ratio);
      auto& rs = region_sum[v.region];
      rs.first += q.awareness_ratio;
      ++rs.second;
      ++report.active;
      if (v.identity.in_silence(t)) {
        ++report.silent;
        stats.silence_blind_time_s += cfg.tick_s;
      }
      if (v.identity.cam_id) {
        std::size_t cam = v.identity.cam_pool.valid_count(t);
        std::size_t denm = v.identity.denm_pool.valid_count(t);
        std::size_t floor = cfg.pool.min_concurrent_valid;
        if (cam < floor || denm < floor) ++inv.pool_floor_violations;
        report.min_pool_valid = std::min({report.min_pool_valid, cam, denm});
      }
    }
    if (report.active > 0) report.mean_awareness = awareness_tick / static_cast<double>(report.active);
    if (report.min_pool_valid == std::numeric_limits<std::size_t>::max()) report.min_pool_valid = 0;
    region_awareness.clear();
    for (const auto& [region, rs] : region_sum) {
      region_awareness[region] = rs.first / static_cast<double>(rs.second);
    }
    stats.ghost_count_max = std::max(stats.ghost_count_max, report.ghost_total);
    stats.missing_count_max = std::max(stats.missing_count_max, report.missing_total);
    stats.ghost_entry_ticks += report.ghost_total;
    stats.missing_entry_ticks += report.missing_total;
    if (report.ghost_total > 0) ++stats.ghost_ticks;

    if (coordination_ticks > 0) audit_silent_fraction(t);

    for (const auto& m : emitted) {
      store.ingest(m.msg, m.position);
      if (!opt.record_trace || std::holds_alternative<beaconing::DeactivationNotice>(m.msg)) {
        continue;
      }
      adversary::TraceRecord rec;
      rec.t = beaconing::timestamp_of(m.msg);
      rec.sender_truth_id = m.sender;
      rec.station_id = beaconing::sender_of(m.msg);
      if (const auto* cam = std::get_if<beaconing::Cam>(&m.msg)) {
        rec.position = cam->position;
        rec.velocity = cam->velocity;
        rec.quasi_ids = cam->quasi_ids;
      } else if (const auto* denm = std::get_if<beaconing::Denm>(&m.msg)) {
        rec.position = denm->event_position;
      }
      trace.push_back(rec);
    }
    for (auto& v : vehicles) v.locks.end_tick(t);
    if (opt.keep_tick_reports) reports.push_back(report);
  }

  void audit_silent_fraction(double t) {
    std::map<int, std::pair<std::size_t, std::size_t>> counts;  // population, silent
    for (const auto& v : vehicles) {
      if (!v.active || !region_coordinated(v.region)) continue;
      auto& c = counts[v.region];
      ++c.first;
      if (v.identity.in_silence(t)) ++c.second;
    }
    for (const auto& [region, c] : counts) {
      auto allowed = static_cast<std::size_t>(
          std::floor(cfg.max_silent_fraction * static_cast<double>(c.first) + 1e-9));
      if (c.second > allowed) ++inv.silent_fraction_violations;
    }
  }

  bool step() {
    if (tick >= total_ticks) return false;
    double t = now();
    mobility_stage(t);
    strategy_stage(t);
    sba_stage(t);
    beaconing_stage(t);
    ++stats.ticks;
    ++tick;
    return true;
  }
};

Simulation::Simulation(ScenarioConfig config, SimulationOptions options)
    : impl_(std::make_unique<Impl>(std::move(config), options)) {}
Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

bool Simulation::step() { return impl_->step(); }
void Simulation::run() {
  while (impl_->step()) {
  }
}
std::int64_t Simulation::tick() const { return impl_->tick; }
double Simulation::now() const { return impl_->now(); }
const ScenarioConfig& Simulation::config() const { return impl_->cfg; }
const GroundTruthLedger& Simulation::ledger() const { return impl_->ledger; }
const adversary::ObservationStore& Simulation::observations() const { return impl_->store; }
const std::vector<adversary::TraceRecord>& Simulation::trace() const { return impl_->trace; }
const RunStats& Simulation::stats() const { return impl_->stats; }
const InvariantReport& Simulation::invariants() const { return impl_->inv; }
const std::vector<TickReport>& Simulation::tick_reports() const { return impl_->reports; }
const sba::CoreNetwork& Simulation::core() const { return impl_->core; }

std::vector<VehicleSnapshot> Simulation::vehicles() const {
  std::vector<VehicleSnapshot> out;
  std::int64_t last = std::max<std::int64_t>(0, impl_->tick - 1);
  double t = static_cast<double>(last) * impl_->cfg.tick_s;
  for (const auto& v : impl_->vehicles) {
    out.push_back({v.id, v.active, v.done, v.position(), v.identity.cam_id, v.identity.denm_id,
                   v.identity.in_silence(t), v.identity.cam_pool.valid_count(t),
                   v.identity.denm_pool.valid_count(t)});
  }
  return out;
}

AttackOutcome Simulation::analyze() const {
  AttackOutcome out;
  out.tracklets = adversary::chain_same_id(impl_->store);
  out.linkage = adversary::link(impl_->store, impl_->cfg.adversary.linker);
  out.score = adversary::evaluate_attack(out.linkage, out.tracklets, impl_->ledger.truth_view());
  return out;
}

}  // namespace psim::engine
