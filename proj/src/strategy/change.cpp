#include "psim/strategy/change.hpp"

#include <algorithm>
#include <cmath>

namespace psim::strategy {

bool is_change_permitted(const LockState& locks, const ReadinessState& readiness,
                         double now) {
  return !locks.locked_at(now) && !readiness.busy_transfer &&
         !readiness.safety_critical;
}

std::optional<double> IdentityState::active_valid_until() const {
  const auto* cam = cam_pool.active();
  const auto* denm = denm_pool.active();
  if (cam && denm) return std::min(cam->valid_until, denm->valid_until);
  if (cam) return cam->valid_until;
  if (denm) return denm->valid_until;
  return std::nullopt;
}

Result<ChangeRecord, ChangeError> execute_change(VehicleId vehicle,
                                                 IdentityState& identity,
                                                 mobility::TripState& trip,
                                                 ReadinessState& readiness,
                                                 double silence_s, bool notify,
                                                 double now) {
  if (!identity.cam_pool.next_candidate(now) ||
      !identity.denm_pool.next_candidate(now)) {
    return ChangeError::kPoolExhausted;
  }
  ChangeRecord record;
  record.vehicle = vehicle;
  record.t = now;
  record.old_cam = identity.cam_id;
  record.old_denm = identity.denm_id;
  record.startup = !record.old_cam && !record.old_denm;

  auto cam = identity.cam_pool.activate_next(now);
  auto denm = identity.denm_pool.activate_next(now);
  record.new_cam = beaconing::station_id_for(cam->activated.at_id, AppScope::kCam);
  record.new_denm =
      beaconing::station_id_for(denm->activated.at_id, AppScope::kDenm);
  identity.cam_id = record.new_cam;
  identity.denm_id = record.new_denm;

  if (record.startup) {
    identity.silence_until = now;
  } else {
    identity.silence_until = now + silence_s;
    if (notify) {
      if (record.old_cam) record.notices.push_back({*record.old_cam, now});
      if (record.old_denm) record.notices.push_back({*record.old_denm, now});
    }
  }
  record.silence_until = identity.silence_until;
  trip.reset_change_counters();
  readiness.last_change_time = now;
  return record;
}

std::vector<VehicleId> coordinate_network_change(
    std::span<const CoordinatorCandidate> view, double max_silent_fraction) {
  auto population = static_cast<double>(view.size());
  auto allowed = static_cast<std::int64_t>(
      std::floor(max_silent_fraction * population + 1e-9));
  auto silent = std::count_if(view.begin(), view.end(),
                              [](const auto& c) { return c.in_silence; });
  std::int64_t cap = allowed - static_cast<std::int64_t>(silent);
  std::vector<CoordinatorCandidate> ready;
  for (const auto& c : view) {
    if (c.permitted && c.due && !c.in_silence) ready.push_back(c);
  }
  std::sort(ready.begin(), ready.end(), [](const auto& a, const auto& b) {
    if (a.last_change_time != b.last_change_time) {
      return a.last_change_time < b.last_change_time;
    }
    return a.id < b.id;
  });
  std::vector<VehicleId> selected;
  for (const auto& c : ready) {
    if (static_cast<std::int64_t>(selected.size()) >= cap) break;
    selected.push_back(c.id);
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

}  // namespace psim::strategy
