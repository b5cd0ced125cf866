#include "psim/beaconing/ldm.hpp"

#include <map>

namespace psim::beaconing {

void Ldm::receive(const Message& msg, double now) {
  if (const auto* notice = std::get_if<DeactivationNotice>(&msg)) {
    entries_.erase(notice->station_id);
    return;
  }
  LdmEntry entry;
  entry.station_id = sender_of(msg);
  entry.last_seen = now;
  if (const auto* cam = std::get_if<Cam>(&msg)) {
    entry.last_position = cam->position;
    entry.last_velocity = cam->velocity;
  } else if (const auto* denm = std::get_if<Denm>(&msg)) {
    entry.last_position = denm->event_position;
  }
  entries_[entry.station_id] = entry;
}

void Ldm::evict(double now, double timeout_s) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (now - it->second.last_seen > timeout_s) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

void receive_message(Ldm& ldm, const Message& msg, double now, bool in_range) {
  if (in_range) ldm.receive(msg, now);
}

LdmQuality ldm_quality(const Ldm& ldm,
                       std::span<const VehicleId> ground_truth_neighbors,
                       const IdentityResolver& resolve) {
  LdmQuality q;
  std::map<VehicleId, std::size_t> live;
  for (const auto& [id, entry] : ldm.entries()) {
    auto info = resolve(id);
    if (!info) continue;
    if (info->retired) {
      ++q.ghost_count;
    } else if (id.scope == AppScope::kCam) {
      ++live[info->owner];
    }
  }
  if (ground_truth_neighbors.empty()) return q;
  std::size_t aware = 0;
  for (VehicleId v : ground_truth_neighbors) {
    auto it = live.find(v);
    std::size_t n = it == live.end() ? 0 : it->second;
    if (n == 0) ++q.missing_count;
    if (n == 1) ++aware;
  }
  q.awareness_ratio = static_cast<double>(aware) /
                      static_cast<double>(ground_truth_neighbors.size());
  return q;
}

}  // namespace psim::beaconing
