#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>

#include "psim/beaconing/messages.hpp"

namespace psim::beaconing {

struct LdmEntry {
  StationId station_id;
  double last_seen = 0.0;
  Vec2 last_position;
  Vec2 last_velocity;
};

/// A receiver's table of neighbours, keyed by on-air identifier.
class Ldm {
 public:
  /// CAM/DENM upsert; a deactivation notice drops the entry if present.
  void receive(const Message& msg, double now);
  /// Drops entries with now - last_seen > timeout.
  void evict(double now, double timeout_s);

  const std::map<StationId, LdmEntry>& entries() const { return entries_; }
  bool contains(const StationId& id) const { return entries_.count(id) > 0; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<StationId, LdmEntry> entries_;
};

/// Applies msg only when the range check passed.
void receive_message(Ldm& ldm, const Message& msg, double now, bool in_range);

/// Ground-truth view of an identifier: who uses it and whether it is retired.
struct IdentityInfo {
  VehicleId owner = 0;
  bool retired = false;
};
using IdentityResolver =
    std::function<std::optional<IdentityInfo>(const StationId&)>;

struct LdmQuality {
  std::size_t ghost_count = 0;
  std::size_t missing_count = 0;
  double awareness_ratio = 1.0;
};

/// ghost: entries under retired identifiers. missing: in-range vehicles with
/// no live CAM entry. awareness: in-range vehicles with exactly one live
/// CAM entry over in-range vehicles (1.0 when nobody is in range).
LdmQuality ldm_quality(const Ldm& ldm,
                       std::span<const VehicleId> ground_truth_neighbors,
                       const IdentityResolver& resolve);

}  // namespace psim::beaconing
