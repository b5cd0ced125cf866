#pragma once

#include <map>
#include <vector>

#include "psim/adversary/linker.hpp"

namespace psim::adversary {

/// A pseudonym change as recorded by the engine. Only scoring sees this.
struct TruthChange {
  VehicleId vehicle = 0;
  double t = 0.0;
  double silence_until = 0.0;
  int region = 0;  // serving base station index, or 0 for the whole map
  beaconing::StationId old_cam;
  beaconing::StationId new_cam;
};

struct GroundTruthView {
  std::map<beaconing::StationId, VehicleId> owner;
  std::vector<TruthChange> changes;  // non-startup changes only
};

struct AttackScore {
  double link_accuracy = 1.0;
  double traceability = 1.0;
  double mean_anonymity_set = 1.0;
  std::size_t transitions = 0;
  std::size_t correct_links = 0;
  std::size_t wrong_links = 0;  // linked to another vehicle's id
};

/// link_accuracy: observed true CAM transitions the adversary linked
/// correctly, over all observed true transitions (1 when there are none).
/// traceability: per vehicle, longest correctly linked run of its CAM
/// tracklets over its observed span, averaged over observed vehicles.
/// mean_anonymity_set: per change, vehicles in the same region whose
/// closed silence intervals overlap it, averaged over changes.
AttackScore evaluate_attack(const LinkageResult& linkage,
                            const std::vector<Tracklet>& tracklets,
                            const GroundTruthView& truth);

}  // namespace psim::adversary
