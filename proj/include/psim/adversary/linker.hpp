#pragma once

#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "psim/adversary/assignment.hpp"
#include "psim/beaconing/messages.hpp"

namespace psim::adversary {

/// What the eavesdropper records. Carries no ground-truth identity.
struct Observation {
  double t = 0.0;
  beaconing::StationId station_id;
  Vec2 position;
  Vec2 velocity;
  std::optional<beaconing::QuasiIds> quasi_ids;  // CAM only
};

struct ListeningPost {
  Vec2 center;
  double radius_m = 0.0;
};

struct Coverage {
  bool full = true;
  std::vector<ListeningPost> posts;

  /// True when an emitter at this position is heard (closed ball).
  bool covers(Vec2 emitter) const;
};

class ObservationStore {
 public:
  explicit ObservationStore(Coverage coverage = {}) : coverage_(std::move(coverage)) {}

  /// Records a CAM or DENM heard from an emitter at the given position.
  /// Deactivation notices are counted but carry nothing to link on.
  void ingest(const beaconing::Message& msg, Vec2 emitter_position);
  void add(Observation obs) { observations_.push_back(std::move(obs)); }

  const std::vector<Observation>& observations() const { return observations_; }
  std::size_t notices_heard() const { return notices_; }
  const Coverage& coverage() const { return coverage_; }

 private:
  Coverage coverage_;
  std::vector<Observation> observations_;
  std::size_t notices_ = 0;
};

struct Tracklet {
  beaconing::StationId station_id;
  std::size_t count = 0;
  double first_t = 0.0;
  double last_t = 0.0;
  Vec2 first_position;
  Vec2 first_velocity;
  Vec2 last_position;
  Vec2 last_velocity;
  std::optional<beaconing::QuasiIds> quasi_ids;

  bool overlaps(const Tracklet& other) const {
    return first_t <= other.last_t && other.first_t <= last_t;
  }
};

/// One tracklet per station id, sorted by id.
std::vector<Tracklet> chain_same_id(const ObservationStore& store);

struct MotionModel {
  double sigma0_m = 1.0;
  double beta_mps = 2.0;
  double no_match_cost = 50.0;
  double max_gap_s = 30.0;

  /// Position uncertainty after a gap; non-decreasing in gap.
  double sigma(double gap_s) const { return sigma0_m + beta_mps * gap_s; }
};

/// Normalised squared prediction error of linking end -> start, or
/// kInfeasible when start does not begin within (0, max_gap_s] after end.
double link_cost(const Tracklet& end, const Tracklet& start, const MotionModel& model);

struct GapAssignment {
  std::vector<beaconing::StationId> ends;
  std::vector<beaconing::StationId> starts;
  std::vector<std::vector<double>> cost;
  std::vector<std::optional<std::size_t>> end_to_start;
  double total_cost = 0.0;
};

/// Minimum-cost matching of ending to starting tracklets. Both sides are
/// ordered by station id so ties resolve lexicographically.
GapAssignment associate_across_gap(std::vector<Tracklet> ends,
                                   std::vector<Tracklet> starts,
                                   const MotionModel& model);

/// Partition of tracklets by quasi-identifiers (within tolerance). A class
/// whose members never overlap in time is one vehicle and is chained
/// outright; other classes stay ambiguous for kinematic linking.
struct SemanticClasses {
  std::vector<std::vector<std::size_t>> chained;    // indices, time ordered
  std::vector<std::vector<std::size_t>> ambiguous;  // indices, id ordered
};
SemanticClasses semantic_match(const std::vector<Tracklet>& tracklets,
                               double tolerance_m = 0.01);

struct TrackHypothesis {
  std::vector<beaconing::StationId> chain;
  double score = 0.0;
};

struct LinkageResult {
  std::vector<TrackHypothesis> chains;
  std::vector<GapAssignment> gaps;

  /// Successor of each station id that was linked forward.
  std::map<beaconing::StationId, beaconing::StationId> successors() const;
  nlohmann::json to_json() const;
};

struct LinkerOptions {
  MotionModel motion;
  bool semantic = true;
  double semantic_tolerance_m = 0.01;
};

/// Full attack: same-id chaining, semantic merge, then kinematic
/// assignment per connected group of candidate links. CAM and DENM
/// identifiers are linked only within their own scope.
LinkageResult link(const ObservationStore& store, const LinkerOptions& options = {});

}  // namespace psim::adversary
