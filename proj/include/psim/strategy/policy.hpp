#pragma once

#include <optional>
#include <string>
#include <variant>

#include "psim/common/rng.hpp"
#include "psim/mobility/kinematics.hpp"

namespace psim::strategy {

/// SAE-style: change at startup and every interval_s afterwards.
struct PeriodicPolicy {
  double interval_s = 300.0;
};

/// C2C-CC trip segmentation. The second change lands uniformly in
/// [second_min_m, second_max_m] from trip start; each later change needs
/// subsequent_min_m since the last change and a time sampled uniformly in
/// [time_min_s, time_max_s] since the last change (both conditions).
struct SegmentPolicy {
  double second_min_m = 800.0;
  double second_max_m = 1500.0;
  double subsequent_min_m = 800.0;
  double time_min_s = 120.0;
  double time_max_s = 360.0;
};

/// Vehicles whose periodic deadline falls in the same window_s bucket
/// change together at the bucket boundary of their own (skewed) clocks.
struct SynchronizedPolicy {
  double interval_s = 300.0;
  double window_s = 10.0;
};

/// The serving base station commands changes; vehicles become eligible
/// interval_s after their last change and are polled every
/// coordination_period_s.
struct NetworkTriggeredPolicy {
  double interval_s = 300.0;
  double coordination_period_s = 1.0;
};

using ChangePolicy = std::variant<PeriodicPolicy, SegmentPolicy,
                                  SynchronizedPolicy, NetworkTriggeredPolicy>;

std::string_view policy_kind(const ChangePolicy& policy);
/// Error description, or nullopt when the parameters are admissible.
std::optional<std::string> validate_policy(const ChangePolicy& policy);

enum class SegmentPhase { kSecond, kSubsequent };

struct SegmentThresholds {
  double distance_m = 0.0;
  double time_window_s = 0.0;  // unused in the second phase
};

SegmentThresholds sample_segment_thresholds(Rng& rng, SegmentPhase phase,
                                            const SegmentPolicy& policy = {});

/// Per-vehicle trigger. Fires once at trip start for every policy; after
/// that only periodic and segment policies self-trigger.
class ChangeTrigger {
 public:
  explicit ChangeTrigger(ChangePolicy policy) : policy_(std::move(policy)) {}

  /// next_step_m is the distance the vehicle will cover before the next
  /// evaluation; the second segment change fires early rather than overrun
  /// second_max_m.
  bool evaluate(const mobility::TripState& trip, Rng& rng,
                double next_step_m = 0.0);

  /// Record an executed change (including the startup one).
  void on_change();

  std::size_t changes() const { return changes_; }
  const std::optional<SegmentThresholds>& thresholds() const { return thresholds_; }
  const ChangePolicy& policy() const { return policy_; }

 private:
  ChangePolicy policy_;
  std::size_t changes_ = 0;
  std::optional<SegmentThresholds> thresholds_;
};

/// Stateless form of ChangeTrigger::evaluate for a vehicle that already
/// made `changes_so_far` changes under the given thresholds.
bool evaluate_change_trigger(const ChangePolicy& policy,
                             const mobility::TripState& trip,
                             std::size_t changes_so_far,
                             const std::optional<SegmentThresholds>& thresholds,
                             double next_step_m = 0.0);

/// Local-clock instant at which a synchronized change is scheduled.
double synchronized_boundary(const SynchronizedPolicy& policy,
                             double last_change_local);

/// True once the vehicle's clock (now + skew) reaches the boundary.
bool synchronized_due(const SynchronizedPolicy& policy, double last_change_time,
                      double clock_skew_s, double now);

}  // namespace psim::strategy
