#include "psim/strategy/policy.hpp"

#include <cmath>

namespace psim::strategy {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

std::string_view policy_kind(const ChangePolicy& policy) {
  return std::visit(overloaded{
                        [](const PeriodicPolicy&) { return "periodic"; },
                        [](const SegmentPolicy&) { return "segment"; },
                        [](const SynchronizedPolicy&) { return "synchronized"; },
                        [](const NetworkTriggeredPolicy&) {
                          return "network_triggered";
                        },
                    },
                    policy);
}

std::optional<std::string> validate_policy(const ChangePolicy& policy) {
  return std::visit(
      overloaded{
          [](const PeriodicPolicy& p) -> std::optional<std::string> {
            if (!(p.interval_s > 0)) return "interval_s must be > 0";
            return std::nullopt;
          },
          [](const SegmentPolicy& p) -> std::optional<std::string> {
            if (!(p.second_min_m >= 800.0)) return "second_min_m must be >= 800";
            if (!(p.second_max_m >= p.second_min_m)) {
              return "second_max_m must be >= second_min_m";
            }
            if (!(p.subsequent_min_m >= 800.0)) {
              return "subsequent_min_m must be >= 800";
            }
            if (!(p.time_min_s > 0) || !(p.time_max_s >= p.time_min_s)) {
              return "need 0 < time_min_s <= time_max_s";
            }
            return std::nullopt;
          },
          [](const SynchronizedPolicy& p) -> std::optional<std::string> {
            if (!(p.interval_s > 0)) return "interval_s must be > 0";
            if (!(p.window_s > 0)) return "window_s must be > 0";
            return std::nullopt;
          },
          [](const NetworkTriggeredPolicy& p) -> std::optional<std::string> {
            if (!(p.interval_s >= 0)) return "interval_s must be >= 0";
            if (!(p.coordination_period_s > 0)) {
              return "coordination_period_s must be > 0";
            }
            return std::nullopt;
          },
      },
      policy);
}

SegmentThresholds sample_segment_thresholds(Rng& rng, SegmentPhase phase,
                                            const SegmentPolicy& policy) {
  SegmentThresholds t;
  if (phase == SegmentPhase::kSecond) {
    t.distance_m = rng.uniform(policy.second_min_m, policy.second_max_m);
  } else {
    t.distance_m = policy.subsequent_min_m;
    t.time_window_s = rng.uniform(policy.time_min_s, policy.time_max_s);
  }
  return t;
}

bool evaluate_change_trigger(const ChangePolicy& policy,
                             const mobility::TripState& trip,
                             std::size_t changes_so_far,
                             const std::optional<SegmentThresholds>& thresholds,
                             double next_step_m) {
  if (changes_so_far == 0) return true;
  return std::visit(
      overloaded{
          [&](const PeriodicPolicy& p) {
            return trip.time_since_last_change >= p.interval_s - kTimeEpsilon;
          },
          [&](const SegmentPolicy& p) {
            if (!thresholds) return false;
            if (changes_so_far == 1) {
              double odo = trip.odometer_since_trip_start;
              if (odo >= thresholds->distance_m) return true;
              return odo >= p.second_min_m && odo + next_step_m > p.second_max_m;
            }
            return trip.odometer_since_last_change >= thresholds->distance_m &&
                   trip.time_since_last_change >=
                       thresholds->time_window_s - kTimeEpsilon;
          },
          [](const SynchronizedPolicy&) { return false; },
          [](const NetworkTriggeredPolicy&) { return false; },
      },
      policy);
}

bool ChangeTrigger::evaluate(const mobility::TripState& trip, Rng& rng,
                             double next_step_m) {
  if (const auto* seg = std::get_if<SegmentPolicy>(&policy_);
      seg && changes_ > 0 && !thresholds_) {
    thresholds_ = sample_segment_thresholds(
        rng, changes_ == 1 ? SegmentPhase::kSecond : SegmentPhase::kSubsequent,
        *seg);
  }
  return evaluate_change_trigger(policy_, trip, changes_, thresholds_,
                                 next_step_m);
}

void ChangeTrigger::on_change() {
  ++changes_;
  thresholds_.reset();
}

double synchronized_boundary(const SynchronizedPolicy& policy,
                             double last_change_local) {
  double due = last_change_local + policy.interval_s;
  return std::ceil(due / policy.window_s - kTimeEpsilon) * policy.window_s;
}

bool synchronized_due(const SynchronizedPolicy& policy, double last_change_time,
                      double clock_skew_s, double now) {
  double boundary = synchronized_boundary(policy, last_change_time + clock_skew_s);
  return now + clock_skew_s >= boundary - kTimeEpsilon;
}

}  // namespace psim::strategy
