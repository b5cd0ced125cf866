#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "psim/common/geometry.hpp"
#include "psim/common/rng.hpp"
#include "psim/common/types.hpp"

namespace psim::beaconing {

/// On-air identifier. The value is a bijective scramble of the ticket's
/// at_id keyed by scope, so (value, scope) maps one-to-one to (at_id, scope).
struct StationId {
  std::uint64_t value = 0;
  AppScope scope = AppScope::kCam;

  std::string to_string() const;  // 16 lowercase hex digits
  friend auto operator<=>(const StationId&, const StationId&) = default;
  friend bool operator==(const StationId&, const StationId&) = default;
};

StationId station_id_for(std::uint64_t at_id, AppScope scope);
/// Inverse of station_id_for.
std::uint64_t at_id_of(const StationId& id);
std::optional<std::uint64_t> parse_station_value(std::string_view hex);

struct QuasiIds {
  double vehicle_length_m = 4.5;
  double vehicle_width_m = 1.8;
  friend bool operator==(const QuasiIds&, const QuasiIds&) = default;
};

enum class DenmEventType { kHazard, kAccident, kRoadwork, kWeather };
std::string_view to_string(DenmEventType type);
std::optional<DenmEventType> parse_denm_event_type(std::string_view text);

struct Cam {
  StationId station_id;
  double timestamp = 0.0;
  Vec2 position;  // after positioning noise
  Vec2 velocity;
  QuasiIds quasi_ids;
};

struct Denm {
  StationId station_id;
  double timestamp = 0.0;
  Vec2 event_position;
  DenmEventType event_type = DenmEventType::kHazard;
};

/// Tells neighbours to drop a retired identifier before silence starts.
struct DeactivationNotice {
  StationId station_id;
  double timestamp = 0.0;
};

using Message = std::variant<Cam, Denm, DeactivationNotice>;

const StationId& sender_of(const Message& msg);
double timestamp_of(const Message& msg);

/// Emission state of one periodic sender. Ticks are integers so the beacon
/// period is exact.
struct BeaconSource {
  std::optional<StationId> cam_id;  // active CAM pseudonym, if any
  bool in_silence = false;
  std::optional<std::int64_t> last_emission_tick;
  Vec2 true_position;
  Vec2 velocity;
  QuasiIds quasi_ids;
};

enum class EmitStatus { kNotDue, kSilent, kStarved, kEmitted };

struct EmitOutcome {
  EmitStatus status = EmitStatus::kNotDue;
  std::optional<Cam> cam;
};

/// Emits iff at least ticks_per_beacon ticks have passed since the last
/// emission and the source is not silent. A due emission without a valid
/// pseudonym is reported as starved and produces no message.
EmitOutcome emit_cam(BeaconSource& source, std::int64_t tick, double tick_s,
                     std::int64_t ticks_per_beacon, double positioning_sigma,
                     Rng& noise_rng);

}  // namespace psim::beaconing
