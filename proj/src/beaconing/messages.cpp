#include "psim/beaconing/messages.hpp"

#include <cstdio>

#include "psim/common/bytes.hpp"
#include "psim/mobility/kinematics.hpp"

namespace psim::beaconing {

namespace {

constexpr std::uint64_t kMulA = 0xbf58476d1ce4e5b9ULL;
constexpr std::uint64_t kMulB = 0x94d049bb133111ebULL;

// Modular inverses of the odd multipliers above.
constexpr std::uint64_t inverse(std::uint64_t a) {
  std::uint64_t x = a;
  for (int i = 0; i < 6; ++i) x *= 2 - a * x;
  return x;
}

constexpr std::uint64_t kInvA = inverse(kMulA);
constexpr std::uint64_t kInvB = inverse(kMulB);

std::uint64_t scope_salt(AppScope scope) {
  switch (scope) {
    case AppScope::kCam: return 0x43414d0000000001ULL;
    case AppScope::kDenm: return 0x44454e4d00000002ULL;
    case AppScope::kOther: return 0x4f54480000000003ULL;
  }
  return 0;
}

std::uint64_t unshift_xor(std::uint64_t y, int shift) {
  std::uint64_t x = y;
  for (int i = 0; i < 64 / shift + 1; ++i) x = y ^ (x >> shift);
  return x;
}

}  // namespace

std::string StationId::to_string() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

StationId station_id_for(std::uint64_t at_id, AppScope scope) {
  std::uint64_t z = at_id ^ scope_salt(scope);
  z = (z ^ (z >> 30)) * kMulA;
  z = (z ^ (z >> 27)) * kMulB;
  z = z ^ (z >> 31);
  return StationId{z, scope};
}

std::uint64_t at_id_of(const StationId& id) {
  std::uint64_t z = unshift_xor(id.value, 31);
  z *= kInvB;
  z = unshift_xor(z, 27);
  z *= kInvA;
  z = unshift_xor(z, 30);
  return z ^ scope_salt(id.scope);
}

std::optional<std::uint64_t> parse_station_value(std::string_view hex) {
  if (hex.size() != 16) return std::nullopt;
  auto bytes = hex_decode(hex);
  if (!bytes) return std::nullopt;
  std::uint64_t v = 0;
  for (auto b : *bytes) v = (v << 8) | b;
  return v;
}

std::string_view to_string(DenmEventType type) {
  switch (type) {
    case DenmEventType::kHazard: return "hazard";
    case DenmEventType::kAccident: return "accident";
    case DenmEventType::kRoadwork: return "roadwork";
    case DenmEventType::kWeather: return "weather";
  }
  return "hazard";
}

std::optional<DenmEventType> parse_denm_event_type(std::string_view text) {
  if (text == "hazard") return DenmEventType::kHazard;
  if (text == "accident") return DenmEventType::kAccident;
  if (text == "roadwork") return DenmEventType::kRoadwork;
  if (text == "weather") return DenmEventType::kWeather;
  return std::nullopt;
}

const StationId& sender_of(const Message& msg) {
  return std::visit([](const auto& m) -> const StationId& { return m.station_id; },
                    msg);
}

double timestamp_of(const Message& msg) {
  return std::visit([](const auto& m) { return m.timestamp; }, msg);
}

EmitOutcome emit_cam(BeaconSource& source, std::int64_t tick, double tick_s,
                     std::int64_t ticks_per_beacon, double positioning_sigma,
                     Rng& noise_rng) {
  EmitOutcome out;
  bool due = !source.last_emission_tick ||
             tick - *source.last_emission_tick >= ticks_per_beacon;
  if (!due) return out;
  if (source.in_silence) {
    out.status = EmitStatus::kSilent;
    return out;
  }
  if (!source.cam_id) {
    // The slot is consumed; starvation is counted once per beacon period.
    source.last_emission_tick = tick;
    out.status = EmitStatus::kStarved;
    return out;
  }
  Cam cam;
  cam.station_id = *source.cam_id;
  cam.timestamp = static_cast<double>(tick) * tick_s;
  cam.position = mobility::positioning_noise(source.true_position,
                                             positioning_sigma, noise_rng);
  cam.velocity = source.velocity;
  cam.quasi_ids = source.quasi_ids;
  source.last_emission_tick = tick;
  out.status = EmitStatus::kEmitted;
  out.cam = cam;
  return out;
}

}  // namespace psim::beaconing
