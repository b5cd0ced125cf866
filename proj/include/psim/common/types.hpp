#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace psim {

/// Index of a simulated vehicle within its run. Ground truth only.
using VehicleId = std::uint32_t;

enum class AppScope { kCam, kDenm, kOther };

inline std::string_view to_string(AppScope scope) {
  switch (scope) {
    case AppScope::kCam: return "CAM";
    case AppScope::kDenm: return "DENM";
    case AppScope::kOther: return "other";
  }
  return "other";
}

inline std::optional<AppScope> parse_app_scope(std::string_view text) {
  if (text == "CAM") return AppScope::kCam;
  if (text == "DENM") return AppScope::kDenm;
  if (text == "other") return AppScope::kOther;
  return std::nullopt;
}

/// Slack used when comparing accumulated simulated times against
/// configured thresholds.
inline constexpr double kTimeEpsilon = 1e-9;

}  // namespace psim
