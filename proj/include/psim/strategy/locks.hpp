#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psim/common/result.hpp"

namespace psim::strategy {

struct LockLimits {
  double max_single_s = 255.0;
  double max_continuous_s = 900.0;
  std::uint32_t renewal_threshold = 3;  // grants per app before the network must approve
};

enum class LockDenial {
  kInvalidDuration,
  kOverMaxSingle,
  kOverCumulative,
  kBeyondPseudonymValidity,
  kNetworkRejected,
};
std::string_view to_string(LockDenial denial);

struct Lock {
  std::string app_id;
  double granted_at = 0.0;
  double expires_at = 0.0;  // active on [granted_at, expires_at)
};

/// Serving-network approval for renewals past the threshold.
using NetworkValidator = std::function<bool(std::string_view app_id, double now)>;

/// Pseudonym-change locks of one vehicle. A continuous locked window opens
/// with the first grant and closes after a tick that ends with no active
/// lock; the renewal counters reset with it.
class LockState {
 public:
  explicit LockState(LockLimits limits = {}) : limits_(limits) {}

  Result<Lock, LockDenial> request(const std::string& app_id, double duration_s,
                                   double now, double pseudonym_valid_until,
                                   const NetworkValidator& validator);

  bool locked_at(double now) const;
  /// Drops expired locks; closes the window if none remains active at now.
  void end_tick(double now);

  const std::vector<Lock>& active_locks() const { return locks_; }
  std::uint32_t renewal_count(const std::string& app_id) const;
  std::optional<double> cumulative_lock_start() const { return window_start_; }
  const LockLimits& limits() const { return limits_; }

 private:
  LockLimits limits_;
  std::vector<Lock> locks_;
  std::map<std::string, std::uint32_t> renewals_;
  std::optional<double> window_start_;
};

/// Convenience wrapper matching the request contract.
Result<Lock, LockDenial> request_lock(LockState& locks, const std::string& app_id,
                                      double duration_s, double now,
                                      double pseudonym_valid_until,
                                      const NetworkValidator& validator);

}  // namespace psim::strategy
