#include "psim/strategy/locks.hpp"

#include <algorithm>

#include "psim/common/types.hpp"

namespace psim::strategy {

std::string_view to_string(LockDenial denial) {
  switch (denial) {
    case LockDenial::kInvalidDuration: return "invalid_duration";
    case LockDenial::kOverMaxSingle: return "over_max_single";
    case LockDenial::kOverCumulative: return "over_cumulative";
    case LockDenial::kBeyondPseudonymValidity: return "beyond_pseudonym_validity";
    case LockDenial::kNetworkRejected: return "network_rejected";
  }
  return "unknown";
}

Result<Lock, LockDenial> LockState::request(const std::string& app_id,
                                            double duration_s, double now,
                                            double pseudonym_valid_until,
                                            const NetworkValidator& validator) {
  if (!(duration_s > 0.0)) return LockDenial::kInvalidDuration;
  if (duration_s > limits_.max_single_s) return LockDenial::kOverMaxSingle;

  double expires = now + duration_s;
  double start = window_start_.value_or(now);
  double end = expires;
  for (const auto& l : locks_) end = std::max(end, l.expires_at);
  if (end - start > limits_.max_continuous_s + kTimeEpsilon) {
    return LockDenial::kOverCumulative;
  }
  if (expires > pseudonym_valid_until + kTimeEpsilon) {
    return LockDenial::kBeyondPseudonymValidity;
  }
  std::uint32_t& count = renewals_[app_id];
  if (count >= limits_.renewal_threshold &&
      !(validator && validator(app_id, now))) {
    return LockDenial::kNetworkRejected;
  }

  ++count;
  if (!window_start_) window_start_ = now;
  Lock lock{app_id, now, expires};
  locks_.push_back(lock);
  return lock;
}

bool LockState::locked_at(double now) const {
  return std::any_of(locks_.begin(), locks_.end(), [&](const Lock& l) {
    return l.granted_at <= now && now < l.expires_at;
  });
}

void LockState::end_tick(double now) {
  std::erase_if(locks_, [&](const Lock& l) { return !(now < l.expires_at); });
  if (locks_.empty()) {
    window_start_.reset();
    renewals_.clear();
  }
}

std::uint32_t LockState::renewal_count(const std::string& app_id) const {
  auto it = renewals_.find(app_id);
  return it == renewals_.end() ? 0 : it->second;
}

Result<Lock, LockDenial> request_lock(LockState& locks, const std::string& app_id,
                                      double duration_s, double now,
                                      double pseudonym_valid_until,
                                      const NetworkValidator& validator) {
  return locks.request(app_id, duration_s, now, pseudonym_valid_until, validator);
}

}  // namespace psim::strategy
