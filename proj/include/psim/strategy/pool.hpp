#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "psim/common/result.hpp"
#include "psim/sba/authorities.hpp"

namespace psim::strategy {

enum class Selection { kRoundRobin, kNoReuse };
std::string_view to_string(Selection selection);
std::optional<Selection> parse_selection(std::string_view text);

struct PoolSpec {
  std::size_t size = 20;
  std::size_t min_concurrent_valid = 2;
  Selection selection = Selection::kNoReuse;
  bool reuse_allowed = false;
  sba::TicketSchedule schedule;
  /// Tickets expiring within this horizon do not count towards the floor
  /// when deciding whether to replenish.
  double replenish_lead_s = 60.0;
};

/// Pre-fetched tickets of one application scope. At most one ticket is active.
class PseudonymPool {
 public:
  PseudonymPool(AppScope scope, PoolSpec spec);

  void add_batch(std::vector<sba::AuthorizationTicket> batch);

  /// Usable tickets valid at now, the active one included.
  std::size_t valid_count(double now) const;
  bool needs_replenish(double now) const;
  /// Tickets to request so the pool is back to its configured size.
  std::size_t replenish_count(double now) const;

  const sba::AuthorizationTicket* active() const;
  const sba::AuthorizationTicket* next_candidate(double now) const;

  struct Switch {
    std::optional<sba::AuthorizationTicket> retired;
    sba::AuthorizationTicket activated;
  };
  /// Retires the active ticket and activates the next one per selection.
  std::optional<Switch> activate_next(double now);

  /// Drops expired, inactive tickets.
  void prune(double now);

  bool ever_used(std::uint64_t at_id) const { return used_.count(at_id) > 0; }
  const std::vector<sba::AuthorizationTicket>& tickets() const { return tickets_; }
  const PoolSpec& spec() const { return spec_; }
  AppScope scope() const { return scope_; }

 private:
  std::optional<std::size_t> active_index() const;

  AppScope scope_;
  PoolSpec spec_;
  std::vector<sba::AuthorizationTicket> tickets_;
  std::optional<std::uint64_t> active_id_;
  std::set<std::uint64_t> used_;
};

/// Source of fresh tickets (the core network in a run, fakes in tests).
using TicketSource = std::function<Result<std::vector<sba::AuthorizationTicket>, std::string>(
    const sba::EnrollmentCertificate& ec, std::size_t count, AppScope scope,
    double now)>;

/// Restores the pool to its configured size when the floor is threatened.
/// Returns the number of tickets added; on error the pool is unchanged.
Result<std::size_t, std::string> replenish_pool(PseudonymPool& pool,
                                                const sba::EnrollmentCertificate& ec,
                                                const TicketSource& source,
                                                double now);

}  // namespace psim::strategy
