#include "psim/strategy/pool.hpp"

#include <algorithm>

namespace psim::strategy {

std::string_view to_string(Selection selection) {
  return selection == Selection::kRoundRobin ? "round_robin" : "no_reuse";
}

std::optional<Selection> parse_selection(std::string_view text) {
  if (text == "round_robin") return Selection::kRoundRobin;
  if (text == "no_reuse") return Selection::kNoReuse;
  return std::nullopt;
}

PseudonymPool::PseudonymPool(AppScope scope, PoolSpec spec)
    : scope_(scope), spec_(std::move(spec)) {
  if (spec_.selection == Selection::kNoReuse) spec_.reuse_allowed = false;
}

void PseudonymPool::add_batch(std::vector<sba::AuthorizationTicket> batch) {
  for (auto& t : batch) {
    if (t.app_scope != scope_) continue;
    tickets_.push_back(std::move(t));
  }
}

std::size_t PseudonymPool::valid_count(double now) const {
  return static_cast<std::size_t>(std::count_if(
      tickets_.begin(), tickets_.end(),
      [&](const auto& t) { return t.valid_at(now); }));
}

bool PseudonymPool::needs_replenish(double now) const {
  double horizon = now + spec_.replenish_lead_s;
  auto lasting = std::count_if(tickets_.begin(), tickets_.end(), [&](const auto& t) {
    return t.valid_at(now) && horizon < t.valid_until;
  });
  return valid_count(now) < spec_.min_concurrent_valid ||
         static_cast<std::size_t>(lasting) < spec_.min_concurrent_valid;
}

std::size_t PseudonymPool::replenish_count(double now) const {
  double horizon = now + spec_.replenish_lead_s;
  auto lasting = static_cast<std::size_t>(
      std::count_if(tickets_.begin(), tickets_.end(), [&](const auto& t) {
        return t.valid_until > horizon;
      }));
  return lasting >= spec_.size ? 0 : spec_.size - lasting;
}

std::optional<std::size_t> PseudonymPool::active_index() const {
  if (!active_id_) return std::nullopt;
  for (std::size_t i = 0; i < tickets_.size(); ++i) {
    if (tickets_[i].at_id == *active_id_) return i;
  }
  return std::nullopt;
}

const sba::AuthorizationTicket* PseudonymPool::active() const {
  auto idx = active_index();
  return idx ? &tickets_[*idx] : nullptr;
}

const sba::AuthorizationTicket* PseudonymPool::next_candidate(double now) const {
  if (tickets_.empty()) return nullptr;
  auto idx = active_index();
  std::size_t n = tickets_.size();
  // Round robin starts just after the active ticket; no-reuse scans in order.
  std::size_t start = 0;
  if (spec_.selection == Selection::kRoundRobin && idx) start = (*idx + 1) % n;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = (start + k) % n;
    const auto& t = tickets_[i];
    if (idx && i == *idx) continue;
    if (!t.valid_at(now)) continue;
    if (!spec_.reuse_allowed && used_.count(t.at_id)) continue;
    return &t;
  }
  return nullptr;
}

std::optional<PseudonymPool::Switch> PseudonymPool::activate_next(double now) {
  const auto* next = next_candidate(now);
  if (!next) return std::nullopt;
  Switch sw;
  sw.activated = *next;
  if (const auto* current = active()) sw.retired = *current;
  active_id_ = sw.activated.at_id;
  used_.insert(sw.activated.at_id);
  if (sw.retired && !spec_.reuse_allowed) {
    std::uint64_t gone = sw.retired->at_id;
    std::erase_if(tickets_, [&](const auto& t) { return t.at_id == gone; });
  }
  return sw;
}

void PseudonymPool::prune(double now) {
  std::erase_if(tickets_, [&](const auto& t) {
    return !(now < t.valid_until) && !(active_id_ && *active_id_ == t.at_id);
  });
}

Result<std::size_t, std::string> replenish_pool(
    PseudonymPool& pool, const sba::EnrollmentCertificate& ec,
    const TicketSource& source, double now) {
  if (!ec.valid_at(now)) return std::string("expired_certificate");
  if (!pool.needs_replenish(now)) return std::size_t{0};
  std::size_t count = pool.replenish_count(now);
  if (count == 0) return std::size_t{0};
  auto batch = source(ec, count, pool.scope(), now);
  if (!batch) return batch.error();
  std::size_t added = batch->size();
  pool.add_batch(std::move(batch.value()));
  return added;
}

}  // namespace psim::strategy
