#include "psim/sba/authorities.hpp"

namespace psim::sba {

std::string_view to_string(EnrolError error) {
  switch (error) {
    case EnrolError::kInvalidSuci: return "invalid_suci";
    case EnrolError::kReplay: return "replayed_suci";
    case EnrolError::kUnknownSubscriber: return "unknown_subscriber";
  }
  return "unknown";
}

std::string_view to_string(ProvisionError error) {
  switch (error) {
    case ProvisionError::kInvalidCertificate: return "invalid_certificate";
    case ProvisionError::kExpiredCertificate: return "expired_certificate";
    case ProvisionError::kInvalidCount: return "invalid_count";
    case ProvisionError::kOverBatchCap: return "over_batch_cap";
  }
  return "unknown";
}

EnrolmentAuthority::EnrolmentAuthority(std::string instance_id,
                                       const crypto::Seed& key_seed,
                                       double ec_lifetime_s)
    : instance_id_(std::move(instance_id)),
      keys_(crypto::ed25519_from_seed(key_seed)),
      ec_lifetime_s_(ec_lifetime_s) {}

void EnrolmentAuthority::add_subscriber(const Supi& supi) {
  subscribers_.insert(supi_hash(supi));
}

Result<EnrollmentCertificate, EnrolError> EnrolmentAuthority::enroll(
    const HomeNetworkKeystore& keystore, const Suci& suci, double now) {
  auto supi = keystore.deconceal(suci);
  if (!supi) return EnrolError::kInvalidSuci;
  std::string nonce_key =
      suci.key_id + ":" +
      hex_encode(std::span<const std::uint8_t>(suci.ciphertext.data(), 32));
  if (!seen_nonces_.insert(nonce_key).second) return EnrolError::kReplay;
  std::string hash = supi_hash(*supi);
  if (!subscribers_.count(hash)) return EnrolError::kUnknownSubscriber;

  EnrollmentCertificate ec;
  ec.ec_id = instance_id_ + "-ec-" + std::to_string(next_serial_++);
  ec.subject_supi_hash = hash;
  ec.issued_at = now;
  ec.valid_until = now + ec_lifetime_s_;
  ec.issuer_signature = crypto::ed25519_sign(keys_, ec.signed_bytes());
  ledger_[ec.ec_id] = hash;
  return ec;
}

bool EnrolmentAuthority::verify_certificate(
    const EnrollmentCertificate& ec) const {
  return crypto::ed25519_verify(keys_.public_key, ec.signed_bytes(),
                                ec.issuer_signature);
}

Result<std::vector<AuthorizationTicket>, ProvisionError>
EnrolmentAuthority::request_tickets(AuthorizationAuthority& aa,
                                    const EnrollmentCertificate& ec,
                                    std::size_t count, AppScope scope,
                                    double now,
                                    const TicketSchedule& schedule) const {
  if (!verify_certificate(ec) || !ledger_.count(ec.ec_id)) {
    return ProvisionError::kInvalidCertificate;
  }
  return aa.provision_ticket_batch(ec, keys_.public_key, count, scope, now,
                                   schedule);
}

AuthorizationAuthority::AuthorizationAuthority(std::string instance_id,
                                               const crypto::Seed& key_seed,
                                               Rng rng, std::size_t batch_cap)
    : instance_id_(std::move(instance_id)),
      keys_(crypto::ed25519_from_seed(key_seed)),
      rng_(std::move(rng)),
      batch_cap_(batch_cap) {}

Result<std::vector<AuthorizationTicket>, ProvisionError>
AuthorizationAuthority::provision_ticket_batch(
    const EnrollmentCertificate& ec, std::span<const std::uint8_t> ea_public_key,
    std::size_t count, AppScope scope, double now,
    const TicketSchedule& schedule) {
  if (!crypto::ed25519_verify(ea_public_key, ec.signed_bytes(),
                              ec.issuer_signature)) {
    return ProvisionError::kInvalidCertificate;
  }
  if (!ec.valid_at(now)) return ProvisionError::kExpiredCertificate;
  if (count == 0) return ProvisionError::kInvalidCount;
  if (count > batch_cap_) return ProvisionError::kOverBatchCap;

  std::vector<AuthorizationTicket> batch;
  batch.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t at_id = 0;
    do {
      at_id = rng_.next_u64();
    } while (at_id == 0 || ledger_.count(at_id));

    AuthorizationTicket ticket;
    ticket.at_id = at_id;
    ticket.app_scope = scope;
    double delay = 0.0;
    if (k + 1 > schedule.immediate_count) {
      delay = static_cast<double>(k + 1 - schedule.immediate_count) *
              schedule.stagger_s;
    }
    ticket.valid_from = now + delay;
    ticket.valid_until = ticket.valid_from + schedule.validity_s;
    ticket.issuer_signature = crypto::ed25519_sign(keys_, ticket.signed_bytes());
    ledger_[at_id] = ec.ec_id;
    batch.push_back(std::move(ticket));
  }
  return batch;
}

bool AuthorizationAuthority::verify_ticket(
    const AuthorizationTicket& ticket) const {
  return crypto::ed25519_verify(keys_.public_key, ticket.signed_bytes(),
                                ticket.issuer_signature);
}

}  // namespace psim::sba
