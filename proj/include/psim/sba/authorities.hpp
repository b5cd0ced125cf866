#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "psim/common/rng.hpp"
#include "psim/sba/identity.hpp"

namespace psim::sba {

enum class EnrolError { kInvalidSuci, kReplay, kUnknownSubscriber };
std::string_view to_string(EnrolError error);

enum class ProvisionError {
  kInvalidCertificate,
  kExpiredCertificate,
  kInvalidCount,
  kOverBatchCap,
};
std::string_view to_string(ProvisionError error);

/// Validity layout of a ticket batch. The first `immediate_count` tickets
/// start at issuance; ticket k > immediate_count - 1 starts
/// (k - immediate_count + 1) * stagger_s later. Every ticket lasts validity_s.
struct TicketSchedule {
  double validity_s = 3600.0;
  double stagger_s = 0.0;
  std::size_t immediate_count = 2;
};

class AuthorizationAuthority;

/// Issues enrolment certificates. Holds the only ec_id -> SUPI-hash map.
class EnrolmentAuthority {
 public:
  EnrolmentAuthority(std::string instance_id, const crypto::Seed& key_seed,
                     double ec_lifetime_s);

  void add_subscriber(const Supi& supi);

  Result<EnrollmentCertificate, EnrolError> enroll(
      const HomeNetworkKeystore& keystore, const Suci& suci, double now);

  bool verify_certificate(const EnrollmentCertificate& ec) const;

  /// Butterfly provisioning: the EA asks the AA for tickets on the vehicle's
  /// behalf, so the AA learns only the ec_id.
  Result<std::vector<AuthorizationTicket>, ProvisionError> request_tickets(
      AuthorizationAuthority& aa, const EnrollmentCertificate& ec,
      std::size_t count, AppScope scope, double now,
      const TicketSchedule& schedule) const;

  const std::array<std::uint8_t, 32>& public_key() const { return keys_.public_key; }
  const std::string& instance_id() const { return instance_id_; }
  const std::map<std::string, std::string>& ledger() const { return ledger_; }

 private:
  std::string instance_id_;
  crypto::SigningKeyPair keys_;
  double ec_lifetime_s_;
  std::set<std::string> subscribers_;   // SUPI hashes
  std::set<std::string> seen_nonces_;   // ephemeral keys, hex
  std::map<std::string, std::string> ledger_;  // ec_id -> SUPI hash
  std::uint64_t next_serial_ = 1;
};

/// Issues Authorization Tickets. Its ledger maps at_id -> ec_id only.
class AuthorizationAuthority {
 public:
  AuthorizationAuthority(std::string instance_id, const crypto::Seed& key_seed,
                         Rng rng, std::size_t batch_cap);

  Result<std::vector<AuthorizationTicket>, ProvisionError> provision_ticket_batch(
      const EnrollmentCertificate& ec,
      std::span<const std::uint8_t> ea_public_key, std::size_t count,
      AppScope scope, double now, const TicketSchedule& schedule);

  bool verify_ticket(const AuthorizationTicket& ticket) const;

  const std::map<std::uint64_t, std::string>& ledger() const { return ledger_; }
  const std::string& instance_id() const { return instance_id_; }
  std::size_t batch_cap() const { return batch_cap_; }

 private:
  std::string instance_id_;
  crypto::SigningKeyPair keys_;
  Rng rng_;
  std::size_t batch_cap_;
  std::map<std::uint64_t, std::string> ledger_;
};

}  // namespace psim::sba
