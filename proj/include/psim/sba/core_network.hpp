#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psim/common/rng.hpp"
#include "psim/sba/authorities.hpp"
#include "psim/sba/identity.hpp"
#include "psim/sba/nrf.hpp"

namespace psim::sba {

inline constexpr std::string_view kEnrolmentService = "enrolment";
inline constexpr std::string_view kProvisioningService = "at-provisioning";
inline constexpr std::string_view kV2xMessagingService = "v2x-msg";

/// Optional explicit key material; anything left empty is derived from the
/// run seed.
struct KeyMaterial {
  std::optional<Bytes> nrf_mac_secret;
  std::optional<crypto::Seed> nrf_signing_seed;
  std::optional<crypto::Seed> ea_seed;
  std::optional<crypto::Seed> aa_seed;
  std::optional<crypto::Seed> home_network_seed;
};

struct CoreNetworkConfig {
  double token_ttl_s = 300.0;
  double ec_lifetime_s = 86400.0;
  SigScheme sig_scheme = SigScheme::kMacSharedSecret;
  std::size_t batch_cap = 100;
  std::vector<PolicyRule> policy = default_policy();
  KeyMaterial keys;

  static std::vector<PolicyRule> default_policy();
};

struct CoreError {
  std::string stage;   // token | service | enrolment | provisioning
  std::string reason;
};

struct SbaAudit {
  std::uint64_t tokens_issued = 0;
  std::uint64_t tokens_denied = 0;
  std::map<std::string, std::uint64_t> tokens_denied_by_reason;
  std::uint64_t service_accepts = 0;
  std::uint64_t service_rejects = 0;
  std::map<std::string, std::uint64_t> verification_failures_by_cause;
  std::uint64_t enrolments = 0;
  std::uint64_t enrolments_rejected = 0;
  std::uint64_t ticket_batches = 0;
  std::uint64_t tickets_issued = 0;
  std::uint64_t provisioning_failures = 0;
};

/// In-process 5G core: home keystore, NRF, EA, AA and the AMF acting as
/// the OAuth2 client for vehicles. Owns all state; movable between threads.
class CoreNetwork {
 public:
  CoreNetwork(CoreNetworkConfig config, Rng rng);

  const HomeNetworkKeystore& keystore() const { return keystore_; }
  const std::string& home_key_id() const { return home_key_id_; }
  void add_subscriber(const Supi& supi) { ea_.add_subscriber(supi); }

  Result<EnrollmentCertificate, CoreError> enroll(const Suci& suci, double now);

  Result<std::vector<AuthorizationTicket>, CoreError> provision(
      const EnrollmentCertificate& ec, std::size_t count, AppScope scope,
      double now, const TicketSchedule& schedule);

  /// Token-verified request to a producer of the given type; used for the
  /// V2X application service and exposed for tests.
  Result<TokenClaims, CoreError> service_request(NfType producer_type,
                                                 std::string_view service,
                                                 double now);

  Nrf& nrf() { return nrf_; }
  const Nrf& nrf() const { return nrf_; }
  const EnrolmentAuthority& ea() const { return ea_; }
  const AuthorizationAuthority& aa() const { return aa_; }
  const std::string& amf_id() const { return amf_id_; }
  std::optional<NfProfile> producer_profile(NfType type) const;

  SbaAudit audit() const;

 private:
  Result<AccessToken, CoreError> token_for(NfType target,
                                           std::string_view service,
                                           double now);
  std::optional<CoreError> authorize(NfType target, std::string_view service,
                                     double now);

  CoreNetworkConfig config_;
  HomeNetworkKeystore keystore_;
  std::string home_key_id_ = "hn-key-1";
  Nrf nrf_;
  EnrolmentAuthority ea_;
  AuthorizationAuthority aa_;
  std::string amf_id_ = "amf-0";
  std::map<NfType, NfProfile> producers_;
  std::map<std::pair<NfType, std::string>, AccessToken> token_cache_;
  SbaAudit audit_;
};

}  // namespace psim::sba
