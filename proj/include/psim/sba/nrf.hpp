#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psim/common/result.hpp"
#include "psim/sba/token.hpp"

namespace psim::sba {

enum class NfStatus { kAvailable, kUnavailable };

struct NfProfile {
  std::string nf_instance_id;
  NfType nf_type = NfType::kAmf;
  std::vector<std::string> services;
  std::optional<std::vector<ResourceGrant>> additional_scope;
  NfStatus status = NfStatus::kAvailable;
};

struct RegistrationAck {
  std::string nf_instance_id;
};

enum class RegistrationError { kDuplicateInstance, kInvalidProfile };
std::string_view to_string(RegistrationError error);

/// OAuth2 error response: machine code plus a human description.
struct OAuthError {
  enum class Code {
    kInvalidClient,        // consumer unknown or not mutually authenticated
    kInvalidRequest,       // empty scope
    kScopeNotGranted,      // policy does not allow the requested scope
    kUnknownTargetNfType,  // no available producer of the requested type
  };
  Code code;
  std::string description;

  std::string_view error() const;
};

/// One grant of the authorization policy: consumers of `consumer_type` may
/// obtain tokens for `services` offered by producers of `target_type`.
struct PolicyRule {
  NfType consumer_type;
  NfType target_type;
  std::vector<std::string> services;
};

struct NrfConfig {
  std::string instance_id = "nrf-0";
  double token_ttl_s = 300.0;
  std::vector<PolicyRule> policy;
};

struct NrfAudit {
  std::uint64_t registrations = 0;
  std::uint64_t registrations_rejected = 0;
  std::uint64_t tokens_issued = 0;
  std::uint64_t tokens_denied = 0;
  std::map<std::string, std::uint64_t> denied_by_reason;
};

/// Registry, discovery and OAuth2 authorization server.
class Nrf {
 public:
  Nrf(NrfConfig config, TokenSigningKey signing_key);

  Result<RegistrationAck, RegistrationError> register_nf(
      NfProfile profile, bool mutually_authenticated = true);
  bool set_status(std::string_view nf_instance_id, NfStatus status);
  bool set_mutually_authenticated(std::string_view nf_instance_id, bool value);

  /// Available profiles of the type offering the service, ordered by id.
  std::vector<NfProfile> discover(NfType requested_nf_type,
                                  std::string_view requested_service) const;

  Result<AccessToken, OAuthError> request_access_token(
      std::string_view consumer, const std::vector<std::string>& scope,
      NfType target_nf_type, double now,
      const std::optional<std::vector<ResourceGrant>>& additional_scope =
          std::nullopt);

  TokenVerificationKey verification_key() const;
  const std::string& instance_id() const { return config_.instance_id; }
  const NrfAudit& audit() const { return audit_; }

 private:
  struct Entry {
    NfProfile profile;
    bool mutually_authenticated = false;
  };

  OAuthError deny(OAuthError::Code code, std::string description);

  NrfConfig config_;
  TokenSigningKey signing_key_;
  std::map<std::string, Entry, std::less<>> registry_;
  NrfAudit audit_;
};

enum class VerifyError { kMalformed, kBadSignature, kExpired, kAudienceMismatch, kScopeMismatch };
std::string_view to_string(VerifyError error);

/// Integrity first, then claims: now < exp, audience = producer type and
/// the requested service listed in scope.
Result<TokenClaims, VerifyError> verify_access_token(
    const AccessToken& token, const NfProfile& producer,
    const TokenVerificationKey& key, std::string_view service, double now);

struct ServiceResponse {
  bool accepted = false;
  std::optional<VerifyError> cause;
  bool reregister = false;
  std::optional<TokenClaims> claims;
};

/// Service Accept iff the token verifies. Reject policy: expired or bad
/// signature ask the UE to re-register; claim mismatches do not.
ServiceResponse authorize_service_request(const AccessToken& token,
                                          std::string_view service,
                                          const NfProfile& producer,
                                          const TokenVerificationKey& key,
                                          double now);

}  // namespace psim::sba
