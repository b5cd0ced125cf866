#include "psim/sba/nrf.hpp"

#include <algorithm>

namespace psim::sba {

std::string_view to_string(RegistrationError error) {
  switch (error) {
    case RegistrationError::kDuplicateInstance: return "duplicate_instance";
    case RegistrationError::kInvalidProfile: return "invalid_profile";
  }
  return "unknown";
}

std::string_view OAuthError::error() const {
  switch (code) {
    case Code::kInvalidClient: return "invalid_client";
    case Code::kInvalidRequest: return "invalid_request";
    case Code::kScopeNotGranted: return "scope_not_granted";
    case Code::kUnknownTargetNfType: return "unknown_target_nf_type";
  }
  return "invalid_request";
}

std::string_view to_string(VerifyError error) {
  switch (error) {
    case VerifyError::kMalformed: return "malformed";
    case VerifyError::kBadSignature: return "bad_signature";
    case VerifyError::kExpired: return "expired";
    case VerifyError::kAudienceMismatch: return "audience_mismatch";
    case VerifyError::kScopeMismatch: return "scope_mismatch";
  }
  return "unknown";
}

Nrf::Nrf(NrfConfig config, TokenSigningKey signing_key)
    : config_(std::move(config)), signing_key_(std::move(signing_key)) {}

Result<RegistrationAck, RegistrationError> Nrf::register_nf(
    NfProfile profile, bool mutually_authenticated) {
  if (profile.nf_instance_id.empty()) {
    ++audit_.registrations_rejected;
    return RegistrationError::kInvalidProfile;
  }
  auto it = registry_.find(profile.nf_instance_id);
  if (it != registry_.end() &&
      it->second.profile.status == NfStatus::kAvailable) {
    ++audit_.registrations_rejected;
    return RegistrationError::kDuplicateInstance;
  }
  profile.status = NfStatus::kAvailable;
  RegistrationAck ack{profile.nf_instance_id};
  std::string id = profile.nf_instance_id;
  registry_[id] = Entry{std::move(profile), mutually_authenticated};
  ++audit_.registrations;
  return ack;
}

bool Nrf::set_status(std::string_view nf_instance_id, NfStatus status) {
  auto it = registry_.find(nf_instance_id);
  if (it == registry_.end()) return false;
  it->second.profile.status = status;
  return true;
}

bool Nrf::set_mutually_authenticated(std::string_view nf_instance_id,
                                     bool value) {
  auto it = registry_.find(nf_instance_id);
  if (it == registry_.end()) return false;
  it->second.mutually_authenticated = value;
  return true;
}

std::vector<NfProfile> Nrf::discover(NfType requested_nf_type,
                                     std::string_view requested_service) const {
  std::vector<NfProfile> out;
  for (const auto& [id, entry] : registry_) {
    const auto& p = entry.profile;
    if (p.status != NfStatus::kAvailable || p.nf_type != requested_nf_type) {
      continue;
    }
    if (std::find(p.services.begin(), p.services.end(), requested_service) !=
        p.services.end()) {
      out.push_back(p);
    }
  }
  return out;
}

OAuthError Nrf::deny(OAuthError::Code code, std::string description) {
  OAuthError err{code, std::move(description)};
  ++audit_.tokens_denied;
  ++audit_.denied_by_reason[std::string(err.error())];
  return err;
}

Result<AccessToken, OAuthError> Nrf::request_access_token(
    std::string_view consumer, const std::vector<std::string>& scope,
    NfType target_nf_type, double now,
    const std::optional<std::vector<ResourceGrant>>& additional_scope) {
  auto it = registry_.find(consumer);
  if (it == registry_.end() || !it->second.mutually_authenticated ||
      it->second.profile.status != NfStatus::kAvailable) {
    return deny(OAuthError::Code::kInvalidClient,
                "consumer is not registered and authenticated");
  }
  if (scope.empty()) {
    return deny(OAuthError::Code::kInvalidRequest, "scope is empty");
  }

  bool producer_exists = false;
  std::vector<ResourceGrant> grantable;
  for (const auto& [id, entry] : registry_) {
    const auto& p = entry.profile;
    if (p.status == NfStatus::kAvailable && p.nf_type == target_nf_type) {
      producer_exists = true;
      if (p.additional_scope) {
        grantable.insert(grantable.end(), p.additional_scope->begin(),
                         p.additional_scope->end());
      }
    }
  }
  if (!producer_exists) {
    return deny(OAuthError::Code::kUnknownTargetNfType,
                "no available producer of type " +
                    std::string(to_string(target_nf_type)));
  }

  NfType consumer_type = it->second.profile.nf_type;
  bool granted = std::any_of(
      config_.policy.begin(), config_.policy.end(), [&](const PolicyRule& r) {
        if (r.consumer_type != consumer_type || r.target_type != target_nf_type) {
          return false;
        }
        return std::all_of(scope.begin(), scope.end(), [&](const auto& s) {
          return std::find(r.services.begin(), r.services.end(), s) !=
                 r.services.end();
        });
      });
  if (!granted) {
    return deny(OAuthError::Code::kScopeNotGranted,
                "policy does not grant the requested scope");
  }

  if (additional_scope) {
    for (const auto& want : *additional_scope) {
      bool covered = std::any_of(grantable.begin(), grantable.end(),
                                 [&](const ResourceGrant& have) {
        if (have.resource != want.resource) return false;
        return std::all_of(want.allowed_operations.begin(),
                           want.allowed_operations.end(), [&](const auto& op) {
                             return std::find(have.allowed_operations.begin(),
                                              have.allowed_operations.end(),
                                              op) !=
                                    have.allowed_operations.end();
                           });
      });
      if (!covered) {
        return deny(OAuthError::Code::kScopeNotGranted,
                    "additional scope not offered by producer: " +
                        want.resource);
      }
    }
  }

  TokenClaims claims;
  claims.issuer = config_.instance_id;
  claims.subject = std::string(consumer);
  claims.audience = target_nf_type;
  claims.scope = scope;
  claims.additional_scope = additional_scope;
  claims.expiration = now + config_.token_ttl_s;
  ++audit_.tokens_issued;
  return sign_token(claims, signing_key_);
}

TokenVerificationKey Nrf::verification_key() const {
  return TokenVerificationKey::from(signing_key_);
}

Result<TokenClaims, VerifyError> verify_access_token(
    const AccessToken& token, const NfProfile& producer,
    const TokenVerificationKey& key, std::string_view service, double now) {
  if (!verify_token_signature(token, key)) return VerifyError::kBadSignature;
  // Claims are always re-read from the signed bytes.
  auto claims = decode_claims(token.claims_bytes);
  if (!claims) return VerifyError::kMalformed;
  if (!(now < claims->expiration)) return VerifyError::kExpired;
  if (claims->audience != producer.nf_type) return VerifyError::kAudienceMismatch;
  if (std::find(claims->scope.begin(), claims->scope.end(), service) ==
      claims->scope.end()) {
    return VerifyError::kScopeMismatch;
  }
  return std::move(*claims);
}

ServiceResponse authorize_service_request(const AccessToken& token,
                                          std::string_view service,
                                          const NfProfile& producer,
                                          const TokenVerificationKey& key,
                                          double now) {
  ServiceResponse response;
  auto verified = verify_access_token(token, producer, key, service, now);
  if (verified) {
    response.accepted = true;
    response.claims = std::move(verified.value());
    return response;
  }
  response.cause = verified.error();
  switch (verified.error()) {
    case VerifyError::kExpired:
    case VerifyError::kBadSignature:
    case VerifyError::kMalformed:
      response.reregister = true;
      break;
    case VerifyError::kAudienceMismatch:
    case VerifyError::kScopeMismatch:
      response.reregister = false;
      break;
  }
  return response;
}

}  // namespace psim::sba
