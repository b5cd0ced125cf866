#include "psim/sba/core_network.hpp"

#include <algorithm>

namespace psim::sba {

namespace {

crypto::Seed seed_from(Rng& rng) {
  crypto::Seed seed{};
  Bytes b = rng.bytes(seed.size());
  std::copy(b.begin(), b.end(), seed.begin());
  return seed;
}

TokenSigningKey make_nrf_key(const CoreNetworkConfig& config, Rng& rng) {
  // Draw both so the stream position does not depend on the scheme.
  Bytes mac = rng.bytes(32);
  crypto::Seed sign_seed = seed_from(rng);
  if (config.sig_scheme == SigScheme::kMacSharedSecret) {
    return TokenSigningKey::mac(config.keys.nrf_mac_secret.value_or(mac));
  }
  return TokenSigningKey::asymmetric(
      config.keys.nrf_signing_seed.value_or(sign_seed));
}

}  // namespace

std::vector<PolicyRule> CoreNetworkConfig::default_policy() {
  return {
      {NfType::kAmf, NfType::kEa, {std::string(kEnrolmentService)}},
      {NfType::kAmf, NfType::kAa, {std::string(kProvisioningService)}},
      {NfType::kAmf, NfType::kV2xAf, {std::string(kV2xMessagingService)}},
  };
}

CoreNetwork::CoreNetwork(CoreNetworkConfig config, Rng rng)
    : config_(std::move(config)),
      nrf_(NrfConfig{"nrf-0", config_.token_ttl_s, config_.policy},
           make_nrf_key(config_, rng)),
      ea_("ea-0", config_.keys.ea_seed.value_or(seed_from(rng)),
          config_.ec_lifetime_s),
      aa_("aa-0", config_.keys.aa_seed.value_or(seed_from(rng)),
          rng.fork("aa"), config_.batch_cap) {
  keystore_.add_key(home_key_id_,
                    config_.keys.home_network_seed.value_or(seed_from(rng)));

  std::vector<NfProfile> profiles = {
      {amf_id_, NfType::kAmf, {"namf-comm"}, std::nullopt, NfStatus::kAvailable},
      {"ea-0", NfType::kEa, {std::string(kEnrolmentService)}, std::nullopt,
       NfStatus::kAvailable},
      {"aa-0", NfType::kAa, {std::string(kProvisioningService)},
       std::vector<ResourceGrant>{{"authorization-tickets", {"create"}}},
       NfStatus::kAvailable},
      {"v2xaf-0", NfType::kV2xAf, {std::string(kV2xMessagingService)},
       std::nullopt, NfStatus::kAvailable},
  };
  for (auto& p : profiles) {
    if (p.nf_type != NfType::kAmf) producers_[p.nf_type] = p;
    nrf_.register_nf(std::move(p), true);
  }
}

std::optional<NfProfile> CoreNetwork::producer_profile(NfType type) const {
  auto it = producers_.find(type);
  if (it == producers_.end()) return std::nullopt;
  return it->second;
}

Result<AccessToken, CoreError> CoreNetwork::token_for(NfType target,
                                                      std::string_view service,
                                                      double now) {
  auto key = std::make_pair(target, std::string(service));
  auto it = token_cache_.find(key);
  if (it != token_cache_.end() && now < it->second.claims.expiration) {
    return it->second;
  }
  auto token = nrf_.request_access_token(amf_id_, {std::string(service)},
                                         target, now);
  if (!token) {
    return CoreError{"token", std::string(token.error().error())};
  }
  token_cache_[key] = token.value();
  return std::move(token.value());
}

std::optional<CoreError> CoreNetwork::authorize(NfType target,
                                                std::string_view service,
                                                double now) {
  auto producer = producer_profile(target);
  if (!producer) return CoreError{"service", "no_producer"};
  auto discovered = nrf_.discover(target, service);
  if (discovered.empty()) return CoreError{"service", "discovery_empty"};

  for (int attempt = 0; attempt < 2; ++attempt) {
    auto token = token_for(target, service, now);
    if (!token) return token.error();
    ServiceResponse response = authorize_service_request(
        token.value(), service, *producer, nrf_.verification_key(), now);
    if (response.accepted) {
      ++audit_.service_accepts;
      return std::nullopt;
    }
    ++audit_.service_rejects;
    std::string cause(to_string(*response.cause));
    ++audit_.verification_failures_by_cause[cause];
    if (!response.reregister) return CoreError{"service", cause};
    token_cache_.erase(std::make_pair(target, std::string(service)));
  }
  return CoreError{"service", "rejected_after_reregistration"};
}

Result<EnrollmentCertificate, CoreError> CoreNetwork::enroll(const Suci& suci,
                                                             double now) {
  if (auto err = authorize(NfType::kEa, kEnrolmentService, now)) {
    ++audit_.enrolments_rejected;
    return *err;
  }
  auto ec = ea_.enroll(keystore_, suci, now);
  if (!ec) {
    ++audit_.enrolments_rejected;
    return CoreError{"enrolment", std::string(to_string(ec.error()))};
  }
  ++audit_.enrolments;
  return std::move(ec.value());
}

Result<std::vector<AuthorizationTicket>, CoreError> CoreNetwork::provision(
    const EnrollmentCertificate& ec, std::size_t count, AppScope scope,
    double now, const TicketSchedule& schedule) {
  if (auto err = authorize(NfType::kAa, kProvisioningService, now)) {
    ++audit_.provisioning_failures;
    return *err;
  }
  auto batch = ea_.request_tickets(aa_, ec, count, scope, now, schedule);
  if (!batch) {
    ++audit_.provisioning_failures;
    return CoreError{"provisioning", std::string(to_string(batch.error()))};
  }
  ++audit_.ticket_batches;
  audit_.tickets_issued += batch->size();
  return std::move(batch.value());
}

Result<TokenClaims, CoreError> CoreNetwork::service_request(
    NfType producer_type, std::string_view service, double now) {
  if (auto err = authorize(producer_type, service, now)) return *err;
  auto token = token_for(producer_type, service, now);
  if (!token) return token.error();
  return token->claims;
}

SbaAudit CoreNetwork::audit() const {
  SbaAudit out = audit_;
  out.tokens_issued = nrf_.audit().tokens_issued;
  out.tokens_denied = nrf_.audit().tokens_denied;
  out.tokens_denied_by_reason = nrf_.audit().denied_by_reason;
  return out;
}

}  // namespace psim::sba
