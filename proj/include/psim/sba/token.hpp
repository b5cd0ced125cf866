#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psim/common/bytes.hpp"
#include "psim/common/crypto.hpp"
#include "psim/common/result.hpp"

namespace psim::sba {

enum class NfType { kAmf, kV2xAf, kEa, kAa, kNrf };
std::string_view to_string(NfType type);
std::optional<NfType> parse_nf_type(std::string_view text);

enum class SigScheme { kMacSharedSecret, kAsymmetric };
std::string_view to_string(SigScheme scheme);
std::optional<SigScheme> parse_sig_scheme(std::string_view text);

/// Resource plus the service operations allowed on it.
struct ResourceGrant {
  std::string resource;
  std::vector<std::string> allowed_operations;
  friend bool operator==(const ResourceGrant&, const ResourceGrant&) = default;
};

struct TokenClaims {
  std::string issuer;   // NRF instance id
  std::string subject;  // consumer instance id
  NfType audience = NfType::kV2xAf;
  std::vector<std::string> scope;
  std::optional<std::vector<ResourceGrant>> additional_scope;
  double expiration = 0.0;

  friend bool operator==(const TokenClaims&, const TokenClaims&) = default;
};

/// Canonical JSON bytes of a claim set. Keys: iss, sub, aud, scope, exp and
/// additional_scope when present; nothing else.
Bytes encode_claims(const TokenClaims& claims);
std::optional<TokenClaims> decode_claims(std::span<const std::uint8_t> bytes);

/// Signed access token. Only the header and claims bytes are covered by
/// the signature; `claims` is a decoded view of `claims_bytes`.
struct AccessToken {
  TokenClaims claims;
  Bytes header_bytes;
  Bytes claims_bytes;
  Bytes signature;
  SigScheme sig_scheme = SigScheme::kMacSharedSecret;

  /// JWS compact form: b64url(header).b64url(claims).b64url(signature).
  std::string to_compact() const;
  static std::optional<AccessToken> from_compact(std::string_view compact);

  /// The exact bytes the signature is computed over.
  Bytes signing_input() const;
};

/// Key material for one signing scheme. Either a shared MAC secret or an
/// Ed25519 pair; the unused half stays empty.
struct TokenSigningKey {
  SigScheme scheme = SigScheme::kMacSharedSecret;
  Bytes mac_secret;
  crypto::SigningKeyPair signing_keys;

  static TokenSigningKey mac(Bytes secret);
  static TokenSigningKey asymmetric(const crypto::Seed& seed);
};

/// What a producer holds to check tokens: the shared secret or the NRF
/// public key.
struct TokenVerificationKey {
  SigScheme scheme = SigScheme::kMacSharedSecret;
  Bytes mac_secret;
  std::array<std::uint8_t, 32> public_key{};

  static TokenVerificationKey from(const TokenSigningKey& key);
};

AccessToken sign_token(const TokenClaims& claims, const TokenSigningKey& key);
bool verify_token_signature(const AccessToken& token,
                            const TokenVerificationKey& key);

}  // namespace psim::sba
