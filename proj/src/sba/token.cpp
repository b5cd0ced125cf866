#include "psim/sba/token.hpp"

#include <json.hpp>

#include <set>

namespace psim::sba {

using nlohmann::json;

std::string_view to_string(NfType type) {
  switch (type) {
    case NfType::kAmf: return "AMF";
    case NfType::kV2xAf: return "V2X_AF";
    case NfType::kEa: return "EA";
    case NfType::kAa: return "AA";
    case NfType::kNrf: return "NRF";
  }
  return "NRF";
}

std::optional<NfType> parse_nf_type(std::string_view text) {
  if (text == "AMF") return NfType::kAmf;
  if (text == "V2X_AF") return NfType::kV2xAf;
  if (text == "EA") return NfType::kEa;
  if (text == "AA") return NfType::kAa;
  if (text == "NRF") return NfType::kNrf;
  return std::nullopt;
}

std::string_view to_string(SigScheme scheme) {
  return scheme == SigScheme::kMacSharedSecret ? "mac" : "asymmetric";
}

std::optional<SigScheme> parse_sig_scheme(std::string_view text) {
  if (text == "mac") return SigScheme::kMacSharedSecret;
  if (text == "asymmetric") return SigScheme::kAsymmetric;
  return std::nullopt;
}

namespace {

std::string_view alg_name(SigScheme scheme) {
  return scheme == SigScheme::kMacSharedSecret ? "HS256" : "EdDSA";
}

Bytes encode_header(SigScheme scheme) {
  json header = {{"alg", alg_name(scheme)}, {"typ", "JWT"}};
  return to_bytes(header.dump());
}

std::optional<SigScheme> decode_header(std::span<const std::uint8_t> bytes) {
  json header = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (!header.is_object() || header.size() != 2) return std::nullopt;
  auto alg = header.find("alg");
  auto typ = header.find("typ");
  if (alg == header.end() || typ == header.end()) return std::nullopt;
  if (!alg->is_string() || *typ != "JWT") return std::nullopt;
  if (*alg == "HS256") return SigScheme::kMacSharedSecret;
  if (*alg == "EdDSA") return SigScheme::kAsymmetric;
  return std::nullopt;
}

std::string join_scope(const std::vector<std::string>& scope) {
  std::string out;
  for (const auto& s : scope) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

std::vector<std::string> split_scope(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(' ', start);
    if (end == std::string::npos) end = text.size();
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

Bytes encode_claims(const TokenClaims& claims) {
  json doc;
  doc["iss"] = claims.issuer;
  doc["sub"] = claims.subject;
  doc["aud"] = to_string(claims.audience);
  doc["scope"] = join_scope(claims.scope);
  doc["exp"] = claims.expiration;
  if (claims.additional_scope) {
    json grants = json::array();
    for (const auto& g : *claims.additional_scope) {
      grants.push_back({{"resource", g.resource},
                        {"allowed_operations", g.allowed_operations}});
    }
    doc["additional_scope"] = std::move(grants);
  }
  return to_bytes(doc.dump());
}

std::optional<TokenClaims> decode_claims(std::span<const std::uint8_t> bytes) {
  json doc = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (!doc.is_object()) return std::nullopt;
  static const std::set<std::string> kAllowed = {"iss", "sub", "aud", "scope",
                                                 "exp", "additional_scope"};
  for (const auto& [key, _] : doc.items()) {
    if (!kAllowed.count(key)) return std::nullopt;
  }
  for (const char* key : {"iss", "sub", "aud", "scope", "exp"}) {
    if (!doc.contains(key)) return std::nullopt;
  }
  if (!doc["iss"].is_string() || !doc["sub"].is_string() ||
      !doc["aud"].is_string() || !doc["scope"].is_string() ||
      !doc["exp"].is_number()) {
    return std::nullopt;
  }
  TokenClaims claims;
  claims.issuer = doc["iss"].get<std::string>();
  claims.subject = doc["sub"].get<std::string>();
  auto aud = parse_nf_type(doc["aud"].get<std::string>());
  if (!aud) return std::nullopt;
  claims.audience = *aud;
  std::string scope = doc["scope"].get<std::string>();
  if (scope.empty()) return std::nullopt;
  claims.scope = split_scope(scope);
  claims.expiration = doc["exp"].get<double>();
  if (doc.contains("additional_scope")) {
    const auto& grants = doc["additional_scope"];
    if (!grants.is_array()) return std::nullopt;
    std::vector<ResourceGrant> parsed;
    for (const auto& g : grants) {
      if (!g.is_object() || !g.contains("resource") ||
          !g.contains("allowed_operations") || !g["resource"].is_string() ||
          !g["allowed_operations"].is_array()) {
        return std::nullopt;
      }
      ResourceGrant grant;
      grant.resource = g["resource"].get<std::string>();
      for (const auto& op : g["allowed_operations"]) {
        if (!op.is_string()) return std::nullopt;
        grant.allowed_operations.push_back(op.get<std::string>());
      }
      parsed.push_back(std::move(grant));
    }
    claims.additional_scope = std::move(parsed);
  }
  return claims;
}

Bytes AccessToken::signing_input() const {
  std::string input =
      base64url_encode(header_bytes) + "." + base64url_encode(claims_bytes);
  return to_bytes(input);
}

std::string AccessToken::to_compact() const {
  return base64url_encode(header_bytes) + "." + base64url_encode(claims_bytes) +
         "." + base64url_encode(signature);
}

std::optional<AccessToken> AccessToken::from_compact(std::string_view compact) {
  std::size_t first = compact.find('.');
  if (first == std::string_view::npos) return std::nullopt;
  std::size_t second = compact.find('.', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  if (compact.find('.', second + 1) != std::string_view::npos) return std::nullopt;

  auto header = base64url_decode(compact.substr(0, first));
  auto claims = base64url_decode(compact.substr(first + 1, second - first - 1));
  auto signature = base64url_decode(compact.substr(second + 1));
  if (!header || !claims || !signature) return std::nullopt;
  auto scheme = decode_header(*header);
  if (!scheme) return std::nullopt;
  auto decoded = decode_claims(*claims);
  if (!decoded) return std::nullopt;

  AccessToken token;
  token.claims = std::move(*decoded);
  token.header_bytes = std::move(*header);
  token.claims_bytes = std::move(*claims);
  token.signature = std::move(*signature);
  token.sig_scheme = *scheme;
  return token;
}

TokenSigningKey TokenSigningKey::mac(Bytes secret) {
  TokenSigningKey key;
  key.scheme = SigScheme::kMacSharedSecret;
  key.mac_secret = std::move(secret);
  return key;
}

TokenSigningKey TokenSigningKey::asymmetric(const crypto::Seed& seed) {
  TokenSigningKey key;
  key.scheme = SigScheme::kAsymmetric;
  key.signing_keys = crypto::ed25519_from_seed(seed);
  return key;
}

TokenVerificationKey TokenVerificationKey::from(const TokenSigningKey& key) {
  TokenVerificationKey out;
  out.scheme = key.scheme;
  if (key.scheme == SigScheme::kMacSharedSecret) {
    out.mac_secret = key.mac_secret;
  } else {
    out.public_key = key.signing_keys.public_key;
  }
  return out;
}

AccessToken sign_token(const TokenClaims& claims, const TokenSigningKey& key) {
  AccessToken token;
  token.claims = claims;
  token.sig_scheme = key.scheme;
  token.header_bytes = encode_header(key.scheme);
  token.claims_bytes = encode_claims(claims);
  Bytes input = token.signing_input();
  if (key.scheme == SigScheme::kMacSharedSecret) {
    auto mac = crypto::hmac_sha256(key.mac_secret, input);
    token.signature.assign(mac.begin(), mac.end());
  } else {
    token.signature = crypto::ed25519_sign(key.signing_keys, input);
  }
  return token;
}

bool verify_token_signature(const AccessToken& token,
                            const TokenVerificationKey& key) {
  if (token.sig_scheme != key.scheme) return false;
  auto header_scheme = decode_header(token.header_bytes);
  if (!header_scheme || *header_scheme != key.scheme) return false;
  Bytes input = token.signing_input();
  if (key.scheme == SigScheme::kMacSharedSecret) {
    auto mac = crypto::hmac_sha256(key.mac_secret, input);
    return crypto::constant_time_equal(token.signature, mac);
  }
  return crypto::ed25519_verify(key.public_key, input, token.signature);
}

}  // namespace psim::sba
