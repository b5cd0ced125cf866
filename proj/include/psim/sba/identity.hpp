#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "psim/common/bytes.hpp"
#include "psim/common/crypto.hpp"
#include "psim/common/result.hpp"
#include "psim/common/types.hpp"

namespace psim::sba {

/// Permanent subscriber identifier. Never leaves the core network or the
/// vehicle's USIM in clear.
struct Supi {
  std::array<std::uint8_t, 16> value{};
  friend bool operator==(const Supi&, const Supi&) = default;
};

/// Concealed SUPI: ephemeral public key (32) | masked identifier (16) | tag (8).
struct Suci {
  Bytes ciphertext;
  std::string key_id;
};

enum class ConcealError { kUnknownKeyId, kMalformed, kIntegrity };
std::string_view to_string(ConcealError error);

/// Home network X25519 keys by key id. The public halves are what a
/// USIM would be provisioned with.
class HomeNetworkKeystore {
 public:
  void add_key(std::string key_id, const crypto::Seed& seed);
  std::optional<std::array<std::uint8_t, 32>> public_key(
      std::string_view key_id) const;
  Result<Supi, ConcealError> deconceal(const Suci& suci) const;

 private:
  std::map<std::string, crypto::AgreementKeyPair, std::less<>> keys_;
};

/// Deterministic in (supi, key, nonce); distinct nonces give distinct bytes.
Result<Suci, ConcealError> conceal_supi(const Supi& supi,
                                        const HomeNetworkKeystore& keystore,
                                        std::string_view key_id,
                                        std::span<const std::uint8_t> nonce);

/// Hex digest of the SUPI, the only subscriber reference the EA keeps.
std::string supi_hash(const Supi& supi);

struct EnrollmentCertificate {
  std::string ec_id;
  std::string subject_supi_hash;
  double issued_at = 0.0;
  double valid_until = 0.0;
  Bytes issuer_signature;

  bool valid_at(double now) const { return issued_at <= now && now < valid_until; }
  Bytes signed_bytes() const;
};

struct AuthorizationTicket {
  std::uint64_t at_id = 0;
  AppScope app_scope = AppScope::kCam;
  double valid_from = 0.0;
  double valid_until = 0.0;
  Bytes issuer_signature;

  /// Half-open validity window [valid_from, valid_until).
  bool valid_at(double now) const { return valid_from <= now && now < valid_until; }
  Bytes signed_bytes() const;
};

/// Shortest round-trip decimal form, used in all canonical encodings.
std::string canonical_number(double value);

}  // namespace psim::sba
