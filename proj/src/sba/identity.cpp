#include "psim/sba/identity.hpp"

#include <algorithm>
#include <charconv>

namespace psim::sba {

namespace {

constexpr std::size_t kEphemeralSize = 32;
constexpr std::size_t kMaskedSize = 16;
constexpr std::size_t kTagSize = 8;

struct SuciKeys {
  crypto::Digest mask;
  crypto::Digest mac;
};

SuciKeys derive_keys(const std::array<std::uint8_t, 32>& shared,
                     std::span<const std::uint8_t> ephemeral_public) {
  Bytes material = to_bytes("suci-kdf");
  material.insert(material.end(), shared.begin(), shared.end());
  material.insert(material.end(), ephemeral_public.begin(),
                  ephemeral_public.end());
  SuciKeys keys;
  keys.mask = crypto::sha256(material);
  material[0] = 'S';
  keys.mac = crypto::sha256(material);
  return keys;
}

}  // namespace

std::string_view to_string(ConcealError error) {
  switch (error) {
    case ConcealError::kUnknownKeyId: return "unknown_key_id";
    case ConcealError::kMalformed: return "malformed_suci";
    case ConcealError::kIntegrity: return "suci_integrity_failure";
  }
  return "unknown";
}

std::string canonical_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void HomeNetworkKeystore::add_key(std::string key_id, const crypto::Seed& seed) {
  keys_[std::move(key_id)] = crypto::x25519_from_seed(seed);
}

std::optional<std::array<std::uint8_t, 32>> HomeNetworkKeystore::public_key(
    std::string_view key_id) const {
  auto it = keys_.find(key_id);
  if (it == keys_.end()) return std::nullopt;
  return it->second.public_key;
}

Result<Suci, ConcealError> conceal_supi(const Supi& supi,
                                        const HomeNetworkKeystore& keystore,
                                        std::string_view key_id,
                                        std::span<const std::uint8_t> nonce) {
  auto home_public = keystore.public_key(key_id);
  if (!home_public) return ConcealError::kUnknownKeyId;

  Bytes eph_input = to_bytes("suci-eph");
  eph_input.insert(eph_input.end(), nonce.begin(), nonce.end());
  crypto::Seed eph_seed = crypto::sha256(eph_input);
  crypto::AgreementKeyPair eph = crypto::x25519_from_seed(eph_seed);

  std::array<std::uint8_t, 32> shared{};
  if (!crypto::x25519_shared(eph.secret_key, *home_public, shared)) {
    return ConcealError::kMalformed;
  }
  SuciKeys keys = derive_keys(shared, eph.public_key);

  Suci suci;
  suci.key_id = std::string(key_id);
  suci.ciphertext.assign(eph.public_key.begin(), eph.public_key.end());
  Bytes masked(kMaskedSize);
  for (std::size_t i = 0; i < kMaskedSize; ++i) {
    masked[i] = supi.value[i] ^ keys.mask[i];
  }
  suci.ciphertext.insert(suci.ciphertext.end(), masked.begin(), masked.end());
  crypto::Digest tag = crypto::hmac_sha256(keys.mac, masked);
  suci.ciphertext.insert(suci.ciphertext.end(), tag.begin(),
                         tag.begin() + kTagSize);
  return suci;
}

Result<Supi, ConcealError> HomeNetworkKeystore::deconceal(
    const Suci& suci) const {
  auto it = keys_.find(suci.key_id);
  if (it == keys_.end()) return ConcealError::kUnknownKeyId;
  if (suci.ciphertext.size() != kEphemeralSize + kMaskedSize + kTagSize) {
    return ConcealError::kMalformed;
  }
  std::array<std::uint8_t, 32> eph_public{};
  std::copy_n(suci.ciphertext.begin(), kEphemeralSize, eph_public.begin());
  std::array<std::uint8_t, 32> shared{};
  if (!crypto::x25519_shared(it->second.secret_key, eph_public, shared)) {
    return ConcealError::kMalformed;
  }
  SuciKeys keys = derive_keys(shared, eph_public);
  std::span<const std::uint8_t> masked(suci.ciphertext.data() + kEphemeralSize,
                                       kMaskedSize);
  std::span<const std::uint8_t> tag(
      suci.ciphertext.data() + kEphemeralSize + kMaskedSize, kTagSize);
  crypto::Digest expected = crypto::hmac_sha256(keys.mac, masked);
  if (!crypto::constant_time_equal(
          tag, std::span<const std::uint8_t>(expected.data(), kTagSize))) {
    return ConcealError::kIntegrity;
  }
  Supi supi;
  for (std::size_t i = 0; i < kMaskedSize; ++i) {
    supi.value[i] = masked[i] ^ keys.mask[i];
  }
  return supi;
}

std::string supi_hash(const Supi& supi) {
  return hex_encode(crypto::sha256(supi.value));
}

Bytes EnrollmentCertificate::signed_bytes() const {
  return to_bytes("EC|" + ec_id + "|" + subject_supi_hash + "|" +
                  canonical_number(issued_at) + "|" +
                  canonical_number(valid_until));
}

Bytes AuthorizationTicket::signed_bytes() const {
  return to_bytes("AT|" + std::to_string(at_id) + "|" +
                  std::string(to_string(app_scope)) + "|" +
                  canonical_number(valid_from) + "|" +
                  canonical_number(valid_until));
}

}  // namespace psim::sba
