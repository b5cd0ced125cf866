#include "psim/common/crypto.hpp"

#include <sodium.h>

#include <stdexcept>

namespace psim::crypto {

void ensure_initialized() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium initialisation failed");
}

Digest sha256(std::span<const std::uint8_t> data) {
  ensure_initialized();
  Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest hmac_sha256(std::span<const std::uint8_t> key,
                   std::span<const std::uint8_t> message) {
  ensure_initialized();
  crypto_auth_hmacsha256_state state;
  crypto_auth_hmacsha256_init(&state, key.data(), key.size());
  crypto_auth_hmacsha256_update(&state, message.data(), message.size());
  Digest out{};
  crypto_auth_hmacsha256_final(&state, out.data());
  return out;
}

bool constant_time_equal(std::span<const std::uint8_t> a,
                         std::span<const std::uint8_t> b) {
  ensure_initialized();
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

SigningKeyPair ed25519_from_seed(const Seed& seed) {
  ensure_initialized();
  SigningKeyPair keys;
  crypto_sign_ed25519_seed_keypair(keys.public_key.data(),
                                   keys.secret_key.data(), seed.data());
  return keys;
}

Bytes ed25519_sign(const SigningKeyPair& keys,
                   std::span<const std::uint8_t> message) {
  ensure_initialized();
  Bytes signature(crypto_sign_ed25519_BYTES);
  crypto_sign_ed25519_detached(signature.data(), nullptr, message.data(),
                               message.size(), keys.secret_key.data());
  return signature;
}

bool ed25519_verify(std::span<const std::uint8_t> public_key,
                    std::span<const std::uint8_t> message,
                    std::span<const std::uint8_t> signature) {
  ensure_initialized();
  if (public_key.size() != crypto_sign_ed25519_PUBLICKEYBYTES) return false;
  if (signature.size() != crypto_sign_ed25519_BYTES) return false;
  return crypto_sign_ed25519_verify_detached(signature.data(), message.data(),
                                             message.size(),
                                             public_key.data()) == 0;
}

AgreementKeyPair x25519_from_seed(const Seed& seed) {
  ensure_initialized();
  AgreementKeyPair keys;
  // Hashing the seed keeps distinct purposes of one seed independent.
  Digest d = sha256(seed);
  std::copy(d.begin(), d.end(), keys.secret_key.begin());
  crypto_scalarmult_base(keys.public_key.data(), keys.secret_key.data());
  return keys;
}

bool x25519_shared(const std::array<std::uint8_t, 32>& secret_key,
                   const std::array<std::uint8_t, 32>& peer_public,
                   std::array<std::uint8_t, 32>& out) {
  ensure_initialized();
  return crypto_scalarmult(out.data(), secret_key.data(), peer_public.data()) ==
         0;
}

}  // namespace psim::crypto
