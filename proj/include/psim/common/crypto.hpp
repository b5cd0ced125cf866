#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "psim/common/bytes.hpp"

// Thin wrappers over libsodium. Callers get value types and spans; no
// sodium types leak through this header.
namespace psim::crypto {

using Digest = std::array<std::uint8_t, 32>;
using Seed = std::array<std::uint8_t, 32>;

/// Idempotent and thread-safe; every wrapper below calls it.
void ensure_initialized();

Digest sha256(std::span<const std::uint8_t> data);
Digest hmac_sha256(std::span<const std::uint8_t> key,
                   std::span<const std::uint8_t> message);
bool constant_time_equal(std::span<const std::uint8_t> a,
                         std::span<const std::uint8_t> b);

struct SigningKeyPair {
  std::array<std::uint8_t, 32> public_key{};
  std::array<std::uint8_t, 64> secret_key{};
};

/// Deterministic Ed25519 key pair from a 32-byte seed.
SigningKeyPair ed25519_from_seed(const Seed& seed);
Bytes ed25519_sign(const SigningKeyPair& keys,
                   std::span<const std::uint8_t> message);
bool ed25519_verify(std::span<const std::uint8_t> public_key,
                    std::span<const std::uint8_t> message,
                    std::span<const std::uint8_t> signature);

struct AgreementKeyPair {
  std::array<std::uint8_t, 32> public_key{};
  std::array<std::uint8_t, 32> secret_key{};
};

AgreementKeyPair x25519_from_seed(const Seed& seed);
/// Returns false when the peer key yields an all-zero shared secret.
bool x25519_shared(const std::array<std::uint8_t, 32>& secret_key,
                   const std::array<std::uint8_t, 32>& peer_public,
                   std::array<std::uint8_t, 32>& out);

}  // namespace psim::crypto
