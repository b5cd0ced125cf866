#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psim {

using Bytes = std::vector<std::uint8_t>;

Bytes to_bytes(std::string_view text);
std::string to_string(std::span<const std::uint8_t> bytes);

std::string hex_encode(std::span<const std::uint8_t> bytes);
std::optional<Bytes> hex_decode(std::string_view hex);

/// Unpadded base64url (RFC 4648 section 5).
std::string base64url_encode(std::span<const std::uint8_t> bytes);

/// Strict decoder: rejects padding, characters outside the url-safe
/// alphabet, impossible lengths and non-zero trailing bits. Every byte
/// string therefore has exactly one accepted encoding.
std::optional<Bytes> base64url_decode(std::string_view text);

/// True when needle occurs as a contiguous subsequence of haystack.
bool contains_subsequence(std::span<const std::uint8_t> haystack,
                          std::span<const std::uint8_t> needle);

}  // namespace psim
