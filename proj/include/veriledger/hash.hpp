#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace veriledger {

/// 256-bit digest. Hex rendering is always 64 lowercase characters.
struct Hash256 {
  std::array<std::uint8_t, 32> bytes{};

  bool is_zero() const;
  std::string hex() const;

  /// Strict parse: exactly 64 lowercase hex digits.
  static std::optional<Hash256> from_hex(std::string_view text);

  /// First 8 bytes read as a big-endian unsigned integer.
  std::uint64_t prefix_u64() const;

  auto operator<=>(const Hash256&) const = default;
};

/// SHA-256 of `data`.
Hash256 hash_bytes(std::span<const std::uint8_t> data);
Hash256 hash_bytes(std::string_view data);

std::string to_hex(std::span<const std::uint8_t> data);

/// Strict lowercase hex decode; nullopt on odd length or any other character.
std::optional<std::vector<std::uint8_t>> from_hex(std::string_view text);

}  // namespace veriledger
