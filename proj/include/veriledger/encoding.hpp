#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "veriledger/hash.hpp"

namespace veriledger {

/// Canonical binary encoder used for every hashed structure.
///
/// Integers are fixed-width big-endian, strings are UTF-8 with a u32 length
/// prefix, reals are the IEEE-754 binary64 bit pattern as a big-endian u64.
/// The layout of each structure is described in docs/encoding.md.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void boolean(bool v) { u8(v ? 1 : 0); }
  void str(std::string_view s);
  void hash(const Hash256& h);
  void raw(std::span<const std::uint8_t> bytes);
  /// u32 element count; callers emit the elements.
  void count(std::size_t n);

  const std::vector<std::uint8_t>& bytes() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }
  Hash256 digest() const { return hash_bytes(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

std::uint64_t f64_bits(double v);
double f64_from_bits(std::uint64_t bits);

}  // namespace veriledger
