#include "veriledger/encoding.hpp"

#include <bit>
#include <limits>
#include <stdexcept>

namespace veriledger {

void ByteWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::f64(double v) { u64(f64_bits(v)); }

void ByteWriter::str(std::string_view s) {
  count(s.size());
  buf_.insert(buf_.end(), s.begin(), s.end());
}

void ByteWriter::hash(const Hash256& h) { buf_.insert(buf_.end(), h.bytes.begin(), h.bytes.end()); }

void ByteWriter::raw(std::span<const std::uint8_t> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }

void ByteWriter::count(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("canonical encoding: length exceeds u32");
  u32(static_cast<std::uint32_t>(n));
}

std::uint64_t f64_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

double f64_from_bits(std::uint64_t bits) { return std::bit_cast<double>(bits); }

}  // namespace veriledger
