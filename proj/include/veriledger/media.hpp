#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace veriledger {

/// Binary grayscale PGM (P5) with maxval <= 255.
struct GrayImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint8_t> pixels;  // row-major, width * height
};

/// Throws Error(MalformedImage) on anything that is not a well-formed P5 file.
GrayImage parse_pgm(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> write_pgm(const GrayImage& image);
/// Byte offset where pixel data starts.
std::size_t pgm_header_size(std::span<const std::uint8_t> data);

/// Headerless 16-bit signed little-endian PCM. Throws Error(MalformedAudio) on odd length.
std::vector<std::int16_t> decode_pcm16le(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> encode_pcm16le(std::span<const std::int16_t> samples);

}  // namespace veriledger
