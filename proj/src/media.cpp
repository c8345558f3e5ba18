#include "veriledger/media.hpp"

#include <string>

#include "veriledger/error.hpp"

namespace veriledger {

namespace {

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class HeaderCursor {
 public:
  explicit HeaderCursor(std::span<const std::uint8_t> data) : data_(data) {}

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (is_space(data_[pos_])) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint32_t number() {
    skip_space_and_comments();
    std::uint64_t v = 0;
    std::size_t digits = 0;
    while (pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '9') {
      v = v * 10 + (data_[pos_] - '0');
      if (v > 0xFFFFFFFFull) throw Error(ErrorCode::MalformedImage, "header value overflow");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw Error(ErrorCode::MalformedImage, "expected a header number");
    return static_cast<std::uint32_t>(v);
  }

  std::size_t pos_ = 0;
  std::span<const std::uint8_t> data_;
};

struct Header {
  std::uint32_t width, height, maxval;
  std::size_t data_offset;
};

Header read_header(std::span<const std::uint8_t> data) {
  if (data.size() < 2 || data[0] != 'P' || data[1] != '5') throw Error(ErrorCode::MalformedImage, "missing P5 magic");
  HeaderCursor cur(data);
  cur.pos_ = 2;
  if (cur.pos_ >= data.size() || !(is_space(data[cur.pos_]) || data[cur.pos_] == '#')) {
    throw Error(ErrorCode::MalformedImage, "no separator after magic");
  }
  Header h{};
  h.width = cur.number();
  h.height = cur.number();
  h.maxval = cur.number();
  // exactly one whitespace byte separates maxval from the raster
  if (cur.pos_ >= data.size() || !is_space(data[cur.pos_])) throw Error(ErrorCode::MalformedImage, "truncated header");
  h.data_offset = cur.pos_ + 1;
  if (h.width == 0 || h.height == 0) throw Error(ErrorCode::MalformedImage, "zero dimension");
  if (h.maxval == 0 || h.maxval > 255) throw Error(ErrorCode::MalformedImage, "maxval must be in 1..255");
  return h;
}

}  // namespace

std::size_t pgm_header_size(std::span<const std::uint8_t> data) { return read_header(data).data_offset; }

GrayImage parse_pgm(std::span<const std::uint8_t> data) {
  Header h = read_header(data);
  const std::uint64_t expected = static_cast<std::uint64_t>(h.width) * h.height;
  if (data.size() - h.data_offset != expected) {
    throw Error(ErrorCode::MalformedImage, "raster size " + std::to_string(data.size() - h.data_offset) +
                                               " != " + std::to_string(expected));
  }
  GrayImage img{h.width, h.height, h.maxval, {data.begin() + static_cast<std::ptrdiff_t>(h.data_offset), data.end()}};
  for (auto p : img.pixels) {
    if (p > img.maxval) throw Error(ErrorCode::MalformedImage, "pixel exceeds maxval");
  }
  return img;
}

std::vector<std::uint8_t> write_pgm(const GrayImage& image) {
  std::string header = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n" +
                       std::to_string(image.maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

std::vector<std::int16_t> decode_pcm16le(std::span<const std::uint8_t> data) {
  if (data.size() % 2 != 0) throw Error(ErrorCode::MalformedAudio, "odd byte length");
  std::vector<std::int16_t> samples(data.size() / 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto u = static_cast<std::uint16_t>(data[2 * i] | (data[2 * i + 1] << 8));
    samples[i] = static_cast<std::int16_t>(u);
  }
  return samples;
}

std::vector<std::uint8_t> encode_pcm16le(std::span<const std::int16_t> samples) {
  std::vector<std::uint8_t> out;
  out.reserve(samples.size() * 2);
  for (auto s : samples) {
    auto u = static_cast<std::uint16_t>(s);
    out.push_back(static_cast<std::uint8_t>(u & 0xFF));
    out.push_back(static_cast<std::uint8_t>(u >> 8));
  }
  return out;
}

}  // namespace veriledger
