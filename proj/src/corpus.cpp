#include "veriledger/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "veriledger/error.hpp"
#include "veriledger/media.hpp"

namespace veriledger {

namespace {

enum StreamTag : std::uint64_t { kTrusted = 1, kFakes = 2, kUnrelated = 3, kChallenges = 4 };

std::uint64_t item_seed(std::uint64_t seed, StreamTag tag, std::size_t index) {
  return SplitMix64::derive(seed, (static_cast<std::uint64_t>(tag) << 32) | index);
}

std::string numbered(const char* prefix, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-%03zu", prefix, i);
  return buf;
}

// Same cut as the embedder: total/parts per piece, last piece absorbs the rest.
std::size_t piece_of(std::size_t coord, std::size_t total, std::size_t parts) {
  const std::size_t width = total / parts;
  return width == 0 ? parts - 1 : std::min(coord / width, parts - 1);
}

std::vector<std::uint8_t> bytes_item(std::size_t length, SplitMix64& rng) {
  std::array<std::uint64_t, 256> cumulative{};
  std::uint64_t total = 0;
  for (std::size_t b = 0; b < 256; ++b) {
    const std::uint64_t r = rng.below(256);
    total += r * r * r;
    cumulative[b] = total;
  }
  if (total == 0) {
    cumulative.fill(1);
    total = 1;
  }
  std::vector<std::uint8_t> out(length);
  for (auto& byte : out) {
    const std::uint64_t draw = rng.below(total);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), draw);
    byte = static_cast<std::uint8_t>(it - cumulative.begin());
  }
  return out;
}

std::vector<std::uint8_t> image_item(std::uint32_t width, std::uint32_t height, SplitMix64& rng) {
  std::array<int, 64> level{};
  for (auto& l : level) l = static_cast<int>(rng.below(256));
  GrayImage img{width, height, 255, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height)};
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t block = piece_of(y, height, 8) * 8 + piece_of(x, width, 8);
      const int v = level[block] + static_cast<int>(rng.below(33)) - 16;
      img.pixels[y * width + x] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
  return write_pgm(img);
}

std::vector<std::uint8_t> audio_item(std::size_t samples, SplitMix64& rng) {
  std::array<std::uint64_t, 64> amplitude{};
  for (auto& a : amplitude) a = rng.below(32768);
  std::vector<std::int16_t> pcm(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::uint64_t a = amplitude[piece_of(i, samples, 64)];
    const auto magnitude = static_cast<std::int64_t>(a / 2 + rng.below(a / 2 + 1));
    const bool negative = (rng.next() >> 63) != 0;
    pcm[i] = static_cast<std::int16_t>(negative ? -magnitude : magnitude);
  }
  return encode_pcm16le(pcm);
}

}  // namespace

std::string_view to_string(PerturbationKind kind) {
  return kind == PerturbationKind::ByteFlip ? "byte-flip" : "pixel-shift";
}

std::optional<PerturbationKind> parse_perturbation_kind(std::string_view name) {
  if (name == "byte-flip") return PerturbationKind::ByteFlip;
  if (name == "pixel-shift") return PerturbationKind::PixelShift;
  return std::nullopt;
}

std::vector<std::uint8_t> perturb(std::span<const std::uint8_t> content, PerturbationKind kind, double rate,
                                  std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw Error(ErrorCode::ConfigInvalid, "perturbation rate outside [0,1]");
  std::vector<std::uint8_t> out(content.begin(), content.end());
  const auto count = static_cast<std::size_t>(std::floor(rate * static_cast<double>(out.size())));
  if (count == 0) return out;

  SplitMix64 rng(seed);
  // partial Fisher-Yates: the first `count` slots are the chosen positions
  std::vector<std::size_t> positions(out.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(positions.size() - i));
    std::swap(positions[i], positions[j]);
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::uint8_t& b = out[positions[i]];
    b = kind == PerturbationKind::ByteFlip ? rng.byte() : static_cast<std::uint8_t>(b + 1);
  }
  return out;
}

std::vector<std::uint8_t> perturb_media(std::span<const std::uint8_t> content, MediaType media_type,
                                        PerturbationKind kind, double rate, std::uint64_t seed) {
  if (media_type != MediaType::Image) return perturb(content, kind, rate, seed);
  const std::size_t header = pgm_header_size(content);
  auto raster = perturb(content.subspan(header), kind, rate, seed);
  std::vector<std::uint8_t> out(content.begin(), content.begin() + static_cast<std::ptrdiff_t>(header));
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

std::vector<std::uint8_t> generate_content(MediaType media_type, const CorpusSpec& spec, SplitMix64& rng) {
  switch (media_type) {
    case MediaType::Bytes: return bytes_item(spec.bytes_length, rng);
    case MediaType::Image: return image_item(spec.image_width, spec.image_height, rng);
    case MediaType::Audio: return audio_item(spec.audio_samples, rng);
  }
  return {};
}

Corpus generate_corpus(std::uint64_t seed, const CorpusSpec& spec) {
  if (spec.fake_count > 0 && spec.trusted_count == 0) {
    throw Error(ErrorCode::ConfigInvalid, "fakes need at least one trusted source");
  }
  if (spec.media_types.empty()) throw Error(ErrorCode::ConfigInvalid, "corpus media_types is empty");

  Corpus corpus;
  for (std::size_t i = 0; i < spec.trusted_count; ++i) {
    SplitMix64 rng(item_seed(seed, kTrusted, i));
    const MediaType t = spec.media_types[i % spec.media_types.size()];
    corpus.trusted.push_back({numbered("trusted", i), t, generate_content(t, spec, rng)});
  }
  for (std::size_t i = 0; i < spec.fake_count; ++i) {
    SplitMix64 rng(item_seed(seed, kFakes, i));
    const CorpusItem& source = corpus.trusted[rng.below(corpus.trusted.size())];
    auto content =
        perturb_media(source.content, source.media_type, spec.perturbation.kind, spec.perturbation.rate, rng.next());
    const bool altered = content != source.content;
    corpus.fakes.push_back({{numbered("fake", i), source.media_type, std::move(content)}, source.id, altered});
  }
  for (std::size_t i = 0; i < spec.unrelated_count; ++i) {
    SplitMix64 rng(item_seed(seed, kUnrelated, i));
    const MediaType t = spec.media_types[i % spec.media_types.size()];
    corpus.unrelated.push_back({numbered("unrelated", i), t, generate_content(t, spec, rng)});
  }
  return corpus;
}

std::vector<ChallengeItem> generate_challenges(std::uint64_t seed, std::size_t count,
                                               const std::vector<MediaType>& media_types, const CorpusSpec& shape,
                                               double rate) {
  std::vector<ChallengeItem> out;
  if (media_types.empty()) return out;
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 rng(item_seed(seed, kChallenges, i));
    ChallengeItem c;
    c.challenge_id = numbered("challenge", i);
    c.media_type = media_types[i % media_types.size()];
    c.reference = generate_content(c.media_type, shape, rng);
    if (i % 2 == 0) {
      c.query = c.reference;
    } else {
      const auto kind = c.media_type == MediaType::Image ? PerturbationKind::PixelShift : PerturbationKind::ByteFlip;
      c.query = perturb_media(c.reference, c.media_type, kind, rate, rng.next());
    }
    c.true_label = c.query == c.reference ? Verdict::Authentic : Verdict::Deepfake;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace veriledger
