#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <span>
#include <string>
#include <vector>

#include "veriledger/rng.hpp"
#include "veriledger/types.hpp"

namespace veriledger {

enum class PerturbationKind { ByteFlip, PixelShift };

std::string_view to_string(PerturbationKind kind);
std::optional<PerturbationKind> parse_perturbation_kind(std::string_view name);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::ByteFlip;
  double rate = 0.01;
};

struct CorpusSpec {
  std::size_t trusted_count = 10;
  std::size_t fake_count = 10;
  std::size_t unrelated_count = 10;
  /// Items cycle through these types by index.
  std::vector<MediaType> media_types = {MediaType::Bytes};
  std::size_t bytes_length = 4096;
  std::uint32_t image_width = 32;
  std::uint32_t image_height = 32;
  std::size_t audio_samples = 4096;
  PerturbationSpec perturbation;
};

struct CorpusItem {
  std::string id;
  MediaType media_type = MediaType::Bytes;
  std::vector<std::uint8_t> content;
};

struct FakeItem {
  CorpusItem item;
  std::string source_id;
  /// False when the perturbation left the bytes unchanged (e.g. rate 0).
  bool altered = true;
};

struct Corpus {
  std::vector<CorpusItem> trusted;
  std::vector<FakeItem> fakes;
  std::vector<CorpusItem> unrelated;
};

/// Replaces (ByteFlip) or increments mod 256 (PixelShift) floor(rate * len)
/// positions drawn without replacement. Length is preserved.
std::vector<std::uint8_t> perturb(std::span<const std::uint8_t> content, PerturbationKind kind, double rate,
                                  std::uint64_t seed);

/// perturb() restricted to the sample payload: the PGM raster for images,
/// the whole buffer otherwise, so the result stays decodable.
std::vector<std::uint8_t> perturb_media(std::span<const std::uint8_t> content, MediaType media_type,
                                        PerturbationKind kind, double rate, std::uint64_t seed);

/// One synthetic item of the given type.
///
///  - Bytes: a per-item byte profile with weights r^3 (r uniform in 0..255)
///    sampled bytes_length times. Profiles differ strongly between items.
///  - Image: P5 raster whose 8x8 blocks each get a random base level plus
///    +-16 noise per pixel.
///  - Audio: 64 windows with a random amplitude envelope and random signs.
std::vector<std::uint8_t> generate_content(MediaType media_type, const CorpusSpec& spec, SplitMix64& rng);

/// Throws Error(ConfigInvalid) when fakes are requested without trusted sources.
Corpus generate_corpus(std::uint64_t seed, const CorpusSpec& spec);

struct ChallengeItem {
  std::string challenge_id;
  MediaType media_type = MediaType::Bytes;
  std::vector<std::uint8_t> reference;
  std::vector<std::uint8_t> query;
  Verdict true_label = Verdict::Authentic;
};

/// Deterministic validation set: even entries re-submit the reference
/// unchanged (Authentic), odd entries perturb it (Deepfake when altered).
std::vector<ChallengeItem> generate_challenges(std::uint64_t seed, std::size_t count,
                                               const std::vector<MediaType>& media_types, const CorpusSpec& shape,
                                               double rate);

}  // namespace veriledger
