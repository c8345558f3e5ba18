#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace veriledger {

using Amount = std::uint64_t;
using AccountId = std::string;

// exact products of two u64 values
__extension__ typedef unsigned __int128 u128;

enum class MediaType : std::uint8_t { Bytes = 0, Image = 1, Audio = 2 };

enum class Verdict : std::uint8_t { Authentic = 0, Deepfake = 1, Unverified = 2 };

enum class AlgorithmStatus : std::uint8_t { Pending = 0, Active = 1, Deprecated = 2 };

enum class RequestStatus : std::uint8_t { Pending = 0, Completed = 1 };

std::string_view to_string(MediaType t);
std::string_view to_string(Verdict v);
std::string_view to_string(AlgorithmStatus s);
std::string_view to_string(RequestStatus s);

std::optional<MediaType> parse_media_type(std::string_view s);
std::optional<Verdict> parse_verdict(std::string_view s);
std::optional<AlgorithmStatus> parse_algorithm_status(std::string_view s);
std::optional<RequestStatus> parse_request_status(std::string_view s);

/// Fixed embedding length per media type: Image 64, Audio 64, Bytes 256.
std::size_t embedding_dimension(MediaType t);

/// Unverified results grade as Authentic predictions.
constexpr bool predicts_deepfake(Verdict v) { return v == Verdict::Deepfake; }

/// Only these transitions exist: Pending->Active, Pending->Deprecated, Active->Deprecated.
constexpr bool is_legal_transition(AlgorithmStatus from, AlgorithmStatus to) {
  return (from == AlgorithmStatus::Pending && to != AlgorithmStatus::Pending) ||
         (from == AlgorithmStatus::Active && to == AlgorithmStatus::Deprecated);
}

struct Embedding {
  MediaType media_type = MediaType::Bytes;
  std::vector<double> values;

  bool operator==(const Embedding&) const = default;
};

struct MatchCandidate {
  std::string content_id;
  double similarity = 0.0;

  bool operator==(const MatchCandidate&) const = default;
};

struct DetectorSpec {
  std::string kind;
  std::map<std::string, double> params;

  bool operator==(const DetectorSpec&) const = default;
};

}  // namespace veriledger
