#include "veriledger/types.hpp"

namespace veriledger {

std::string_view to_string(MediaType t) {
  switch (t) {
    case MediaType::Bytes: return "Bytes";
    case MediaType::Image: return "Image";
    case MediaType::Audio: return "Audio";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Authentic: return "Authentic";
    case Verdict::Deepfake: return "Deepfake";
    case Verdict::Unverified: return "Unverified";
  }
  return "?";
}

std::string_view to_string(AlgorithmStatus s) {
  switch (s) {
    case AlgorithmStatus::Pending: return "Pending";
    case AlgorithmStatus::Active: return "Active";
    case AlgorithmStatus::Deprecated: return "Deprecated";
  }
  return "?";
}

std::string_view to_string(RequestStatus s) {
  switch (s) {
    case RequestStatus::Pending: return "Pending";
    case RequestStatus::Completed: return "Completed";
  }
  return "?";
}

std::optional<MediaType> parse_media_type(std::string_view s) {
  if (s == "Bytes") return MediaType::Bytes;
  if (s == "Image") return MediaType::Image;
  if (s == "Audio") return MediaType::Audio;
  return std::nullopt;
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "Authentic") return Verdict::Authentic;
  if (s == "Deepfake") return Verdict::Deepfake;
  if (s == "Unverified") return Verdict::Unverified;
  return std::nullopt;
}

std::optional<AlgorithmStatus> parse_algorithm_status(std::string_view s) {
  if (s == "Pending") return AlgorithmStatus::Pending;
  if (s == "Active") return AlgorithmStatus::Active;
  if (s == "Deprecated") return AlgorithmStatus::Deprecated;
  return std::nullopt;
}

std::optional<RequestStatus> parse_request_status(std::string_view s) {
  if (s == "Pending") return RequestStatus::Pending;
  if (s == "Completed") return RequestStatus::Completed;
  return std::nullopt;
}

std::size_t embedding_dimension(MediaType t) { return t == MediaType::Bytes ? 256 : 64; }

}  // namespace veriledger
