#include "veriledger/error.hpp"

#include <array>
#include <utility>

namespace veriledger {

namespace {

constexpr std::array kNames = {
    std::pair{ErrorCode::EmptyValidatorSet, "EmptyValidatorSet"},
    std::pair{ErrorCode::BadParent, "BadParent"},
    std::pair{ErrorCode::BadHeight, "BadHeight"},
    std::pair{ErrorCode::WrongProposer, "WrongProposer"},
    std::pair{ErrorCode::StateRootMismatch, "StateRootMismatch"},
    std::pair{ErrorCode::BadNonce, "BadNonce"},
    std::pair{ErrorCode::InvalidPayload, "InvalidPayload"},
    std::pair{ErrorCode::DuplicateAlgorithm, "DuplicateAlgorithm"},
    std::pair{ErrorCode::InsufficientStake, "InsufficientStake"},
    std::pair{ErrorCode::UnknownDetector, "UnknownDetector"},
    std::pair{ErrorCode::NotPending, "NotPending"},
    std::pair{ErrorCode::DuplicateChallenge, "DuplicateChallenge"},
    std::pair{ErrorCode::UnknownAlgorithm, "UnknownAlgorithm"},
    std::pair{ErrorCode::DuplicateContent, "DuplicateContent"},
    std::pair{ErrorCode::BadEmbeddingDimension, "BadEmbeddingDimension"},
    std::pair{ErrorCode::InsufficientFee, "InsufficientFee"},
    std::pair{ErrorCode::InsufficientBalance, "InsufficientBalance"},
    std::pair{ErrorCode::UnknownRequest, "UnknownRequest"},
    std::pair{ErrorCode::RequestCompleted, "RequestCompleted"},
    std::pair{ErrorCode::RequestPending, "RequestPending"},
    std::pair{ErrorCode::AlgorithmNotActive, "AlgorithmNotActive"},
    std::pair{ErrorCode::UnauthorizedOracle, "UnauthorizedOracle"},
    std::pair{ErrorCode::InvalidResult, "InvalidResult"},
    std::pair{ErrorCode::DuplicateFeedback, "DuplicateFeedback"},
    std::pair{ErrorCode::NotSubmitter, "NotSubmitter"},
    std::pair{ErrorCode::BadAmount, "BadAmount"},
    std::pair{ErrorCode::EmptyContent, "EmptyContent"},
    std::pair{ErrorCode::MalformedImage, "MalformedImage"},
    std::pair{ErrorCode::MalformedAudio, "MalformedAudio"},
    std::pair{ErrorCode::DimensionMismatch, "DimensionMismatch"},
    std::pair{ErrorCode::ZeroVector, "ZeroVector"},
    std::pair{ErrorCode::NoEligibleAlgorithm, "NoEligibleAlgorithm"},
    std::pair{ErrorCode::MissingLabel, "MissingLabel"},
    std::pair{ErrorCode::ConfigInvalid, "ConfigInvalid"},
    std::pair{ErrorCode::HeightGap, "HeightGap"},
    std::pair{ErrorCode::SerializationError, "SerializationError"},
    std::pair{ErrorCode::CorruptRecord, "CorruptRecord"},
    std::pair{ErrorCode::ReceiptMismatch, "ReceiptMismatch"},
    std::pair{ErrorCode::BlockHashMismatch, "BlockHashMismatch"},
};

}  // namespace

std::string_view to_string(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

std::optional<ErrorCode> parse_error_code(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (name == n) return c;
  }
  return std::nullopt;
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)), code_(code) {}

}  // namespace veriledger
