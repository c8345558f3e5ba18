#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace veriledger {

enum class ErrorCode {
  // ledger
  EmptyValidatorSet,
  BadParent,
  BadHeight,
  WrongProposer,
  StateRootMismatch,
  BadNonce,
  // contracts
  InvalidPayload,
  DuplicateAlgorithm,
  InsufficientStake,
  UnknownDetector,
  NotPending,
  DuplicateChallenge,
  UnknownAlgorithm,
  DuplicateContent,
  BadEmbeddingDimension,
  InsufficientFee,
  InsufficientBalance,
  UnknownRequest,
  RequestCompleted,
  RequestPending,
  AlgorithmNotActive,
  UnauthorizedOracle,
  InvalidResult,
  DuplicateFeedback,
  NotSubmitter,
  BadAmount,
  // detection
  EmptyContent,
  MalformedImage,
  MalformedAudio,
  DimensionMismatch,
  ZeroVector,
  NoEligibleAlgorithm,
  // sim / store
  MissingLabel,
  ConfigInvalid,
  HeightGap,
  SerializationError,
  CorruptRecord,
  ReceiptMismatch,
  BlockHashMismatch,
};

std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> parse_error_code(std::string_view name);

/// Base exception for every failure the library reports by code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace veriledger
