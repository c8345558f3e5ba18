#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "veriledger/encoding.hpp"
#include "veriledger/error.hpp"
#include "veriledger/hash.hpp"
#include "veriledger/types.hpp"

namespace veriledger {

enum class TxKind : std::uint8_t {
  RegisterAlgorithm = 0,
  SubmitChallengeResult = 1,
  RegisterContent = 2,
  SubmitAnalysisRequest = 3,
  CommitAnalysisResult = 4,
  SubmitFeedback = 5,
  TransferTokens = 6,
};

std::string_view to_string(TxKind kind);
std::optional<TxKind> parse_tx_kind(std::string_view name);

struct RegisterAlgorithm {
  std::string algorithm_id;
  std::set<MediaType> media_types;
  DetectorSpec detector;
  Amount stake = 0;
  bool operator==(const RegisterAlgorithm&) const = default;
};

struct SubmitChallengeResult {
  std::string algorithm_id;
  std::string challenge_id;
  Verdict predicted_label = Verdict::Authentic;
  Verdict true_label = Verdict::Authentic;
  bool operator==(const SubmitChallengeResult&) const = default;
};

struct RegisterContent {
  std::string content_id;
  MediaType media_type = MediaType::Bytes;
  Hash256 content_hash;
  Embedding embedding;
  std::map<std::string, std::string> metadata;
  bool operator==(const RegisterContent&) const = default;
};

struct SubmitAnalysisRequest {
  MediaType media_type = MediaType::Bytes;
  Hash256 content_hash;
  Embedding embedding;
  Amount fee = 0;
  bool operator==(const SubmitAnalysisRequest&) const = default;
};

struct CommitAnalysisResult {
  std::string request_id;
  std::string algorithm_id;
  Verdict verdict = Verdict::Unverified;
  double confidence = 0.0;
  std::vector<MatchCandidate> matched_content;
  bool operator==(const CommitAnalysisResult&) const = default;
};

struct SubmitFeedback {
  std::string request_id;
  Verdict true_label = Verdict::Authentic;
  bool operator==(const SubmitFeedback&) const = default;
};

struct TransferTokens {
  AccountId recipient;
  Amount amount = 0;
  bool operator==(const TransferTokens&) const = default;
};

// Alternative order matches TxKind.
using Payload = std::variant<RegisterAlgorithm, SubmitChallengeResult, RegisterContent, SubmitAnalysisRequest,
                             CommitAnalysisResult, SubmitFeedback, TransferTokens>;

struct Transaction {
  AccountId sender;
  std::uint64_t nonce = 0;
  Payload payload;

  TxKind kind() const { return static_cast<TxKind>(payload.index()); }
  bool operator==(const Transaction&) const = default;
};

void encode(ByteWriter& w, const Transaction& tx);
Hash256 tx_hash(const Transaction& tx);

/// request_id assigned to an analysis request: first 16 hex chars of its tx hash.
std::string request_id_for(const Transaction& tx);

// ---- receipts and events ----

struct NotificationEvent {
  AccountId provider;
  std::string content_id;
  std::string request_id;
  double similarity = 0.0;
  bool operator==(const NotificationEvent&) const = default;
};

struct StatusChangedEvent {
  std::string algorithm_id;
  AlgorithmStatus from = AlgorithmStatus::Pending;
  AlgorithmStatus to = AlgorithmStatus::Pending;
  bool operator==(const StatusChangedEvent&) const = default;
};

struct RequestCreatedEvent {
  std::string request_id;
  bool operator==(const RequestCreatedEvent&) const = default;
};

struct FeeSplitEvent {
  std::string request_id;
  AccountId owner;
  Amount owner_amount = 0;
  AccountId proposer;
  Amount proposer_amount = 0;
  Amount burned = 0;
  bool operator==(const FeeSplitEvent&) const = default;
};

struct StakeSlashedEvent {
  std::string algorithm_id;
  Amount burned = 0;
  Amount refunded = 0;
  bool operator==(const StakeSlashedEvent&) const = default;
};

using Event = std::variant<NotificationEvent, StatusChangedEvent, RequestCreatedEvent, FeeSplitEvent, StakeSlashedEvent>;

struct Receipt {
  std::uint32_t tx_index = 0;
  bool accepted = false;
  std::optional<ErrorCode> error;
  std::vector<Event> events;

  bool operator==(const Receipt&) const = default;
};

}  // namespace veriledger
