#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "veriledger/ledger.hpp"
#include "veriledger/state.hpp"

namespace veriledger {

/// Simulator-side labels keyed by content hash. Never written on chain.
struct GroundTruth {
  std::map<Hash256, Verdict> labels;

  bool operator==(const GroundTruth&) const = default;
};

nlohmann::json to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& j);

struct AlgorithmMetrics {
  std::string algorithm_id;
  AlgorithmStatus status = AlgorithmStatus::Pending;
  PerfCounters counts;
  std::optional<double> precision;  // null on 0/0
  std::optional<double> recall;     // null on 0/0
};

struct TokenSummary {
  std::map<AccountId, Amount> balances;
  Amount initial_supply = 0;
  Amount minted = 0;
  Amount burned = 0;
  Amount escrowed = 0;
  /// validators, algorithm_owners, providers, users, oracle, other; each
  /// account counted once, in that priority.
  std::map<std::string, Amount> class_totals;
};

struct ChainSummary {
  std::uint64_t blocks = 0;  // excluding genesis
  std::uint64_t transactions = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::map<std::string, std::uint64_t> accepted_by_kind;
  std::map<std::string, std::uint64_t> rejected_by_kind;
  Hash256 tip_hash;
  Hash256 tip_state_root;
};

struct RequestSummary {
  std::uint64_t submitted = 0;
  std::uint64_t completed = 0;
  std::uint64_t pending = 0;
  std::uint64_t feedback_labeled = 0;
};

struct RunReport {
  std::vector<AlgorithmMetrics> algorithms;  // ascending id
  TokenSummary tokens;
  ChainSummary chain;
  RequestSummary requests;
  std::vector<NotificationEvent> notifications;  // chain order
};

/// Grades every feedback-labeled result against `truth` (Unverified counts as
/// an Authentic prediction) and summarizes tokens and chain activity.
/// Throws Error(MissingLabel) for a graded request without a label.
RunReport compute_metrics(std::span<const ChainRecord> chain, const NetworkState& final_state,
                          const GroundTruth& truth);

/// Every NotificationEvent in chain order, optionally for one provider.
std::vector<NotificationEvent> collect_notifications(std::span<const ChainRecord> chain,
                                                     const std::optional<AccountId>& provider = std::nullopt);

nlohmann::json to_json(const RunReport& report);
nlohmann::json to_json(const NotificationEvent& event);
/// algorithm_id,status,tp,fp,tn,fn,precision,recall
std::string to_csv(const RunReport& report);

}  // namespace veriledger
