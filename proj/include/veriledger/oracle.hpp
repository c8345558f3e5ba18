#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "veriledger/detection.hpp"
#include "veriledger/error.hpp"
#include "veriledger/state.hpp"
#include "veriledger/transaction.hpp"

namespace veriledger {

struct OracleConfig {
  AccountId oracle_account = "oracle";
  std::size_t batch_limit = 16;
};

/// One line of the oracle log.
struct OracleLogEntry {
  std::uint64_t height = 0;  // block the commit is destined for
  std::string request_id;
  std::string algorithm_id;  // empty when no model could be selected
  std::optional<Verdict> verdict;
  std::optional<ErrorCode> error;
  std::uint64_t elapsed_ticks = 0;

  bool operator==(const OracleLogEntry&) const = default;
};

/// Tab-separated: height, request_id, algorithm_id ("-" if none), verdict or
/// error code, elapsed ticks.
std::string format_log_line(const OracleLogEntry& entry);

struct OracleBatch {
  std::vector<Transaction> transactions;
  std::vector<OracleLogEntry> log;
};

/// Reads a state snapshot, analyzes up to batch_limit pending requests in
/// request_id order and returns CommitAnalysisResult transactions signed by
/// the oracle account with consecutive nonces. Requests that fail (no eligible
/// algorithm, detector error) stay pending and appear only in the log.
///
/// Detection runs concurrently under ExecutionPolicy::Parallel; the output is
/// identical to the serial policy.
OracleBatch process_pending(const NetworkState& state, const OracleConfig& config,
                            const DetectorRegistry& plugins = DetectorRegistry::builtin(),
                            ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace veriledger
