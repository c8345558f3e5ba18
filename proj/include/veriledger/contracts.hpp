#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "veriledger/state.hpp"
#include "veriledger/transaction.hpp"

namespace veriledger {

/// Block-level facts a contract call may depend on.
struct ExecutionContext {
  std::uint64_t height = 0;
  AccountId proposer;
  std::uint32_t tx_index = 0;
};

/// Applies one transaction. A rejected transaction leaves `state` untouched
/// (including the sender's nonce) and yields a receipt carrying the error.
Receipt apply_transaction(NetworkState& state, const Transaction& tx, const ExecutionContext& ctx);

struct RewardShare {
  std::string algorithm_id;
  AccountId owner;
  Amount amount = 0;

  bool operator==(const RewardShare&) const = default;
};

/// floor(pool * score_i / sum) each, remainder to the highest score (ties:
/// smallest id). Empty when the scores sum to zero.
std::map<std::string, Amount> compute_epoch_rewards(const std::map<std::string, std::uint64_t>& scores, Amount pool);

/// Mints the epoch pool to owners of Active algorithms in proportion to the
/// correct outcomes each accrued during the epoch, then resets the epoch
/// counters. `epoch_end_height` must be a multiple of the epoch length.
std::vector<RewardShare> distribute_epoch_rewards(NetworkState& state, std::uint64_t epoch_end_height);

}  // namespace veriledger
