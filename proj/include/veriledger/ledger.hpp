#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "veriledger/contracts.hpp"
#include "veriledger/error.hpp"
#include "veriledger/hash.hpp"
#include "veriledger/state.hpp"
#include "veriledger/transaction.hpp"

namespace veriledger {

struct Block {
  std::uint64_t height = 0;
  Hash256 parent_hash;
  std::uint64_t timestamp = 0;  // simulation tick
  std::string proposer;
  std::vector<Transaction> transactions;
  Hash256 state_root;
  Hash256 block_hash;

  bool operator==(const Block&) const = default;
};

/// A block together with the receipts produced when it was applied.
struct ChainRecord {
  Block block;
  std::vector<Receipt> receipts;

  bool operator==(const ChainRecord&) const = default;
};

/// Digest of the canonical encoding of every field except block_hash.
Hash256 block_hash(const Block& block);

/// hash(parent_hash || height as u64 big-endian).
Hash256 proposer_seed(const Hash256& parent_hash, std::uint64_t height);

/// Stake-weighted draw: with u = prefix_u64(seed) / 2^64, returns the first
/// validator (ascending id) whose cumulative stake fraction exceeds u. The
/// comparison is done exactly in 128-bit integers. `validators` must be
/// sorted by id. Throws EmptyValidatorSet when total stake is zero.
const std::string& select_proposer(std::span<const Validator> validators, const Hash256& seed);

/// Structural block failure; the whole block is discarded.
class BlockError : public Error {
 public:
  BlockError(ErrorCode code, std::uint64_t height, const std::string& detail);
  std::uint64_t height() const noexcept { return height_; }

 private:
  std::uint64_t height_;
};

struct BlockOutcome {
  NetworkState state;
  std::vector<Receipt> receipts;
  std::vector<RewardShare> rewards;
};

/// Validates linkage, height, proposer and hashes, then runs the transactions
/// and epoch payout on a copy of `state`. Throws BlockError with BadParent,
/// BadHeight, WrongProposer, BlockHashMismatch or StateRootMismatch.
BlockOutcome apply_block(const NetworkState& state, const Block& block);

struct ProducedBlock {
  Block block;
  BlockOutcome outcome;
};

/// Builds the next block on top of `state` from `transactions`, filling in the
/// elected proposer, the resulting state root and the block hash.
ProducedBlock produce_block(const NetworkState& state, std::vector<Transaction> transactions, std::uint64_t timestamp);

/// Height-0 block committing to `genesis_state`; also sets its tip_hash.
Block make_genesis(NetworkState& genesis_state);

}  // namespace veriledger
