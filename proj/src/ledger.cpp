#include "veriledger/ledger.hpp"

#include "veriledger/encoding.hpp"

namespace veriledger {

namespace {

constexpr std::uint32_t kBlockEncodingVersion = 1;

// Runs the block body on `next` (already a copy at the new height).
BlockOutcome execute_body(NetworkState next, const std::vector<Transaction>& txs, const std::string& proposer) {
  BlockOutcome out;
  out.receipts.reserve(txs.size());
  for (std::size_t i = 0; i < txs.size(); ++i) {
    ExecutionContext ctx{next.height, proposer, static_cast<std::uint32_t>(i)};
    out.receipts.push_back(apply_transaction(next, txs[i], ctx));
  }
  const std::uint64_t epoch = next.params.epoch_length;
  if (epoch > 0 && next.height % epoch == 0) out.rewards = distribute_epoch_rewards(next, next.height);
  out.state = std::move(next);
  return out;
}

NetworkState advance(const NetworkState& state, std::uint64_t height) {
  NetworkState next = state;
  next.height = height;
  return next;
}

}  // namespace

Hash256 block_hash(const Block& block) {
  ByteWriter w;
  w.u32(kBlockEncodingVersion);
  w.u64(block.height);
  w.hash(block.parent_hash);
  w.u64(block.timestamp);
  w.str(block.proposer);
  w.count(block.transactions.size());
  for (const auto& tx : block.transactions) encode(w, tx);
  w.hash(block.state_root);
  return w.digest();
}

Hash256 proposer_seed(const Hash256& parent_hash, std::uint64_t height) {
  ByteWriter w;
  w.hash(parent_hash);
  w.u64(height);
  return w.digest();
}

const std::string& select_proposer(std::span<const Validator> validators, const Hash256& seed) {
  u128 total = 0;
  for (const auto& v : validators) total += v.stake;
  if (total == 0) throw Error(ErrorCode::EmptyValidatorSet, "total stake is zero");

  // cumulative/total > x/2^64  <=>  cumulative * 2^64 > x * total
  const u128 draw = static_cast<u128>(seed.prefix_u64()) * total;
  u128 cumulative = 0;
  for (const auto& v : validators) {
    cumulative += v.stake;
    if ((cumulative << 64) > draw) return v.id;
  }
  // unreachable: cumulative == total and draw < total * 2^64
  return validators.back().id;
}

BlockError::BlockError(ErrorCode code, std::uint64_t height, const std::string& detail)
    : Error(code, "block " + std::to_string(height) + (detail.empty() ? "" : ": " + detail)), height_(height) {}

BlockOutcome apply_block(const NetworkState& state, const Block& block) {
  if (block.parent_hash != state.tip_hash) {
    throw BlockError(ErrorCode::BadParent, block.height, "parent " + block.parent_hash.hex() + " != tip " + state.tip_hash.hex());
  }
  if (block.height != state.height + 1) {
    throw BlockError(ErrorCode::BadHeight, block.height, "expected " + std::to_string(state.height + 1));
  }
  const std::string& expected = select_proposer(state.validators, proposer_seed(block.parent_hash, block.height));
  if (block.proposer != expected) {
    throw BlockError(ErrorCode::WrongProposer, block.height, "got '" + block.proposer + "', elected '" + expected + "'");
  }
  if (block_hash(block) != block.block_hash) {
    throw BlockError(ErrorCode::BlockHashMismatch, block.height, "");
  }

  BlockOutcome out = execute_body(advance(state, block.height), block.transactions, block.proposer);
  const Hash256 root = out.state.state_root();
  if (root != block.state_root) {
    throw BlockError(ErrorCode::StateRootMismatch, block.height,
                     "computed " + root.hex() + ", block has " + block.state_root.hex());
  }
  out.state.tip_hash = block.block_hash;
  return out;
}

ProducedBlock produce_block(const NetworkState& state, std::vector<Transaction> transactions, std::uint64_t timestamp) {
  ProducedBlock pb;
  Block& b = pb.block;
  b.height = state.height + 1;
  b.parent_hash = state.tip_hash;
  b.timestamp = timestamp;
  b.proposer = select_proposer(state.validators, proposer_seed(b.parent_hash, b.height));
  b.transactions = std::move(transactions);
  pb.outcome = execute_body(advance(state, b.height), b.transactions, b.proposer);
  b.state_root = pb.outcome.state.state_root();
  b.block_hash = block_hash(b);
  pb.outcome.state.tip_hash = b.block_hash;
  return pb;
}

Block make_genesis(NetworkState& genesis_state) {
  genesis_state.height = 0;
  Block g;
  g.height = 0;
  g.timestamp = 0;
  g.state_root = genesis_state.state_root();
  g.block_hash = block_hash(g);
  genesis_state.tip_hash = g.block_hash;
  return g;
}

}  // namespace veriledger
