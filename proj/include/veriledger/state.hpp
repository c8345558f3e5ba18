#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "veriledger/hash.hpp"
#include "veriledger/records.hpp"
#include "veriledger/types.hpp"

namespace veriledger {

/// Tunable contract constants. Every field is part of the state root.
struct ContractParams {
  Amount min_stake = 100;
  Amount min_fee = 10;
  /// Fee split in percent; the burned share is whatever the floors leave over.
  std::uint64_t owner_fee_pct = 70;
  std::uint64_t proposer_fee_pct = 20;
  std::uint64_t challenge_count = 20;
  double activation_accuracy = 0.8;
  std::uint64_t deprecation_window = 50;
  double deprecation_accuracy = 0.5;
  /// Percent of stake burned on deprecation (floor); the rest is refunded.
  std::uint64_t slash_pct = 50;
  std::uint64_t epoch_length = 10;
  Amount epoch_pool = 100;
  AccountId oracle_account = "oracle";
  std::set<std::string> detector_kinds = {"exact-hash", "near-duplicate"};

  bool operator==(const ContractParams&) const = default;
};

struct TokenLedger {
  std::map<AccountId, Amount> balances;
  Amount initial_supply = 0;
  Amount total_minted = 0;
  Amount total_burned = 0;

  Amount balance(const AccountId& id) const;
  void credit(const AccountId& id, Amount amount);
  /// Caller has verified the balance; throws std::logic_error otherwise.
  void debit(const AccountId& id, Amount amount);

  bool operator==(const TokenLedger&) const = default;
};

/// Complete replicated state: validator set, contract registries, tokens and
/// chain tip. Value type; apply_block works on a copy.
struct NetworkState {
  std::uint64_t height = 0;
  /// Hash of the block that produced this state. Not part of the state root.
  Hash256 tip_hash;

  std::vector<Validator> validators;  // ascending by id
  ContractParams params;
  TokenLedger tokens;
  std::map<AccountId, std::uint64_t> nonces;  // last accepted nonce per sender
  std::map<std::string, AlgorithmRecord> algorithms;
  std::vector<ContentRecord> contents;  // registration order
  std::map<std::string, std::size_t> content_by_id;
  std::map<Hash256, std::size_t> content_by_hash;
  std::map<std::string, AnalysisRequest> requests;
  std::map<std::string, AnalysisResultRecord> results;

  /// Algorithm stakes plus fees held for pending requests.
  Amount total_escrowed() const;
  Amount total_balances() const;
  /// balances + escrow == initial supply + minted - burned.
  bool tokens_conserved() const;

  std::vector<std::uint8_t> canonical_encoding() const;
  Hash256 state_root() const;

  bool operator==(const NetworkState&) const = default;

  /// Initial state: sorted validators, funded accounts, no contract records.
  static NetworkState genesis(std::vector<Validator> validators, const std::map<AccountId, Amount>& balances,
                              ContractParams params);
};

}  // namespace veriledger
