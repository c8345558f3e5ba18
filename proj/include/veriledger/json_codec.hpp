#pragma once

// JSON forms of chain data for the .chain.jsonl store. Reals are written as
// the 16-hex-digit IEEE-754 bit pattern so that a record parses back to the
// exact value; readers are strict (unknown or missing keys, wrong types and
// non-canonical numbers raise Error(SerializationError)).

#include <nlohmann/json.hpp>

#include "veriledger/ledger.hpp"
#include "veriledger/state.hpp"
#include "veriledger/transaction.hpp"

namespace veriledger {

nlohmann::json to_json(const Transaction& tx);
Transaction transaction_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Receipt& receipt);
Receipt receipt_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Block& block);
Block block_from_json(const nlohmann::json& j);

/// Genesis-time state only: validators, params and balances. Contract
/// registries must be empty.
nlohmann::json genesis_to_json(const NetworkState& state);
NetworkState genesis_from_json(const nlohmann::json& j);

}  // namespace veriledger
