#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "veriledger/contracts.hpp"
#include "veriledger/detection.hpp"
#include "veriledger/ledger.hpp"
#include "veriledger/rng.hpp"
#include "veriledger/scenario.hpp"
#include "veriledger/state.hpp"
#include "veriledger/transaction.hpp"

namespace vtest {

using namespace veriledger;

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(VERILEDGER_FIXTURE_DIR) / name; }

inline NetworkState make_state(std::map<AccountId, Amount> balances, ContractParams params = {},
                               std::vector<Validator> validators = {{"val", 100}}) {
  return NetworkState::genesis(std::move(validators), balances, std::move(params));
}

inline ExecutionContext ctx(std::uint64_t height = 1, AccountId proposer = "val") { return {height, proposer, 0}; }

inline std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

inline Embedding bytes_embedding(const std::string& s) {
  const auto b = bytes_of(s);
  return embed(b, MediaType::Bytes);
}

/// Embedding with a single hot bin; distinct bins are orthogonal.
inline Embedding one_hot(std::size_t bin, MediaType t = MediaType::Bytes) {
  Embedding e{t, std::vector<double>(embedding_dimension(t), 0.0)};
  e.values[bin] = 1.0;
  return e;
}

inline std::vector<double> random_nonneg(SplitMix64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.unit();
  return v;
}

/// Sequential nonces per sender.
class Signer {
 public:
  Transaction tx(const AccountId& sender, Payload p) { return {sender, ++nonces_[sender], std::move(p)}; }

 private:
  std::map<AccountId, std::uint64_t> nonces_;
};

/// Produces and applies a block, returning the new state.
inline NetworkState step(const NetworkState& s, std::vector<Transaction> txs, std::vector<Receipt>* receipts = nullptr) {
  ProducedBlock pb = produce_block(s, std::move(txs), s.height + 1);
  if (receipts) *receipts = pb.outcome.receipts;
  return std::move(pb.outcome.state);
}

inline ScenarioConfig golden_config() { return load_scenario_config(fixture("golden_scenario.json")); }

inline std::string read_file(const std::filesystem::path& p) {
  std::FILE* f = std::fopen(p.c_str(), "rb");
  if (!f) return {};
  std::string out;
  char buf[65536];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

inline void write_file(const std::filesystem::path& p, const std::string& data) {
  std::FILE* f = std::fopen(p.c_str(), "wb");
  std::fwrite(data.data(), 1, data.size(), f);
  std::fclose(f);
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("veriledger-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace vtest
