#include "veriledger/state.hpp"

#include <algorithm>
#include <stdexcept>

#include "veriledger/codec.hpp"
#include "veriledger/encoding.hpp"

namespace veriledger {

namespace {

constexpr std::uint32_t kStateEncodingVersion = 1;

void encode(ByteWriter& w, const ContractParams& p) {
  w.u64(p.min_stake);
  w.u64(p.min_fee);
  w.u64(p.owner_fee_pct);
  w.u64(p.proposer_fee_pct);
  w.u64(p.challenge_count);
  w.f64(p.activation_accuracy);
  w.u64(p.deprecation_window);
  w.f64(p.deprecation_accuracy);
  w.u64(p.slash_pct);
  w.u64(p.epoch_length);
  w.u64(p.epoch_pool);
  w.str(p.oracle_account);
  w.count(p.detector_kinds.size());
  for (const auto& k : p.detector_kinds) w.str(k);
}

void encode(ByteWriter& w, const AlgorithmRecord& a) {
  w.str(a.algorithm_id);
  w.str(a.owner);
  encode_media_set(w, a.media_types);
  encode(w, a.detector);
  w.u8(static_cast<std::uint8_t>(a.status));
  w.u64(a.stake);
  w.u64(a.perf.tp);
  w.u64(a.perf.fp);
  w.u64(a.perf.tn);
  w.u64(a.perf.fn);
  w.u64(a.challenge_passed);
  w.count(a.challenges_seen.size());
  for (const auto& c : a.challenges_seen) w.str(c);
  w.u64(a.registered_at);
  w.u64(a.epoch_correct);
}

void encode(ByteWriter& w, const ContentRecord& c) {
  w.str(c.content_id);
  w.str(c.provider);
  w.u8(static_cast<std::uint8_t>(c.media_type));
  w.hash(c.content_hash);
  encode(w, c.embedding);
  encode(w, c.metadata);
  w.u64(c.registered_at);
}

void encode(ByteWriter& w, const AnalysisRequest& r) {
  w.str(r.request_id);
  w.str(r.submitter);
  w.u8(static_cast<std::uint8_t>(r.media_type));
  w.hash(r.content_hash);
  encode(w, r.embedding);
  w.u64(r.fee);
  w.u8(static_cast<std::uint8_t>(r.status));
  w.u64(r.submitted_at);
}

void encode(ByteWriter& w, const AnalysisResultRecord& r) {
  w.str(r.request_id);
  w.str(r.algorithm_id);
  w.u8(static_cast<std::uint8_t>(r.verdict));
  w.f64(r.confidence);
  encode(w, r.matched_content);
  w.u64(r.committed_at);
  w.boolean(r.feedback.has_value());
  if (r.feedback) w.u8(static_cast<std::uint8_t>(*r.feedback));
}

}  // namespace

Amount TokenLedger::balance(const AccountId& id) const {
  auto it = balances.find(id);
  return it == balances.end() ? 0 : it->second;
}

void TokenLedger::credit(const AccountId& id, Amount amount) {
  if (amount == 0) return;
  balances[id] += amount;
}

void TokenLedger::debit(const AccountId& id, Amount amount) {
  if (amount == 0) return;
  auto it = balances.find(id);
  if (it == balances.end() || it->second < amount) throw std::logic_error("debit exceeds balance of " + id);
  it->second -= amount;
}

Amount NetworkState::total_escrowed() const {
  Amount sum = 0;
  for (const auto& [id, a] : algorithms) sum += a.stake;
  for (const auto& [id, r] : requests) {
    if (r.status == RequestStatus::Pending) sum += r.fee;
  }
  return sum;
}

Amount NetworkState::total_balances() const {
  Amount sum = 0;
  for (const auto& [id, b] : tokens.balances) sum += b;
  return sum;
}

bool NetworkState::tokens_conserved() const {
  // Rearranged to stay in unsigned arithmetic.
  return total_balances() + total_escrowed() + tokens.total_burned == tokens.initial_supply + tokens.total_minted;
}

std::vector<std::uint8_t> NetworkState::canonical_encoding() const {
  ByteWriter w;
  w.u32(kStateEncodingVersion);
  w.u64(height);

  w.count(validators.size());
  for (const auto& v : validators) {
    w.str(v.id);
    w.u64(v.stake);
  }

  encode(w, params);

  w.count(tokens.balances.size());
  for (const auto& [id, amount] : tokens.balances) {
    w.str(id);
    w.u64(amount);
  }
  w.u64(tokens.initial_supply);
  w.u64(tokens.total_minted);
  w.u64(tokens.total_burned);

  w.count(nonces.size());
  for (const auto& [id, n] : nonces) {
    w.str(id);
    w.u64(n);
  }

  w.count(algorithms.size());
  for (const auto& [id, a] : algorithms) encode(w, a);
  w.count(contents.size());
  for (const auto& c : contents) encode(w, c);
  w.count(requests.size());
  for (const auto& [id, r] : requests) encode(w, r);
  w.count(results.size());
  for (const auto& [id, r] : results) encode(w, r);
  return w.take();
}

Hash256 NetworkState::state_root() const { return hash_bytes(canonical_encoding()); }

NetworkState NetworkState::genesis(std::vector<Validator> validators, const std::map<AccountId, Amount>& balances,
                                   ContractParams params) {
  std::sort(validators.begin(), validators.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < validators.size(); ++i) {
    if (validators[i].id == validators[i - 1].id) throw std::invalid_argument("duplicate validator id " + validators[i].id);
  }
  NetworkState s;
  s.validators = std::move(validators);
  s.params = std::move(params);
  for (const auto& [id, amount] : balances) {
    s.tokens.credit(id, amount);
    s.tokens.initial_supply += amount;
  }
  return s;
}

}  // namespace veriledger
