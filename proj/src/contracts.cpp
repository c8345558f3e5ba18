#include "veriledger/contracts.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "veriledger/detection.hpp"

namespace veriledger {

namespace {

using Reject = std::optional<ErrorCode>;

struct Outcome {
  Reject error;
  std::vector<Event> events;
};

Outcome rejected(ErrorCode code) { return {code, {}}; }

bool valid_embedding(const Embedding& e, MediaType expected) {
  return e.media_type == expected && e.values.size() == embedding_dimension(expected);
}

bool finite_non_negative(const Embedding& e) {
  for (double v : e.values) {
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  return true;
}

bool is_label(Verdict v) { return v == Verdict::Authentic || v == Verdict::Deepfake; }

// Moves an algorithm to Deprecated, burning the slash share of its stake and
// refunding the rest to the owner.
void deprecate(NetworkState& state, AlgorithmRecord& algo, std::vector<Event>& events) {
  const Amount burned = algo.stake * state.params.slash_pct / 100;
  const Amount refunded = algo.stake - burned;
  events.push_back(StatusChangedEvent{algo.algorithm_id, algo.status, AlgorithmStatus::Deprecated});
  algo.status = AlgorithmStatus::Deprecated;
  algo.stake = 0;
  state.tokens.total_burned += burned;
  state.tokens.credit(algo.owner, refunded);
  events.push_back(StakeSlashedEvent{algo.algorithm_id, burned, refunded});
}

class Executor {
 public:
  Executor(NetworkState& state, const Transaction& tx, const ExecutionContext& ctx)
      : s_(state), tx_(tx), ctx_(ctx), p_(state.params) {}

  Outcome operator()(const RegisterAlgorithm& p) {
    if (p.algorithm_id.empty() || p.media_types.empty()) return rejected(ErrorCode::InvalidPayload);
    if (s_.algorithms.contains(p.algorithm_id)) return rejected(ErrorCode::DuplicateAlgorithm);
    if (!p_.detector_kinds.contains(p.detector.kind)) return rejected(ErrorCode::UnknownDetector);
    if (p.stake < p_.min_stake || s_.tokens.balance(tx_.sender) < p.stake) {
      return rejected(ErrorCode::InsufficientStake);
    }

    s_.tokens.debit(tx_.sender, p.stake);
    AlgorithmRecord rec;
    rec.algorithm_id = p.algorithm_id;
    rec.owner = tx_.sender;
    rec.media_types = p.media_types;
    rec.detector = p.detector;
    rec.stake = p.stake;
    rec.registered_at = ctx_.height;
    s_.algorithms.emplace(p.algorithm_id, std::move(rec));
    return {};
  }

  Outcome operator()(const SubmitChallengeResult& p) {
    // challenges are executed off-chain, so only the oracle may report them
    if (tx_.sender != p_.oracle_account) return rejected(ErrorCode::UnauthorizedOracle);
    auto it = s_.algorithms.find(p.algorithm_id);
    if (it == s_.algorithms.end()) return rejected(ErrorCode::UnknownAlgorithm);
    AlgorithmRecord& algo = it->second;
    if (algo.status != AlgorithmStatus::Pending) return rejected(ErrorCode::NotPending);
    if (p.challenge_id.empty() || !is_label(p.true_label)) return rejected(ErrorCode::InvalidPayload);
    if (algo.challenges_seen.contains(p.challenge_id)) return rejected(ErrorCode::DuplicateChallenge);

    Outcome out;
    algo.challenges_seen.insert(p.challenge_id);
    if (predicts_deepfake(p.predicted_label) == predicts_deepfake(p.true_label)) ++algo.challenge_passed;
    const std::uint64_t submitted = algo.challenges_seen.size();
    if (submitted >= p_.challenge_count) {
      const double accuracy = static_cast<double>(algo.challenge_passed) / static_cast<double>(submitted);
      if (accuracy >= p_.activation_accuracy) {
        out.events.push_back(StatusChangedEvent{algo.algorithm_id, algo.status, AlgorithmStatus::Active});
        algo.status = AlgorithmStatus::Active;
      } else {
        deprecate(s_, algo, out.events);
      }
    }
    return out;
  }

  Outcome operator()(const RegisterContent& p) {
    if (p.content_id.empty()) return rejected(ErrorCode::InvalidPayload);
    if (s_.content_by_hash.contains(p.content_hash) || s_.content_by_id.contains(p.content_id)) {
      return rejected(ErrorCode::DuplicateContent);
    }
    if (!valid_embedding(p.embedding, p.media_type)) return rejected(ErrorCode::BadEmbeddingDimension);
    if (!finite_non_negative(p.embedding)) return rejected(ErrorCode::InvalidPayload);

    const std::size_t index = s_.contents.size();
    s_.contents.push_back(
        ContentRecord{p.content_id, tx_.sender, p.media_type, p.content_hash, p.embedding, p.metadata, ctx_.height});
    s_.content_by_id.emplace(p.content_id, index);
    s_.content_by_hash.emplace(p.content_hash, index);
    return {};
  }

  Outcome operator()(const SubmitAnalysisRequest& p) {
    if (!valid_embedding(p.embedding, p.media_type)) return rejected(ErrorCode::BadEmbeddingDimension);
    if (!finite_non_negative(p.embedding)) return rejected(ErrorCode::InvalidPayload);
    if (p.fee < p_.min_fee) return rejected(ErrorCode::InsufficientFee);
    if (s_.tokens.balance(tx_.sender) < p.fee) return rejected(ErrorCode::InsufficientBalance);
    const std::string request_id = request_id_for(tx_);
    if (s_.requests.contains(request_id)) return rejected(ErrorCode::InvalidPayload);

    s_.tokens.debit(tx_.sender, p.fee);
    s_.requests.emplace(request_id, AnalysisRequest{request_id, tx_.sender, p.media_type, p.content_hash, p.embedding,
                                                    p.fee, RequestStatus::Pending, ctx_.height});
    return {std::nullopt, {RequestCreatedEvent{request_id}}};
  }

  Outcome operator()(const CommitAnalysisResult& p) {
    if (tx_.sender != p_.oracle_account) return rejected(ErrorCode::UnauthorizedOracle);
    auto req_it = s_.requests.find(p.request_id);
    if (req_it == s_.requests.end()) return rejected(ErrorCode::UnknownRequest);
    AnalysisRequest& req = req_it->second;
    if (req.status == RequestStatus::Completed) return rejected(ErrorCode::RequestCompleted);
    auto algo_it = s_.algorithms.find(p.algorithm_id);
    if (algo_it == s_.algorithms.end()) return rejected(ErrorCode::UnknownAlgorithm);
    const AlgorithmRecord& algo = algo_it->second;
    if (algo.status != AlgorithmStatus::Active || !algo.covers(req.media_type)) {
      return rejected(ErrorCode::AlgorithmNotActive);
    }
    if (result_invariant_violation(p.verdict, p.confidence, p.matched_content)) {
      return rejected(ErrorCode::InvalidResult);
    }
    for (const auto& m : p.matched_content) {
      if (!s_.content_by_id.contains(m.content_id)) return rejected(ErrorCode::InvalidResult);
    }

    Outcome out;
    req.status = RequestStatus::Completed;
    s_.results.emplace(p.request_id, AnalysisResultRecord{p.request_id, p.algorithm_id, p.verdict, p.confidence,
                                                          p.matched_content, ctx_.height, std::nullopt});

    const Amount owner_cut = req.fee * p_.owner_fee_pct / 100;
    const Amount proposer_cut = req.fee * p_.proposer_fee_pct / 100;
    const Amount burned = req.fee - owner_cut - proposer_cut;
    s_.tokens.credit(algo.owner, owner_cut);
    s_.tokens.credit(ctx_.proposer, proposer_cut);
    s_.tokens.total_burned += burned;
    out.events.push_back(FeeSplitEvent{p.request_id, algo.owner, owner_cut, ctx_.proposer, proposer_cut, burned});

    if (p.verdict == Verdict::Deepfake) {
      for (const auto& m : p.matched_content) {
        const ContentRecord& content = s_.contents[s_.content_by_id.at(m.content_id)];
        out.events.push_back(NotificationEvent{content.provider, m.content_id, p.request_id, m.similarity});
      }
    }
    return out;
  }

  Outcome operator()(const SubmitFeedback& p) {
    auto req_it = s_.requests.find(p.request_id);
    if (req_it == s_.requests.end()) return rejected(ErrorCode::UnknownRequest);
    if (req_it->second.submitter != tx_.sender) return rejected(ErrorCode::NotSubmitter);
    if (req_it->second.status != RequestStatus::Completed) return rejected(ErrorCode::RequestPending);
    AnalysisResultRecord& result = s_.results.at(p.request_id);
    if (result.feedback) return rejected(ErrorCode::DuplicateFeedback);
    if (!is_label(p.true_label)) return rejected(ErrorCode::InvalidPayload);

    Outcome out;
    result.feedback = p.true_label;
    AlgorithmRecord& algo = s_.algorithms.at(result.algorithm_id);
    const bool predicted = predicts_deepfake(result.verdict);
    const bool actual = predicts_deepfake(p.true_label);
    if (predicted && actual) {
      ++algo.perf.tp;
    } else if (!predicted && !actual) {
      ++algo.perf.tn;
    } else if (predicted) {
      ++algo.perf.fp;
    } else {
      ++algo.perf.fn;
    }
    if (predicted == actual) ++algo.epoch_correct;

    const std::uint64_t labeled = algo.perf.total();
    if (algo.status == AlgorithmStatus::Active && labeled >= p_.deprecation_window) {
      const double accuracy = static_cast<double>(algo.perf.correct()) / static_cast<double>(labeled);
      if (accuracy < p_.deprecation_accuracy) deprecate(s_, algo, out.events);
    }
    return out;
  }

  Outcome operator()(const TransferTokens& p) {
    if (p.recipient.empty()) return rejected(ErrorCode::InvalidPayload);
    if (p.amount == 0) return rejected(ErrorCode::BadAmount);
    if (s_.tokens.balance(tx_.sender) < p.amount) return rejected(ErrorCode::InsufficientBalance);
    s_.tokens.debit(tx_.sender, p.amount);
    s_.tokens.credit(p.recipient, p.amount);
    return {};
  }

 private:
  NetworkState& s_;
  const Transaction& tx_;
  const ExecutionContext& ctx_;
  const ContractParams& p_;
};

}  // namespace

Receipt apply_transaction(NetworkState& state, const Transaction& tx, const ExecutionContext& ctx) {
  Receipt receipt;
  receipt.tx_index = ctx.tx_index;
  if (tx.sender.empty()) {
    receipt.error = ErrorCode::InvalidPayload;
    return receipt;
  }
  auto nonce_it = state.nonces.find(tx.sender);
  const std::uint64_t last_nonce = nonce_it == state.nonces.end() ? 0 : nonce_it->second;
  if (tx.nonce <= last_nonce) {
    receipt.error = ErrorCode::BadNonce;
    return receipt;
  }

  Outcome out = std::visit(Executor{state, tx, ctx}, tx.payload);
  if (out.error) {
    receipt.error = out.error;
    return receipt;
  }
  state.nonces[tx.sender] = tx.nonce;
  receipt.accepted = true;
  receipt.events = std::move(out.events);
  return receipt;
}

std::map<std::string, Amount> compute_epoch_rewards(const std::map<std::string, std::uint64_t>& scores, Amount pool) {
  u128 total = 0;
  for (const auto& [id, score] : scores) total += score;
  std::map<std::string, Amount> rewards;
  if (total == 0) return rewards;

  Amount distributed = 0;
  const std::string* leader = nullptr;
  std::uint64_t leader_score = 0;
  for (const auto& [id, score] : scores) {
    // map iteration is id-ascending, so strict > keeps the smallest id on ties
    if (leader == nullptr || score > leader_score) {
      leader = &id;
      leader_score = score;
    }
    const auto share = static_cast<Amount>(static_cast<u128>(pool) * score / total);
    rewards[id] = share;
    distributed += share;
  }
  rewards[*leader] += pool - distributed;
  return rewards;
}

std::vector<RewardShare> distribute_epoch_rewards(NetworkState& state, std::uint64_t epoch_end_height) {
  const std::uint64_t epoch_length = state.params.epoch_length;
  if (epoch_length == 0 || epoch_end_height % epoch_length != 0) {
    throw std::invalid_argument("distribute_epoch_rewards: height is not an epoch boundary");
  }
  std::map<std::string, std::uint64_t> scores;
  for (const auto& [id, algo] : state.algorithms) {
    if (algo.status == AlgorithmStatus::Active) scores[id] = algo.epoch_correct;
  }
  std::vector<RewardShare> shares;
  for (const auto& [id, amount] : compute_epoch_rewards(scores, state.params.epoch_pool)) {
    if (amount == 0) continue;
    const AccountId& owner = state.algorithms.at(id).owner;
    state.tokens.credit(owner, amount);
    state.tokens.total_minted += amount;
    shares.push_back({id, owner, amount});
  }
  for (auto& [id, algo] : state.algorithms) algo.epoch_correct = 0;
  return shares;
}

}  // namespace veriledger
