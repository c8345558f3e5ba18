#include "veriledger/transaction.hpp"

#include <array>

#include "veriledger/codec.hpp"

namespace veriledger {

namespace {

constexpr std::array<std::string_view, 7> kKindNames = {
    "RegisterAlgorithm", "SubmitChallengeResult", "RegisterContent", "SubmitAnalysisRequest",
    "CommitAnalysisResult", "SubmitFeedback", "TransferTokens",
};

struct PayloadEncoder {
  ByteWriter& w;

  void operator()(const RegisterAlgorithm& p) const {
    w.str(p.algorithm_id);
    encode_media_set(w, p.media_types);
    encode(w, p.detector);
    w.u64(p.stake);
  }
  void operator()(const SubmitChallengeResult& p) const {
    w.str(p.algorithm_id);
    w.str(p.challenge_id);
    w.u8(static_cast<std::uint8_t>(p.predicted_label));
    w.u8(static_cast<std::uint8_t>(p.true_label));
  }
  void operator()(const RegisterContent& p) const {
    w.str(p.content_id);
    w.u8(static_cast<std::uint8_t>(p.media_type));
    w.hash(p.content_hash);
    encode(w, p.embedding);
    encode(w, p.metadata);
  }
  void operator()(const SubmitAnalysisRequest& p) const {
    w.u8(static_cast<std::uint8_t>(p.media_type));
    w.hash(p.content_hash);
    encode(w, p.embedding);
    w.u64(p.fee);
  }
  void operator()(const CommitAnalysisResult& p) const {
    w.str(p.request_id);
    w.str(p.algorithm_id);
    w.u8(static_cast<std::uint8_t>(p.verdict));
    w.f64(p.confidence);
    encode(w, p.matched_content);
  }
  void operator()(const SubmitFeedback& p) const {
    w.str(p.request_id);
    w.u8(static_cast<std::uint8_t>(p.true_label));
  }
  void operator()(const TransferTokens& p) const {
    w.str(p.recipient);
    w.u64(p.amount);
  }
};

}  // namespace

std::string_view to_string(TxKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

std::optional<TxKind> parse_tx_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<TxKind>(i);
  }
  return std::nullopt;
}

void encode(ByteWriter& w, const Transaction& tx) {
  w.u8(static_cast<std::uint8_t>(tx.kind()));
  w.str(tx.sender);
  w.u64(tx.nonce);
  std::visit(PayloadEncoder{w}, tx.payload);
}

Hash256 tx_hash(const Transaction& tx) {
  ByteWriter w;
  encode(w, tx);
  return w.digest();
}

std::string request_id_for(const Transaction& tx) { return tx_hash(tx).hex().substr(0, 16); }

}  // namespace veriledger
