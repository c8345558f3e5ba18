#include "veriledger/json_codec.hpp"

#include <initializer_list>
#include <string>

#include "veriledger/encoding.hpp"
#include "veriledger/error.hpp"

namespace veriledger {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::SerializationError, what); }

std::string f64_hex(double v) {
  const std::uint64_t bits = f64_bits(v);
  std::array<std::uint8_t, 8> raw{};
  for (int i = 0; i < 8; ++i) raw[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(bits >> (56 - 8 * i));
  return to_hex(raw);
}

double f64_from_hex(std::string_view text, const char* what) {
  auto raw = from_hex(text);
  if (!raw || raw->size() != 8) fail(std::string(what) + ": expected 16 lowercase hex digits");
  std::uint64_t bits = 0;
  for (auto b : *raw) bits = (bits << 8) | b;
  return f64_from_bits(bits);
}

// Object with exactly the listed keys.
class Fields {
 public:
  Fields(const json& j, std::initializer_list<const char*> keys, const char* what) : j_(j), what_(what) {
    if (!j.is_object()) fail(std::string(what) + ": expected object");
    if (j.size() != keys.size()) fail(std::string(what) + ": unexpected key set");
    for (const char* k : keys) {
      if (!j.contains(k)) fail(std::string(what) + ": missing '" + k + "'");
    }
  }

  const json& at(const char* key) const { return j_.at(key); }

  std::uint64_t u64(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_number_unsigned()) fail(ctx(key) + ": expected unsigned integer");
    return v.get<std::uint64_t>();
  }
  std::string str(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_string()) fail(ctx(key) + ": expected string");
    return v.get<std::string>();
  }
  bool boolean(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(ctx(key) + ": expected boolean");
    return v.get<bool>();
  }
  double f64(const char* key) const { return f64_from_hex(str(key), what_); }
  Hash256 hash(const char* key) const {
    auto h = Hash256::from_hex(str(key));
    if (!h) fail(ctx(key) + ": expected 64 lowercase hex digits");
    return *h;
  }
  const json& array(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_array()) fail(ctx(key) + ": expected array");
    return v;
  }
  const json& object(const char* key) const {
    const json& v = j_.at(key);
    if (!v.is_object()) fail(ctx(key) + ": expected object");
    return v;
  }
  MediaType media(const char* key) const {
    auto t = parse_media_type(str(key));
    if (!t) fail(ctx(key) + ": unknown media type");
    return *t;
  }
  Verdict verdict(const char* key) const {
    auto v = parse_verdict(str(key));
    if (!v) fail(ctx(key) + ": unknown verdict");
    return *v;
  }
  AlgorithmStatus status(const char* key) const {
    auto s = parse_algorithm_status(str(key));
    if (!s) fail(ctx(key) + ": unknown status");
    return *s;
  }

 private:
  std::string ctx(const char* key) const { return std::string(what_) + "." + key; }

  const json& j_;
  const char* what_;
};

std::string string_value(const json& v, const char* what) {
  if (!v.is_string()) fail(std::string(what) + ": expected string");
  return v.get<std::string>();
}

json to_json(const Embedding& e) {
  std::string values;
  values.reserve(e.values.size() * 16);
  for (double v : e.values) values += f64_hex(v);
  return {{"media_type", to_string(e.media_type)}, {"values", values}};
}

Embedding embedding_from_json(const json& j) {
  Fields f(j, {"media_type", "values"}, "embedding");
  Embedding e;
  e.media_type = f.media("media_type");
  const std::string values = f.str("values");
  if (values.size() % 16 != 0) fail("embedding.values: length not a multiple of 16");
  for (std::size_t i = 0; i < values.size(); i += 16) {
    e.values.push_back(f64_from_hex(std::string_view(values).substr(i, 16), "embedding.values"));
  }
  return e;
}

json to_json(const DetectorSpec& d) {
  json params = json::object();
  for (const auto& [k, v] : d.params) params[k] = f64_hex(v);
  return {{"kind", d.kind}, {"params", params}};
}

DetectorSpec detector_from_json(const json& j) {
  Fields f(j, {"kind", "params"}, "detector");
  DetectorSpec d;
  d.kind = f.str("kind");
  for (const auto& [k, v] : f.object("params").items()) {
    d.params[k] = f64_from_hex(string_value(v, "detector.params"), "detector.params");
  }
  return d;
}

json to_json(const std::set<MediaType>& types) {
  json arr = json::array();
  for (auto t : types) arr.push_back(to_string(t));
  return arr;
}

std::set<MediaType> media_set_from_json(const json& arr) {
  std::set<MediaType> out;
  for (const auto& v : arr) {
    auto t = parse_media_type(string_value(v, "media_types"));
    if (!t || !out.insert(*t).second) fail("media_types: unknown or duplicate entry");
  }
  return out;
}

json to_json(const std::vector<MatchCandidate>& matches) {
  json arr = json::array();
  for (const auto& m : matches) arr.push_back({{"content_id", m.content_id}, {"similarity", f64_hex(m.similarity)}});
  return arr;
}

std::vector<MatchCandidate> matches_from_json(const json& arr) {
  std::vector<MatchCandidate> out;
  for (const auto& m : arr) {
    Fields f(m, {"content_id", "similarity"}, "match");
    out.push_back({f.str("content_id"), f.f64("similarity")});
  }
  return out;
}

std::map<std::string, std::string> metadata_from_json(const json& j) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) out[k] = string_value(v, "metadata");
  return out;
}

struct PayloadToJson {
  json operator()(const RegisterAlgorithm& p) const {
    return {{"algorithm_id", p.algorithm_id},
            {"media_types", to_json(p.media_types)},
            {"detector", to_json(p.detector)},
            {"stake", p.stake}};
  }
  json operator()(const SubmitChallengeResult& p) const {
    return {{"algorithm_id", p.algorithm_id},
            {"challenge_id", p.challenge_id},
            {"predicted_label", to_string(p.predicted_label)},
            {"true_label", to_string(p.true_label)}};
  }
  json operator()(const RegisterContent& p) const {
    return {{"content_id", p.content_id},
            {"media_type", to_string(p.media_type)},
            {"content_hash", p.content_hash.hex()},
            {"embedding", to_json(p.embedding)},
            {"metadata", p.metadata}};
  }
  json operator()(const SubmitAnalysisRequest& p) const {
    return {{"media_type", to_string(p.media_type)},
            {"content_hash", p.content_hash.hex()},
            {"embedding", to_json(p.embedding)},
            {"fee", p.fee}};
  }
  json operator()(const CommitAnalysisResult& p) const {
    return {{"request_id", p.request_id},
            {"algorithm_id", p.algorithm_id},
            {"verdict", to_string(p.verdict)},
            {"confidence", f64_hex(p.confidence)},
            {"matched_content", to_json(p.matched_content)}};
  }
  json operator()(const SubmitFeedback& p) const {
    return {{"request_id", p.request_id}, {"true_label", to_string(p.true_label)}};
  }
  json operator()(const TransferTokens& p) const { return {{"recipient", p.recipient}, {"amount", p.amount}}; }
};

Payload payload_from_json(TxKind kind, const json& j) {
  switch (kind) {
    case TxKind::RegisterAlgorithm: {
      Fields f(j, {"algorithm_id", "media_types", "detector", "stake"}, "RegisterAlgorithm");
      return RegisterAlgorithm{f.str("algorithm_id"), media_set_from_json(f.array("media_types")),
                               detector_from_json(f.at("detector")), f.u64("stake")};
    }
    case TxKind::SubmitChallengeResult: {
      Fields f(j, {"algorithm_id", "challenge_id", "predicted_label", "true_label"}, "SubmitChallengeResult");
      return SubmitChallengeResult{f.str("algorithm_id"), f.str("challenge_id"), f.verdict("predicted_label"),
                                   f.verdict("true_label")};
    }
    case TxKind::RegisterContent: {
      Fields f(j, {"content_id", "media_type", "content_hash", "embedding", "metadata"}, "RegisterContent");
      return RegisterContent{f.str("content_id"), f.media("media_type"), f.hash("content_hash"),
                             embedding_from_json(f.at("embedding")), metadata_from_json(f.object("metadata"))};
    }
    case TxKind::SubmitAnalysisRequest: {
      Fields f(j, {"media_type", "content_hash", "embedding", "fee"}, "SubmitAnalysisRequest");
      return SubmitAnalysisRequest{f.media("media_type"), f.hash("content_hash"),
                                   embedding_from_json(f.at("embedding")), f.u64("fee")};
    }
    case TxKind::CommitAnalysisResult: {
      Fields f(j, {"request_id", "algorithm_id", "verdict", "confidence", "matched_content"}, "CommitAnalysisResult");
      return CommitAnalysisResult{f.str("request_id"), f.str("algorithm_id"), f.verdict("verdict"),
                                  f.f64("confidence"), matches_from_json(f.array("matched_content"))};
    }
    case TxKind::SubmitFeedback: {
      Fields f(j, {"request_id", "true_label"}, "SubmitFeedback");
      return SubmitFeedback{f.str("request_id"), f.verdict("true_label")};
    }
    case TxKind::TransferTokens: {
      Fields f(j, {"recipient", "amount"}, "TransferTokens");
      return TransferTokens{f.str("recipient"), f.u64("amount")};
    }
  }
  fail("unknown transaction kind");
}

struct EventToJson {
  json operator()(const NotificationEvent& e) const {
    return {{"type", "Notification"},
            {"provider", e.provider},
            {"content_id", e.content_id},
            {"request_id", e.request_id},
            {"similarity", f64_hex(e.similarity)}};
  }
  json operator()(const StatusChangedEvent& e) const {
    return {{"type", "StatusChanged"},
            {"algorithm_id", e.algorithm_id},
            {"from", to_string(e.from)},
            {"to", to_string(e.to)}};
  }
  json operator()(const RequestCreatedEvent& e) const {
    return {{"type", "RequestCreated"}, {"request_id", e.request_id}};
  }
  json operator()(const FeeSplitEvent& e) const {
    return {{"type", "FeeSplit"},          {"request_id", e.request_id},
            {"owner", e.owner},            {"owner_amount", e.owner_amount},
            {"proposer", e.proposer},      {"proposer_amount", e.proposer_amount},
            {"burned", e.burned}};
  }
  json operator()(const StakeSlashedEvent& e) const {
    return {{"type", "StakeSlashed"}, {"algorithm_id", e.algorithm_id}, {"burned", e.burned}, {"refunded", e.refunded}};
  }
};

Event event_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) fail("event: missing type");
  const std::string type = string_value(j.at("type"), "event.type");
  if (type == "Notification") {
    Fields f(j, {"type", "provider", "content_id", "request_id", "similarity"}, "Notification");
    return NotificationEvent{f.str("provider"), f.str("content_id"), f.str("request_id"), f.f64("similarity")};
  }
  if (type == "StatusChanged") {
    Fields f(j, {"type", "algorithm_id", "from", "to"}, "StatusChanged");
    return StatusChangedEvent{f.str("algorithm_id"), f.status("from"), f.status("to")};
  }
  if (type == "RequestCreated") {
    Fields f(j, {"type", "request_id"}, "RequestCreated");
    return RequestCreatedEvent{f.str("request_id")};
  }
  if (type == "FeeSplit") {
    Fields f(j, {"type", "request_id", "owner", "owner_amount", "proposer", "proposer_amount", "burned"}, "FeeSplit");
    return FeeSplitEvent{f.str("request_id"), f.str("owner"),          f.u64("owner_amount"),
                         f.str("proposer"),   f.u64("proposer_amount"), f.u64("burned")};
  }
  if (type == "StakeSlashed") {
    Fields f(j, {"type", "algorithm_id", "burned", "refunded"}, "StakeSlashed");
    return StakeSlashedEvent{f.str("algorithm_id"), f.u64("burned"), f.u64("refunded")};
  }
  fail("event: unknown type " + type);
}

json to_json(const ContractParams& p) {
  return {{"min_stake", p.min_stake},
          {"min_fee", p.min_fee},
          {"owner_fee_pct", p.owner_fee_pct},
          {"proposer_fee_pct", p.proposer_fee_pct},
          {"challenge_count", p.challenge_count},
          {"activation_accuracy", f64_hex(p.activation_accuracy)},
          {"deprecation_window", p.deprecation_window},
          {"deprecation_accuracy", f64_hex(p.deprecation_accuracy)},
          {"slash_pct", p.slash_pct},
          {"epoch_length", p.epoch_length},
          {"epoch_pool", p.epoch_pool},
          {"oracle_account", p.oracle_account},
          {"detector_kinds", p.detector_kinds}};
}

ContractParams params_from_json(const json& j) {
  Fields f(j,
           {"min_stake", "min_fee", "owner_fee_pct", "proposer_fee_pct", "challenge_count", "activation_accuracy",
            "deprecation_window", "deprecation_accuracy", "slash_pct", "epoch_length", "epoch_pool", "oracle_account",
            "detector_kinds"},
           "params");
  ContractParams p;
  p.min_stake = f.u64("min_stake");
  p.min_fee = f.u64("min_fee");
  p.owner_fee_pct = f.u64("owner_fee_pct");
  p.proposer_fee_pct = f.u64("proposer_fee_pct");
  p.challenge_count = f.u64("challenge_count");
  p.activation_accuracy = f.f64("activation_accuracy");
  p.deprecation_window = f.u64("deprecation_window");
  p.deprecation_accuracy = f.f64("deprecation_accuracy");
  p.slash_pct = f.u64("slash_pct");
  p.epoch_length = f.u64("epoch_length");
  p.epoch_pool = f.u64("epoch_pool");
  p.oracle_account = f.str("oracle_account");
  p.detector_kinds.clear();
  for (const auto& k : f.array("detector_kinds")) {
    if (!p.detector_kinds.insert(string_value(k, "detector_kinds")).second) fail("detector_kinds: duplicate");
  }
  return p;
}

}  // namespace

json to_json(const Transaction& tx) {
  return {{"kind", to_string(tx.kind())},
          {"sender", tx.sender},
          {"nonce", tx.nonce},
          {"payload", std::visit(PayloadToJson{}, tx.payload)}};
}

Transaction transaction_from_json(const json& j) {
  Fields f(j, {"kind", "sender", "nonce", "payload"}, "transaction");
  auto kind = parse_tx_kind(f.str("kind"));
  if (!kind) fail("transaction: unknown kind");
  return Transaction{f.str("sender"), f.u64("nonce"), payload_from_json(*kind, f.at("payload"))};
}

json to_json(const Receipt& r) {
  json events = json::array();
  for (const auto& e : r.events) events.push_back(std::visit(EventToJson{}, e));
  return {{"tx_index", r.tx_index},
          {"accepted", r.accepted},
          {"error", r.error ? json(to_string(*r.error)) : json(nullptr)},
          {"events", events}};
}

Receipt receipt_from_json(const json& j) {
  Fields f(j, {"tx_index", "accepted", "error", "events"}, "receipt");
  Receipt r;
  const std::uint64_t index = f.u64("tx_index");
  if (index > 0xFFFFFFFFull) fail("receipt.tx_index out of range");
  r.tx_index = static_cast<std::uint32_t>(index);
  r.accepted = f.boolean("accepted");
  if (!f.at("error").is_null()) {
    auto code = parse_error_code(f.str("error"));
    if (!code) fail("receipt.error: unknown code");
    r.error = code;
  }
  for (const auto& e : f.array("events")) r.events.push_back(event_from_json(e));
  return r;
}

json to_json(const Block& b) {
  json txs = json::array();
  for (const auto& tx : b.transactions) txs.push_back(to_json(tx));
  return {{"height", b.height},
          {"parent_hash", b.parent_hash.hex()},
          {"timestamp", b.timestamp},
          {"proposer", b.proposer},
          {"transactions", txs},
          {"state_root", b.state_root.hex()},
          {"block_hash", b.block_hash.hex()}};
}

Block block_from_json(const json& j) {
  Fields f(j, {"height", "parent_hash", "timestamp", "proposer", "transactions", "state_root", "block_hash"}, "block");
  Block b;
  b.height = f.u64("height");
  b.parent_hash = f.hash("parent_hash");
  b.timestamp = f.u64("timestamp");
  b.proposer = f.str("proposer");
  for (const auto& tx : f.array("transactions")) b.transactions.push_back(transaction_from_json(tx));
  b.state_root = f.hash("state_root");
  b.block_hash = f.hash("block_hash");
  return b;
}

json genesis_to_json(const NetworkState& s) {
  json validators = json::array();
  for (const auto& v : s.validators) validators.push_back({{"id", v.id}, {"stake", v.stake}});
  return {{"validators", validators}, {"balances", s.tokens.balances}, {"params", to_json(s.params)}};
}

NetworkState genesis_from_json(const json& j) {
  Fields f(j, {"validators", "balances", "params"}, "genesis");
  std::vector<Validator> validators;
  for (const auto& v : f.array("validators")) {
    Fields vf(v, {"id", "stake"}, "validator");
    validators.push_back({vf.str("id"), vf.u64("stake")});
  }
  std::map<AccountId, Amount> balances;
  for (const auto& [id, amount] : f.object("balances").items()) {
    if (!amount.is_number_unsigned()) fail("genesis.balances: expected unsigned integer");
    balances[id] = amount.get<Amount>();
  }
  try {
    return NetworkState::genesis(std::move(validators), balances, params_from_json(f.at("params")));
  } catch (const std::invalid_argument& e) {
    fail(std::string("genesis: ") + e.what());
  }
}

}  // namespace veriledger
