#include "veriledger/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "veriledger/error.hpp"
#include "veriledger/store.hpp"

namespace veriledger {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

// Optional-key reader that rejects keys outside `allowed`.
class Section {
 public:
  Section(const json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) invalid(path_ + ": expected an object");
    for (const auto& [key, value] : j.items()) {
      bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
      if (!known) invalid(path_ + ": unknown key '" + key + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const { return j_.at(key); }
  std::string where(const char* key) const { return path_ + "." + key; }

  void u64(const char* key, std::uint64_t& out) const {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      invalid(where(key) + ": expected a non-negative integer");
    }
    out = at(key).get<std::uint64_t>();
  }
  void size(const char* key, std::size_t& out) const {
    std::uint64_t v = out;
    u64(key, v);
    out = static_cast<std::size_t>(v);
  }
  void u32(const char* key, std::uint32_t& out) const {
    std::uint64_t v = out;
    u64(key, v);
    if (v > 0xFFFFFFFFull) invalid(where(key) + ": out of range");
    out = static_cast<std::uint32_t>(v);
  }
  void real(const char* key, double& out) const {
    if (!has(key)) return;
    if (!at(key).is_number()) invalid(where(key) + ": expected a number");
    out = at(key).get<double>();
  }
  void boolean(const char* key, bool& out) const {
    if (!has(key)) return;
    if (!at(key).is_boolean()) invalid(where(key) + ": expected true/false");
    out = at(key).get<bool>();
  }
  void str(const char* key, std::string& out) const {
    if (!has(key)) return;
    if (!at(key).is_string()) invalid(where(key) + ": expected a string");
    out = at(key).get<std::string>();
  }
  const json* array(const char* key) const {
    if (!has(key)) return nullptr;
    if (!at(key).is_array()) invalid(where(key) + ": expected an array");
    return &at(key);
  }

 private:
  const json& j_;
  std::string path_;
};

std::string string_item(const json& v, const std::string& where) {
  if (!v.is_string()) invalid(where + ": expected a string");
  return v.get<std::string>();
}

MediaType media_item(const json& v, const std::string& where) {
  auto t = parse_media_type(string_item(v, where));
  if (!t) invalid(where + ": unknown media type (Bytes|Image|Audio)");
  return *t;
}

DetectorSpec parse_detector(const json& j, const std::string& where) {
  Section s(j, where, {"kind", "params"});
  DetectorSpec d;
  s.str("kind", d.kind);
  if (s.has("params")) {
    if (!s.at("params").is_object()) invalid(where + ".params: expected an object");
    for (const auto& [k, v] : s.at("params").items()) {
      if (!v.is_number()) invalid(where + ".params." + k + ": expected a number");
      d.params[k] = v.get<double>();
    }
  }
  return d;
}

ContractParams parse_params(const json& j, ContractParams p) {
  Section s(j, "contract",
            {"min_stake", "min_fee", "owner_fee_pct", "proposer_fee_pct", "challenge_count", "activation_accuracy",
             "deprecation_window", "deprecation_accuracy", "slash_pct", "epoch_length", "epoch_pool",
             "detector_kinds"});
  s.u64("min_stake", p.min_stake);
  s.u64("min_fee", p.min_fee);
  s.u64("owner_fee_pct", p.owner_fee_pct);
  s.u64("proposer_fee_pct", p.proposer_fee_pct);
  s.u64("challenge_count", p.challenge_count);
  s.real("activation_accuracy", p.activation_accuracy);
  s.u64("deprecation_window", p.deprecation_window);
  s.real("deprecation_accuracy", p.deprecation_accuracy);
  s.u64("slash_pct", p.slash_pct);
  s.u64("epoch_length", p.epoch_length);
  s.u64("epoch_pool", p.epoch_pool);
  if (const json* kinds = s.array("detector_kinds")) {
    p.detector_kinds.clear();
    for (const auto& k : *kinds) p.detector_kinds.insert(string_item(k, "contract.detector_kinds"));
  }
  return p;
}

void check_unique(const std::vector<std::string>& ids, const char* what) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (id.empty()) invalid(std::string(what) + ": empty id");
    if (!seen.insert(id).second) invalid(std::string(what) + ": duplicate id '" + id + "'");
  }
}

bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

// Next nonce per sender for the block being assembled.
class NonceBook {
 public:
  explicit NonceBook(const NetworkState& snapshot) : snapshot_(snapshot) {}

  std::uint64_t next(const AccountId& id) {
    auto [it, inserted] = next_.try_emplace(id, 0);
    if (inserted) {
      auto s = snapshot_.nonces.find(id);
      it->second = (s == snapshot_.nonces.end() ? 0 : s->second) + 1;
    }
    return it->second++;
  }

  void consumed(const AccountId& id, std::uint64_t nonce) { next_[id] = nonce + 1; }

 private:
  const NetworkState& snapshot_;
  std::map<AccountId, std::uint64_t> next_;
};

struct PreparedItem {
  const CorpusItem* item;
  Hash256 hash;
  Embedding embedding;
};

PreparedItem prepare(const CorpusItem& item) { return {&item, hash_bytes(item.content), embed(item.content, item.media_type)}; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::SerializationError, "cannot write " + path.string());
}

}  // namespace

ScenarioConfig parse_scenario_config(const json& j) {
  Section root(j, "config",
               {"seed", "validators", "accounts", "providers", "users", "oracle", "algorithms", "corpus", "challenges",
                "schedule", "request_fee", "contract"});
  ScenarioConfig c;
  root.u64("seed", c.seed);
  root.u64("request_fee", c.request_fee);

  if (const json* vs = root.array("validators")) {
    for (const auto& v : *vs) {
      Section s(v, "validators[]", {"id", "stake"});
      Validator val;
      s.str("id", val.id);
      s.u64("stake", val.stake);
      c.validators.push_back(val);
    }
  }
  if (const json* as = root.array("accounts")) {
    for (const auto& a : *as) {
      Section s(a, "accounts[]", {"id", "balance"});
      AccountSpec acc;
      s.str("id", acc.id);
      s.u64("balance", acc.balance);
      c.accounts.push_back(acc);
    }
  }
  if (const json* ps = root.array("providers")) {
    for (const auto& p : *ps) c.providers.push_back(string_item(p, "providers[]"));
  }
  if (const json* us = root.array("users")) {
    for (const auto& u : *us) c.users.push_back(string_item(u, "users[]"));
  }
  if (root.has("oracle")) {
    Section s(root.at("oracle"), "oracle", {"account", "batch_limit"});
    s.str("account", c.oracle.oracle_account);
    s.size("batch_limit", c.oracle.batch_limit);
  }
  if (const json* algos = root.array("algorithms")) {
    for (const auto& a : *algos) {
      Section s(a, "algorithms[]", {"id", "owner", "detector", "media_types", "stake", "register_at"});
      AlgorithmPlan plan;
      s.str("id", plan.algorithm_id);
      s.str("owner", plan.owner);
      if (!s.has("detector")) invalid("algorithms[]: missing detector");
      plan.detector = parse_detector(s.at("detector"), "algorithms[].detector");
      if (const json* mts = s.array("media_types")) {
        for (const auto& m : *mts) plan.media_types.insert(media_item(m, "algorithms[].media_types"));
      } else {
        plan.media_types = {MediaType::Bytes};
      }
      s.u64("stake", plan.stake);
      s.u64("register_at", plan.register_at);
      c.algorithms.push_back(plan);
    }
  }
  if (root.has("corpus")) {
    Section s(root.at("corpus"), "corpus",
              {"trusted_count", "fake_count", "unrelated_count", "media_types", "bytes_length", "image_width",
               "image_height", "audio_samples", "perturbation"});
    CorpusSpec& cs = c.corpus;
    s.size("trusted_count", cs.trusted_count);
    s.size("fake_count", cs.fake_count);
    s.size("unrelated_count", cs.unrelated_count);
    if (const json* mts = s.array("media_types")) {
      cs.media_types.clear();
      for (const auto& m : *mts) cs.media_types.push_back(media_item(m, "corpus.media_types"));
    }
    s.size("bytes_length", cs.bytes_length);
    s.u32("image_width", cs.image_width);
    s.u32("image_height", cs.image_height);
    s.size("audio_samples", cs.audio_samples);
    if (s.has("perturbation")) {
      Section ps(s.at("perturbation"), "corpus.perturbation", {"kind", "rate"});
      std::string kind(to_string(cs.perturbation.kind));
      ps.str("kind", kind);
      auto parsed = parse_perturbation_kind(kind);
      if (!parsed) invalid("corpus.perturbation.kind: expected byte-flip or pixel-shift");
      cs.perturbation.kind = *parsed;
      ps.real("rate", cs.perturbation.rate);
    }
  }
  if (root.has("challenges")) {
    Section s(root.at("challenges"), "challenges", {"rate"});
    s.real("rate", c.challenge_rate);
  }
  if (root.has("schedule")) {
    Section s(root.at("schedule"), "schedule",
              {"blocks", "content_at", "requests_start", "requests_per_block", "feedback"});
    s.u64("blocks", c.schedule.blocks);
    s.u64("content_at", c.schedule.content_at);
    s.u64("requests_start", c.schedule.requests_start);
    s.size("requests_per_block", c.schedule.requests_per_block);
    s.boolean("feedback", c.schedule.feedback);
  }
  if (root.has("contract")) c.params = parse_params(root.at("contract"), c.params);

  validate_config(c);
  return c;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    invalid(path.string() + ": " + e.what());
  }
  return parse_scenario_config(j);
}

void validate_config(const ScenarioConfig& c) {
  if (c.validators.empty()) invalid("validators: at least one validator is required");
  Amount total_stake = 0;
  std::vector<std::string> ids;
  for (const auto& v : c.validators) {
    total_stake += v.stake;
    ids.push_back(v.id);
  }
  check_unique(ids, "validators");
  if (total_stake == 0) invalid("validators: total stake must be positive");

  ids.clear();
  for (const auto& a : c.accounts) ids.push_back(a.id);
  check_unique(ids, "accounts");

  ids.clear();
  for (const auto& a : c.algorithms) {
    ids.push_back(a.algorithm_id);
    if (a.owner.empty()) invalid("algorithms[" + a.algorithm_id + "]: missing owner");
    if (a.media_types.empty()) invalid("algorithms[" + a.algorithm_id + "]: media_types is empty");
    if (a.register_at == 0) invalid("algorithms[" + a.algorithm_id + "]: register_at must be >= 1");
  }
  check_unique(ids, "algorithms");

  if (c.oracle.oracle_account.empty()) invalid("oracle.account is empty");
  if (c.oracle.batch_limit == 0) invalid("oracle.batch_limit must be >= 1");

  const CorpusSpec& cs = c.corpus;
  if (cs.fake_count > 0 && cs.trusted_count == 0) invalid("corpus: fake_count > 0 requires trusted_count > 0");
  if (cs.media_types.empty()) invalid("corpus.media_types is empty");
  if (!unit_interval(cs.perturbation.rate)) invalid("corpus.perturbation.rate outside [0,1]");
  if (cs.bytes_length == 0) invalid("corpus.bytes_length must be >= 1");
  if (cs.image_width < 8 || cs.image_height < 8) invalid("corpus: images must be at least 8x8");
  if (cs.audio_samples < 64) invalid("corpus.audio_samples must be >= 64");
  if (cs.trusted_count > 0 && c.providers.empty()) invalid("providers: required when trusted_count > 0");
  if (cs.fake_count + cs.unrelated_count > 0 && c.users.empty()) invalid("users: required when queries exist");
  if (!unit_interval(c.challenge_rate)) invalid("challenges.rate outside [0,1]");

  if (c.schedule.content_at == 0) invalid("schedule.content_at must be >= 1");
  if (c.schedule.requests_start == 0) invalid("schedule.requests_start must be >= 1");
  if (c.schedule.requests_per_block == 0) invalid("schedule.requests_per_block must be >= 1");

  const ContractParams& p = c.params;
  if (p.owner_fee_pct + p.proposer_fee_pct > 100) invalid("contract: owner_fee_pct + proposer_fee_pct > 100");
  if (p.slash_pct > 100) invalid("contract.slash_pct > 100");
  if (p.epoch_length == 0) invalid("contract.epoch_length must be >= 1");
  if (p.challenge_count == 0) invalid("contract.challenge_count must be >= 1");
  if (!unit_interval(p.activation_accuracy)) invalid("contract.activation_accuracy outside [0,1]");
  if (!unit_interval(p.deprecation_accuracy)) invalid("contract.deprecation_accuracy outside [0,1]");
}

ScenarioRun run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  validate_config(config);
  const DetectorRegistry& plugins = options.plugins ? *options.plugins : DetectorRegistry::builtin();

  ScenarioRun run;
  run.corpus = generate_corpus(config.seed, config.corpus);
  const Corpus& corpus = run.corpus;

  for (const auto& item : corpus.trusted) run.truth.labels[hash_bytes(item.content)] = Verdict::Authentic;
  for (const auto& item : corpus.unrelated) run.truth.labels[hash_bytes(item.content)] = Verdict::Authentic;
  for (const auto& fake : corpus.fakes) {
    run.truth.labels[hash_bytes(fake.item.content)] = fake.altered ? Verdict::Deepfake : Verdict::Authentic;
  }

  ContractParams params = config.params;
  params.oracle_account = config.oracle.oracle_account;
  std::map<AccountId, Amount> balances;
  for (const auto& a : config.accounts) balances[a.id] = a.balance;
  NetworkState state = NetworkState::genesis(config.validators, balances, params);
  const Block genesis = make_genesis(state);
  run.genesis_state = state;
  run.chain.push_back({genesis, {}});

  std::optional<ChainWriter> writer;
  if (options.chain_path) {
    writer.emplace(*options.chain_path);
    writer->append_genesis(genesis, state);
  }

  std::vector<PreparedItem> trusted;
  for (const auto& item : corpus.trusted) trusted.push_back(prepare(item));
  std::vector<PreparedItem> queries;
  for (const auto& fake : corpus.fakes) queries.push_back(prepare(fake.item));
  for (const auto& item : corpus.unrelated) queries.push_back(prepare(item));
  {
    SplitMix64 rng(SplitMix64::derive(config.seed, 0x51554552ull));
    for (std::size_t i = queries.size(); i > 1; --i) std::swap(queries[i - 1], queries[rng.below(i)]);
  }

  const std::uint64_t challenge_seed = SplitMix64::derive(config.seed, 0x4348414cull);
  const std::set<AccountId> users(config.users.begin(), config.users.end());
  std::size_t next_query = 0;

  for (std::uint64_t h = 1; h <= config.schedule.blocks; ++h) {
    const NetworkState& snapshot = state;
    NonceBook nonces(snapshot);
    std::vector<Transaction> txs;

    OracleBatch batch = process_pending(snapshot, config.oracle, plugins, options.policy);
    for (auto& entry : batch.log) run.oracle_log.push_back(std::move(entry));
    for (auto& tx : batch.transactions) {
      nonces.consumed(tx.sender, tx.nonce);
      txs.push_back(std::move(tx));
    }

    for (const auto& plan : config.algorithms) {
      if (plan.register_at + 1 != h) continue;
      auto it = snapshot.algorithms.find(plan.algorithm_id);
      if (it == snapshot.algorithms.end() || it->second.status != AlgorithmStatus::Pending) continue;
      const std::vector<MediaType> types(plan.media_types.begin(), plan.media_types.end());
      for (const auto& ch : generate_challenges(challenge_seed, snapshot.params.challenge_count, types, config.corpus,
                                                config.challenge_rate)) {
        const ContentRecord reference{ch.challenge_id, "", ch.media_type, hash_bytes(ch.reference),
                                      embed(ch.reference, ch.media_type), {}, 0};
        const TrustedRegistry registry{std::span(&reference, 1), nullptr};
        Verdict predicted = Verdict::Authentic;
        try {
          const DetectionOutcome outcome = plugins.run(
              plan.detector, {hash_bytes(ch.query), ch.media_type, embed(ch.query, ch.media_type)}, registry,
              ExecutionPolicy::Serial);
          predicted = predicts_deepfake(outcome.verdict) ? Verdict::Deepfake : Verdict::Authentic;
        } catch (const Error&) {
          // a detector that cannot run gets the challenge wrong
          predicted = ch.true_label == Verdict::Deepfake ? Verdict::Authentic : Verdict::Deepfake;
        }
        txs.push_back({config.oracle.oracle_account, nonces.next(config.oracle.oracle_account),
                       SubmitChallengeResult{plan.algorithm_id, ch.challenge_id, predicted, ch.true_label}});
      }
    }

    for (const auto& plan : config.algorithms) {
      if (plan.register_at != h) continue;
      txs.push_back({plan.owner, nonces.next(plan.owner),
                     RegisterAlgorithm{plan.algorithm_id, plan.media_types, plan.detector, plan.stake}});
    }

    if (h == config.schedule.content_at) {
      for (std::size_t i = 0; i < trusted.size(); ++i) {
        const AccountId& provider = config.providers[i % config.providers.size()];
        const PreparedItem& t = trusted[i];
        txs.push_back({provider, nonces.next(provider),
                       RegisterContent{t.item->id, t.item->media_type, t.hash, t.embedding, {{"corpus_id", t.item->id}}}});
      }
    }

    if (h >= config.schedule.requests_start) {
      for (std::size_t r = 0; r < config.schedule.requests_per_block && next_query < queries.size(); ++r, ++next_query) {
        const AccountId& user = config.users[next_query % config.users.size()];
        const PreparedItem& q = queries[next_query];
        txs.push_back({user, nonces.next(user),
                       SubmitAnalysisRequest{q.item->media_type, q.hash, q.embedding, config.request_fee}});
      }
    }

    if (config.schedule.feedback) {
      for (const auto& [request_id, result] : snapshot.results) {
        if (result.feedback) continue;
        const AnalysisRequest& req = snapshot.requests.at(request_id);
        if (!users.contains(req.submitter)) continue;
        auto label = run.truth.labels.find(req.content_hash);
        if (label == run.truth.labels.end()) continue;
        txs.push_back({req.submitter, nonces.next(req.submitter), SubmitFeedback{request_id, label->second}});
      }
    }

    if (options.inject) {
      for (auto& tx : options.inject(snapshot, h)) txs.push_back(std::move(tx));
    }

    ProducedBlock produced = produce_block(snapshot, std::move(txs), h);
    if (writer) writer->append_block(produced.block, produced.outcome.receipts);
    run.chain.push_back({produced.block, produced.outcome.receipts});
    if (options.on_block) options.on_block(run.chain.back(), produced.outcome);
    state = std::move(produced.outcome.state);
  }

  run.final_state = state;
  run.report = compute_metrics(run.chain, run.final_state, run.truth);
  return run;
}

RunArtifacts artifact_paths(const std::filesystem::path& out_dir) {
  return {out_dir / (std::string("run") + kChainFileExtension), out_dir / "oracle.log", out_dir / "report.json",
          out_dir / "metrics.csv", out_dir / "ground_truth.json"};
}

std::string render_report(const RunReport& report) { return to_json(report).dump() + "\n"; }

ScenarioRun run_scenario_to_directory(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                                      RunOptions options) {
  std::filesystem::create_directories(out_dir);
  const RunArtifacts paths = artifact_paths(out_dir);
  options.chain_path = paths.chain;
  ScenarioRun run = run_scenario(config, options);

  std::string log;
  for (const auto& entry : run.oracle_log) log += format_log_line(entry) + "\n";
  write_text(paths.oracle_log, log);
  write_text(paths.report_json, render_report(run.report));
  write_text(paths.metrics_csv, to_csv(run.report));
  write_text(paths.ground_truth, to_json(run.truth).dump() + "\n");
  return run;
}

}  // namespace veriledger
