#include <doctest.h>

#include "support.hpp"
#include "veriledger/corpus.hpp"
#include "veriledger/report.hpp"
#include "veriledger/store.hpp"

using namespace vtest;
using nlohmann::json;

namespace {

ErrorCode config_error(const json& j) {
  try {
    parse_scenario_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::BadAmount;
}

json golden_json() { return json::parse(read_file(fixture("golden_scenario.json"))); }

}  // namespace

TEST_CASE("corpus generation") {
  CorpusSpec spec;
  const Corpus a = generate_corpus(7, spec);
  const Corpus b = generate_corpus(7, spec);
  REQUIRE(a.trusted.size() == 10);
  REQUIRE(a.fakes.size() == 10);
  REQUIRE(a.unrelated.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(a.trusted[i].content == b.trusted[i].content);
    CHECK(a.fakes[i].item.content == b.fakes[i].item.content);
    CHECK(a.fakes[i].source_id == b.fakes[i].source_id);
    CHECK(a.unrelated[i].content == b.unrelated[i].content);
    CHECK(a.trusted[i].content.size() == 4096);
  }
  CHECK(generate_corpus(8, spec).trusted[0].content != a.trusted[0].content);

  spec.perturbation.rate = 0.0;
  const Corpus z = generate_corpus(7, spec);
  for (const auto& f : z.fakes) {
    auto src = std::find_if(z.trusted.begin(), z.trusted.end(), [&](const CorpusItem& t) { return t.id == f.source_id; });
    REQUIRE(src != z.trusted.end());
    CHECK(f.item.content == src->content);
    CHECK_FALSE(f.altered);
  }

  spec.trusted_count = 0;
  try {
    generate_corpus(7, spec);
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
  }
  spec.fake_count = 0;
  CHECK(generate_corpus(7, spec).trusted.empty());
}

TEST_CASE("image and audio items stay decodable after perturbation") {
  CorpusSpec spec;
  spec.media_types = {MediaType::Image, MediaType::Audio};
  spec.perturbation = {PerturbationKind::PixelShift, 0.2};
  const Corpus c = generate_corpus(3, spec);
  for (const auto& f : c.fakes) {
    CHECK_NOTHROW(embed(f.item.content, f.item.media_type));
    CHECK(f.altered);
  }
  for (const auto& t : c.trusted) CHECK(embed(t.content, t.media_type).values.size() == 64);
}

TEST_CASE("challenge set") {
  const auto a = generate_challenges(5, 20, {MediaType::Bytes}, CorpusSpec{}, 0.01);
  const auto b = generate_challenges(5, 20, {MediaType::Bytes}, CorpusSpec{}, 0.01);
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].query == b[i].query);
    CHECK(a[i].challenge_id == b[i].challenge_id);
    if (i % 2 == 0) {
      CHECK(a[i].query == a[i].reference);
      CHECK(a[i].true_label == Verdict::Authentic);
    } else {
      CHECK(a[i].query != a[i].reference);
      CHECK(a[i].true_label == Verdict::Deepfake);
    }
  }
  CHECK(a[0].challenge_id == "challenge-000");
}

TEST_CASE("config parsing is strict") {
  CHECK_NOTHROW(parse_scenario_config(golden_json()));

  json j = golden_json();
  j["surprise"] = 1;
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["corpus"]["perturbation"]["strength"] = 1;
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["seed"] = -1;
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["seed"] = "1";
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["validators"] = json::array();
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["validators"][1]["id"] = "val-a";
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["corpus"]["trusted_count"] = 0;
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["corpus"]["media_types"] = {"Video"};
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["corpus"]["perturbation"]["kind"] = "blur";
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["corpus"]["perturbation"]["rate"] = 1.5;
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["contract"] = {{"owner_fee_pct", 90}};
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["contract"] = {{"epoch_length", 0}};
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  j = golden_json();
  j["oracle"]["batch_limit"] = 0;
  CHECK(config_error(j) == ErrorCode::ConfigInvalid);
  CHECK(config_error(json::array()) == ErrorCode::ConfigInvalid);

  j = golden_json();
  j["contract"] = {{"min_fee", 5}, {"epoch_pool", 7}};
  const ScenarioConfig c = parse_scenario_config(j);
  CHECK(c.params.min_fee == 5);
  CHECK(c.params.epoch_pool == 7);
  CHECK(c.params.min_stake == 100);

  CHECK_THROWS_AS(load_scenario_config(fixture("does-not-exist.json")), Error);
}

TEST_CASE("zero-block scenario") {
  ScenarioConfig cfg = golden_config();
  cfg.schedule.blocks = 0;
  const ScenarioRun run = run_scenario(cfg);
  CHECK(run.chain.size() == 1);
  CHECK(run.final_state == run.genesis_state);
  CHECK(run.report.chain.blocks == 0);
  CHECK(run.report.chain.transactions == 0);
  CHECK(run.report.requests.submitted == 0);
  CHECK(run.report.notifications.empty());
  for (const auto& m : run.report.algorithms) CHECK(m.counts.total() == 0);
}

TEST_CASE("golden report matches the frozen fixture") {
  const ScenarioRun run = run_scenario(golden_config());
  CHECK(render_report(run.report) == read_file(fixture("golden_report.json")));
}

TEST_CASE("same config twice gives identical output") {
  const ScenarioConfig cfg = golden_config();
  const ScenarioRun a = run_scenario(cfg);
  RunOptions serial;
  serial.policy = ExecutionPolicy::Serial;
  const ScenarioRun b = run_scenario(cfg, serial);
  CHECK(render_report(a.report) == render_report(b.report));
  REQUIRE(a.chain.size() == b.chain.size());
  for (std::size_t i = 0; i < a.chain.size(); ++i) CHECK(encode_record(a.chain[i], nullptr) == encode_record(b.chain[i], nullptr));
  CHECK(a.oracle_log == b.oracle_log);

  ScenarioConfig other = cfg;
  other.seed += 1;
  CHECK(render_report(run_scenario(other).report) != render_report(a.report));
}

TEST_CASE("golden scenario properties") {
  const ScenarioConfig cfg = golden_config();
  std::size_t blocks_checked = 0;
  RunOptions opts;
  opts.on_block = [&](const ChainRecord&, const BlockOutcome& out) {
    CHECK(out.state.tokens_conserved());
    ++blocks_checked;
  };
  const ScenarioRun run = run_scenario(cfg, opts);
  CHECK(blocks_checked == 30);

  REQUIRE(run.report.algorithms.size() == 1);
  const AlgorithmMetrics& m = run.report.algorithms[0];
  CHECK(m.status == AlgorithmStatus::Active);
  CHECK(m.counts == PerfCounters{10, 0, 10, 0});
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
  CHECK(m.counts.total() == run.report.requests.feedback_labeled);
  CHECK(run.report.requests.completed == 20);
  CHECK(run.report.requests.pending == 0);
  CHECK(run.report.chain.rejected == 0);

  // the only algorithm's owner ends up ahead of what it put in
  const Amount start = 1000;
  const Amount stake = run.final_state.algorithms.at("neardup-1").stake;
  CHECK(run.final_state.tokens.balance("owner-1") + stake > start);
  CHECK(run.final_state.tokens.balance("owner-1") > stake);

  // notification soundness: each event names one Deepfake result listing that content
  std::map<std::pair<std::string, std::string>, int> seen;
  for (const auto& n : run.report.notifications) {
    const AnalysisResultRecord& r = run.final_state.results.at(n.request_id);
    CHECK(r.verdict == Verdict::Deepfake);
    auto hit = std::find_if(r.matched_content.begin(), r.matched_content.end(),
                            [&](const MatchCandidate& c) { return c.content_id == n.content_id; });
    REQUIRE(hit != r.matched_content.end());
    CHECK(hit->similarity == n.similarity);
    CHECK(run.final_state.contents[run.final_state.content_by_id.at(n.content_id)].provider == n.provider);
    CHECK(++seen[{n.request_id, n.content_id}] == 1);
  }
  CHECK(run.report.notifications.size() == 10);
}

TEST_CASE("metrics recount from chain events") {
  const ScenarioRun run = run_scenario(golden_config());
  // independent recount: walk accepted commits and feedback transactions in chain order
  std::map<std::string, std::pair<std::string, bool>> verdicts;  // request -> (algorithm, said fake)
  std::map<std::string, PerfCounters> counts;
  for (const auto& rec : run.chain) {
    for (std::size_t i = 0; i < rec.block.transactions.size(); ++i) {
      if (!rec.receipts[i].accepted) continue;
      const Transaction& tx = rec.block.transactions[i];
      if (auto* c = std::get_if<CommitAnalysisResult>(&tx.payload)) {
        verdicts[c->request_id] = {c->algorithm_id, c->verdict == Verdict::Deepfake};
      } else if (auto* f = std::get_if<SubmitFeedback>(&tx.payload)) {
        const auto& [algo, fake] = verdicts.at(f->request_id);
        const bool truth = f->true_label == Verdict::Deepfake;
        PerfCounters& p = counts[algo];
        (fake ? (truth ? p.tp : p.fp) : (truth ? p.fn : p.tn))++;
      }
    }
  }
  for (const auto& m : run.report.algorithms) CHECK(counts[m.algorithm_id] == m.counts);
  CHECK(counts["neardup-1"] == run.final_state.algorithms.at("neardup-1").perf);
}

TEST_CASE("metrics edge cases") {
  SUBCASE("no Deepfake verdicts") {
    ScenarioConfig cfg = golden_config();
    cfg.algorithms[0].detector = {kExactHashDetector, {}};
    // exact-hash misses every perturbed challenge, 10/20
    cfg.params.activation_accuracy = 0.5;
    const ScenarioRun run = run_scenario(cfg);
    const AlgorithmMetrics& m = run.report.algorithms.at(0);
    CHECK(m.counts.tp == 0);
    CHECK(m.counts.fp == 0);
    CHECK(m.counts.fn == 10);
    CHECK_FALSE(m.precision.has_value());
    CHECK(m.recall == 0.0);
    const json j = to_json(run.report);
    CHECK(j["algorithms"][0]["precision"].is_null());
  }
  SUBCASE("rate 0 fakes are exact matches") {
    ScenarioConfig cfg = golden_config();
    cfg.corpus.perturbation.rate = 0.0;
    const ScenarioRun run = run_scenario(cfg);
    for (const auto& f : run.corpus.fakes) CHECK(run.truth.labels.at(hash_bytes(f.item.content)) == Verdict::Authentic);
    std::size_t authentic = 0;
    for (const auto& [id, r] : run.final_state.results) {
      const AnalysisRequest& req = run.final_state.requests.at(id);
      if (run.final_state.content_by_hash.contains(req.content_hash)) {
        CHECK(r.verdict == Verdict::Authentic);
        CHECK(r.confidence == 1.0);
        ++authentic;
      }
    }
    CHECK(authentic == 10);
    CHECK(run.report.notifications.empty());
  }
  SUBCASE("no feedback, nothing graded") {
    ScenarioConfig cfg = golden_config();
    cfg.schedule.feedback = false;
    const ScenarioRun run = run_scenario(cfg);
    CHECK(run.report.requests.feedback_labeled == 0);
    CHECK(run.report.algorithms.at(0).counts.total() == 0);
    CHECK_FALSE(run.report.algorithms.at(0).recall.has_value());
  }
  SUBCASE("missing label") {
    const ScenarioRun run = run_scenario(golden_config());
    GroundTruth partial = run.truth;
    const auto graded = std::find_if(run.final_state.results.begin(), run.final_state.results.end(),
                                     [](const auto& kv) { return kv.second.feedback.has_value(); });
    REQUIRE(graded != run.final_state.results.end());
    partial.labels.erase(run.final_state.requests.at(graded->first).content_hash);
    try {
      compute_metrics(run.chain, run.final_state, partial);
      FAIL("expected MissingLabel");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingLabel);
    }
  }
}

TEST_CASE("mixed media scenario runs end to end") {
  json j = golden_json();
  j["corpus"]["media_types"] = {"Image", "Audio", "Bytes"};
  j["corpus"]["perturbation"] = {{"kind", "pixel-shift"}, {"rate", 0.01}};
  j["algorithms"][0]["media_types"] = {"Image", "Audio", "Bytes"};
  j["accounts"][0]["balance"] = 2000;
  const ScenarioRun run = run_scenario(parse_scenario_config(j));
  CHECK(run.report.requests.completed == 20);
  CHECK(run.final_state.tokens_conserved());
  for (const auto& m : run.report.algorithms) CHECK(m.counts.total() == 20);
}

TEST_CASE("report serializations") {
  const ScenarioRun run = run_scenario(golden_config());
  const std::string csv = to_csv(run.report);
  CHECK(csv == "algorithm_id,status,tp,fp,tn,fn,precision,recall\nneardup-1,Active,10,0,10,0,1.000000,1.000000\n");
  CHECK(ground_truth_from_json(to_json(run.truth)) == run.truth);
  const json j = to_json(run.report);
  CHECK(j["tokens"]["initial_supply"] == 2000);
  Amount class_sum = 0;
  for (const auto& [k, v] : j["tokens"]["class_totals"].items()) class_sum += v.get<Amount>();
  Amount balance_sum = 0;
  for (const auto& [a, b] : run.final_state.tokens.balances) balance_sum += b;
  CHECK(class_sum == balance_sum);
}

TEST_CASE("artifacts written by run_scenario_to_directory") {
  const auto dir = temp_dir("sim-artifacts");
  const ScenarioRun run = run_scenario_to_directory(golden_config(), dir);
  const RunArtifacts paths = artifact_paths(dir);
  CHECK(read_file(paths.report_json) == render_report(run.report));
  CHECK(read_file(paths.metrics_csv) == to_csv(run.report));
  CHECK_FALSE(read_file(paths.oracle_log).empty());
  CHECK(ground_truth_from_json(json::parse(read_file(paths.ground_truth))) == run.truth);
  const ChainFile file = read_chain(paths.chain);
  CHECK(file.records == run.chain);
  std::size_t entries = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) entries += e.is_regular_file() ? 1 : 0;
  CHECK(entries == 5);
}
