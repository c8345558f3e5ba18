// Acceptance gate. Each criterion prints one PASS/FAIL line; the exit code is
// the number of failures. Optional arguments pick criteria by number.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "support.hpp"
#include "veriledger/oracle.hpp"
#include "veriledger/report.hpp"
#include "veriledger/store.hpp"

using namespace vtest;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Golden {
  ScenarioConfig config;
  std::filesystem::path dir;
  ScenarioRun run;
  std::string chain;
};

const Golden& golden() {
  static const Golden g = [] {
    Golden out;
    out.config = golden_config();
    out.dir = temp_dir("acceptance-golden");
    out.run = run_scenario_to_directory(out.config, out.dir);
    out.chain = read_file(artifact_paths(out.dir).chain);
    return out;
  }();
  return g;
}

int run_cli(const std::string& args) {
  const std::string cmd = "\"" VERILEDGER_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---- 1 ----

Result determinism() {
  const Golden& g = golden();
  const auto second = temp_dir("acceptance-determinism");
  run_scenario_to_directory(g.config, second);
  const auto a = artifact_paths(g.dir);
  const auto b = artifact_paths(second);
  std::vector<std::string> differing;
  const std::pair<const char*, std::filesystem::path RunArtifacts::*> files[] = {
      {"chain", &RunArtifacts::chain},          {"report", &RunArtifacts::report_json},
      {"oracle log", &RunArtifacts::oracle_log}, {"metrics", &RunArtifacts::metrics_csv},
      {"ground truth", &RunArtifacts::ground_truth}};
  for (const auto& [name, member] : files) {
    if (read_file(a.*member) != read_file(b.*member) || read_file(a.*member).empty()) differing.push_back(name);
  }
  RunOptions serial;
  serial.policy = ExecutionPolicy::Serial;
  const ScenarioRun s = run_scenario(g.config, serial);
  if (render_report(s.report) != read_file(a.report_json)) differing.push_back("serial report");
  if (s.chain != g.run.chain) differing.push_back("serial chain");

  if (!differing.empty()) {
    std::string list;
    for (const auto& d : differing) list += (list.empty() ? "" : ", ") + d;
    return {false, "differs: " + list};
  }
  return {true, fmt("chain %zu bytes and report %zu bytes identical over two runs; serial run agrees",
                    g.chain.size(), read_file(a.report_json).size())};
}

// ---- 2 ----

Amount independent_escrow(const NetworkState& s) {
  Amount sum = 0;
  for (const auto& [id, a] : s.algorithms) sum += a.stake;
  for (const auto& [id, r] : s.requests) {
    if (r.status == RequestStatus::Pending) sum += r.fee;
  }
  return sum;
}

Amount independent_balances(const NetworkState& s) {
  Amount sum = 0;
  for (const auto& [id, b] : s.tokens.balances) sum += b;
  return sum;
}

// Random extra traffic from accounts the scenario itself never uses. Requests
// reuse corpus items so that feedback on them can be graded.
class FuzzTraffic {
 public:
  FuzzTraffic(std::uint64_t seed, std::vector<AccountId> senders, const Corpus& corpus)
      : rng_(seed), senders_(std::move(senders)) {
    auto add = [&](const CorpusItem& item) { items_.push_back({hash_bytes(item.content), embed(item.content, item.media_type)}); };
    for (const auto& t : corpus.trusted) add(t);
    for (const auto& f : corpus.fakes) add(f.item);
    for (const auto& u : corpus.unrelated) add(u);
  }

  std::vector<Transaction> operator()(const NetworkState& snap, std::uint64_t height) {
    std::vector<Transaction> out;
    std::map<AccountId, std::uint64_t> next;
    for (const auto& s : senders_) next[s] = (snap.nonces.contains(s) ? snap.nonces.at(s) : 0) + 1;
    const std::size_t count = rng_.below(6);
    for (std::size_t i = 0; i < count; ++i) {
      const AccountId& from = senders_[rng_.below(senders_.size())];
      std::uint64_t nonce = next[from];
      if (rng_.below(20) == 0) {
        nonce += 1 + rng_.below(3);  // stale or skipped nonce, must be rejected
      } else {
        ++next[from];
      }
      out.push_back({from, nonce, payload(snap, from, height)});
    }
    return out;
  }

 private:
  Payload payload(const NetworkState& snap, const AccountId& from, std::uint64_t height) {
    switch (rng_.below(7)) {
      case 0: {
        const AccountId to = rng_.below(4) == 0 ? "fresh-" + std::to_string(rng_.below(5)) : senders_[rng_.below(senders_.size())];
        return TransferTokens{to, rng_.below(400)};
      }
      case 1:
        return RegisterAlgorithm{"fz-" + std::to_string(rng_.below(8)), {MediaType::Bytes},
                                 {kNearDuplicateDetector, {{"tau", 0.9}}}, rng_.below(300)};
      case 2:
      case 3: {
        const auto& [hash, embedding] = items_[rng_.below(items_.size())];
        return SubmitAnalysisRequest{MediaType::Bytes, hash, embedding, rng_.below(30)};
      }
      case 4: {
        std::vector<std::string> mine;
        for (const auto& [id, r] : snap.requests) {
          if (r.submitter == from) mine.push_back(id);
        }
        const std::string id = mine.empty() || rng_.below(5) == 0 ? "0000000000000000" : mine[rng_.below(mine.size())];
        return SubmitFeedback{id, rng_.below(2) ? Verdict::Deepfake : Verdict::Authentic};
      }
      case 5:
        return SubmitChallengeResult{"neardup-1", "forged-" + std::to_string(height), Verdict::Deepfake,
                                     Verdict::Deepfake};
      default: {
        const std::string id = "fz-content-" + std::to_string(rng_.below(40));
        return RegisterContent{id, MediaType::Bytes, hash_bytes(id), one_hot(rng_.below(256)), {}};
      }
    }
  }

  SplitMix64 rng_;
  std::vector<AccountId> senders_;
  std::vector<std::pair<Hash256, Embedding>> items_;
};

Result conservation() {
  constexpr std::uint64_t kSeeds = 12;
  std::size_t blocks = 0, violations = 0, injected = 0, injected_accepted = 0;
  Amount minted_total = 0, burned_total = 0;
  std::string first_violation;

  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    ScenarioConfig cfg = golden_config();
    cfg.seed = 7000 + seed;
    cfg.schedule.blocks = 100;
    cfg.schedule.requests_per_block = 1 + seed % 5;
    cfg.corpus.unrelated_count = 6 + seed;
    std::vector<AccountId> fuzzers;
    for (int i = 0; i < 4; ++i) {
      fuzzers.push_back("fuzz-" + std::to_string(i));
      cfg.accounts.push_back({fuzzers.back(), 200 + 150 * static_cast<Amount>(i)});
    }
    Amount initial = 0;
    for (const auto& a : cfg.accounts) initial += a.balance;

    // minted and burned recounted from block outcomes and receipt events
    Amount minted = 0, burned = 0;
    FuzzTraffic fuzz(SplitMix64::derive(seed, 0xF022), fuzzers, generate_corpus(cfg.seed, cfg.corpus));
    std::set<AccountId> fuzz_set(fuzzers.begin(), fuzzers.end());
    RunOptions opts;
    opts.inject = std::ref(fuzz);
    opts.on_block = [&](const ChainRecord& rec, const BlockOutcome& out) {
      ++blocks;
      for (const auto& share : out.rewards) minted += share.amount;
      for (std::size_t i = 0; i < rec.receipts.size(); ++i) {
        const Receipt& r = rec.receipts[i];
        if (fuzz_set.contains(rec.block.transactions[i].sender)) {
          ++injected;
          injected_accepted += r.accepted ? 1 : 0;
        }
        for (const auto& ev : r.events) {
          if (auto* f = std::get_if<FeeSplitEvent>(&ev)) burned += f->burned;
          if (auto* s = std::get_if<StakeSlashedEvent>(&ev)) burned += s->burned;
        }
      }
      const NetworkState& s = out.state;
      const bool ok = independent_balances(s) + independent_escrow(s) + burned == initial + minted &&
                      s.tokens.total_minted == minted && s.tokens.total_burned == burned &&
                      s.tokens.initial_supply == initial;
      if (!ok && violations++ == 0) {
        first_violation = fmt("seed %llu height %llu", static_cast<unsigned long long>(seed),
                              static_cast<unsigned long long>(rec.block.height));
      }
    };
    run_scenario(cfg, opts);
    minted_total += minted;
    burned_total += burned;
  }

  const bool exercised = minted_total > 0 && burned_total > 0 && injected_accepted > 0 && injected_accepted < injected;
  std::string detail = fmt("%zu blocks over %llu seeds, %zu injected txs (%zu accepted), minted %llu burned %llu",
                           blocks, static_cast<unsigned long long>(kSeeds), injected, injected_accepted,
                           static_cast<unsigned long long>(minted_total), static_cast<unsigned long long>(burned_total));
  if (violations) return {false, fmt("%zu violating blocks, first at ", violations) + first_violation + "; " + detail};
  if (blocks != kSeeds * 100) return {false, "wrong block count; " + detail};
  if (!exercised) return {false, "fuzz did not exercise mint, burn and rejection paths; " + detail};
  return {true, detail};
}

// ---- 3 ----

Result fairness() {
  const std::vector<Validator> validators = {{"A", 100}, {"B", 300}, {"C", 600}};
  const std::map<std::string, double> expected = {{"A", 0.10}, {"B", 0.30}, {"C", 0.60}};
  constexpr std::uint64_t kDraws = 100000;
  std::map<std::string, std::uint64_t> counts;
  Hash256 parent = hash_bytes(std::string_view{"fairness"});
  for (std::uint64_t h = 1; h <= kDraws; ++h) {
    const std::string& winner = select_proposer(validators, proposer_seed(parent, h));
    ++counts[winner];
  }
  bool pass = true;
  std::string detail;
  for (const auto& [id, want] : expected) {
    const double got = static_cast<double>(counts[id]) / kDraws;
    pass = pass && std::abs(got - want) <= 0.01;
    detail += fmt("%s %.4f (want %.2f) ", id.c_str(), got, want);
  }
  return {pass, detail + fmt("over %llu draws", static_cast<unsigned long long>(kDraws))};
}

// ---- 4 ----

Result detection_efficacy() {
  const Golden& g = golden();
  const NetworkState& s = g.run.final_state;
  std::set<Hash256> fake_hashes, unrelated_hashes;
  for (const auto& f : g.run.corpus.fakes) fake_hashes.insert(hash_bytes(f.item.content));
  for (const auto& u : g.run.corpus.unrelated) unrelated_hashes.insert(hash_bytes(u.content));

  std::size_t fakes_seen = 0, fakes_flagged = 0, unrelated_seen = 0, false_positives = 0;
  for (const auto& [id, r] : s.results) {
    const Hash256& h = s.requests.at(id).content_hash;
    if (fake_hashes.contains(h)) {
      ++fakes_seen;
      fakes_flagged += r.verdict == Verdict::Deepfake ? 1 : 0;
    } else if (unrelated_hashes.contains(h)) {
      ++unrelated_seen;
      false_positives += r.verdict == Verdict::Deepfake ? 1 : 0;
    }
  }
  const bool golden_ok = fakes_seen == g.run.corpus.fakes.size() && fakes_flagged == fakes_seen &&
                         unrelated_seen == g.run.corpus.unrelated.size() && false_positives == 0;

  ScenarioConfig zero = g.config;
  zero.corpus.perturbation.rate = 0.0;
  const ScenarioRun z = run_scenario(zero);
  std::set<Hash256> zero_fakes;
  std::size_t exact = 0, fake_results = 0, authentic = 0;
  for (const auto& f : z.corpus.fakes) {
    zero_fakes.insert(hash_bytes(f.item.content));
    exact += z.final_state.content_by_hash.contains(hash_bytes(f.item.content)) ? 1 : 0;
  }
  for (const auto& [id, r] : z.final_state.results) {
    if (!zero_fakes.contains(z.final_state.requests.at(id).content_hash)) continue;
    ++fake_results;
    authentic += r.verdict == Verdict::Authentic && r.confidence == 1.0 ? 1 : 0;
  }
  const bool zero_ok = exact == z.corpus.fakes.size() && fake_results == z.corpus.fakes.size() &&
                       authentic == fake_results && z.report.notifications.empty();

  return {golden_ok && zero_ok,
          fmt("recall %zu/%zu, false positives %zu/%zu; rate 0: %zu/%zu fakes are exact hashes, %zu/%zu verdicts Authentic",
              fakes_flagged, fakes_seen, false_positives, unrelated_seen, exact, z.corpus.fakes.size(), authentic,
              fake_results)};
}

// ---- 5 ----

class LifecycleFuzzer {
 public:
  explicit LifecycleFuzzer(std::uint64_t seed) : rng_(seed) {}

  Transaction next(const NetworkState& s) {
    static const AccountId users[] = {"u0", "u1", "u2", "u3"};
    AccountId sender = users[rng_.below(4)];
    Payload p;
    switch (rng_.below(10)) {
      case 0: {
        std::set<MediaType> media;
        if (rng_.below(4)) media.insert(MediaType::Bytes);
        if (rng_.below(3) == 0) media.insert(MediaType::Image);
        static const char* kinds[] = {"near-duplicate", "exact-hash", "mystery"};
        p = RegisterAlgorithm{"x" + std::to_string(rng_.below(6)), media, {kinds[rng_.below(3)], {}}, rng_.below(300)};
        break;
      }
      case 1:
      case 2: {
        sender = rng_.below(10) ? "oracle" : sender;
        const Verdict truth = rng_.below(2) ? Verdict::Deepfake : Verdict::Authentic;
        const Verdict flipped = truth == Verdict::Deepfake ? Verdict::Authentic : Verdict::Deepfake;
        // per-algorithm skill so some activate and some do not
        const std::string algo = "x" + std::to_string(rng_.below(6));
        const bool right = rng_.below(10) < 4 + algo.back() - '0';
        p = SubmitChallengeResult{algo, "ch-" + std::to_string(rng_.below(30)), right ? truth : flipped, truth};
        break;
      }
      case 3: {
        const std::string id = "k" + std::to_string(rng_.below(8));
        p = RegisterContent{id, MediaType::Bytes, hash_bytes(id + std::to_string(rng_.below(2))),
                            rng_.below(12) ? one_hot(rng_.below(256)) : one_hot(3, MediaType::Image), {}};
        break;
      }
      case 4:
      case 5:
        p = SubmitAnalysisRequest{MediaType::Bytes, hash_bytes(std::to_string(rng_.below(50))), one_hot(rng_.below(256)),
                                  rng_.below(40)};
        break;
      case 6:
      case 7: {
        sender = rng_.below(12) ? "oracle" : sender;
        std::string req = "ffffffffffffffff";
        if (!s.requests.empty() && rng_.below(8)) {
          auto it = s.requests.begin();
          std::advance(it, static_cast<std::ptrdiff_t>(rng_.below(s.requests.size())));
          req = it->first;
        }
        CommitAnalysisResult c{req, "x" + std::to_string(rng_.below(6)), Verdict::Unverified, 0.0, {}};
        const std::string content = "k" + std::to_string(rng_.below(8));
        switch (rng_.below(4)) {
          case 0:
            c.verdict = Verdict::Deepfake;
            c.confidence = rng_.unit();
            c.matched_content = {{content, c.confidence}};
            break;
          case 1:
            c.verdict = Verdict::Authentic;
            c.confidence = 1.0;
            c.matched_content = {{content, 1.0}};
            break;
          case 2:
            c.verdict = rng_.below(2) ? Verdict::Authentic : Verdict::Unverified;
            c.confidence = rng_.unit();
            c.matched_content = {{content, 0.5}};
            break;
          default:
            break;
        }
        p = c;
        break;
      }
      case 8: {
        std::string req = "ffffffffffffffff";
        if (!s.requests.empty()) {
          auto it = s.requests.begin();
          std::advance(it, static_cast<std::ptrdiff_t>(rng_.below(s.requests.size())));
          req = it->first;
          if (rng_.below(6)) sender = it->second.submitter;
        }
        p = SubmitFeedback{req, rng_.below(2) ? Verdict::Deepfake : (rng_.below(8) ? Verdict::Authentic : Verdict::Unverified)};
        break;
      }
      default:
        p = TransferTokens{users[rng_.below(4)], rng_.below(3) ? rng_.below(200) : rng_.below(5000)};
        break;
    }
    std::uint64_t nonce = (s.nonces.contains(sender) ? s.nonces.at(sender) : 0) + 1;
    if (rng_.below(25) == 0) nonce = rng_.below(3) ? nonce - 1 : nonce + 1;
    return {sender, nonce, std::move(p)};
  }

 private:
  SplitMix64 rng_;
};

Result lifecycle() {
  constexpr std::uint64_t kSeeds = 4;
  constexpr std::size_t kTxsPerSeed = 1500;
  std::size_t total = 0, accepted = 0, non_neutral = 0, illegal = 0, negative = 0, event_mismatch = 0;
  std::map<std::pair<AlgorithmStatus, AlgorithmStatus>, std::size_t> transitions;

  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    ContractParams params;
    params.challenge_count = 6;
    params.deprecation_window = 6;
    params.epoch_length = 5;
    NetworkState s = make_state({{"u0", 2000}, {"u1", 2000}, {"u2", 600}, {"u3", 50}, {"oracle", 0}}, params);
    LifecycleFuzzer fuzz(SplitMix64::derive(seed, 0x11FE));
    std::uint64_t height = 1;
    for (std::size_t i = 0; i < kTxsPerSeed; ++i) {
      if (i % 10 == 0 && i > 0) {
        if (height % params.epoch_length == 0) distribute_epoch_rewards(s, height);
        ++height;
      }
      const Transaction tx = fuzz.next(s);
      const NetworkState before = s;
      const Hash256 root_before = s.state_root();
      const Receipt r = apply_transaction(s, tx, ctx(height));
      ++total;
      if (!r.accepted) {
        if (s.state_root() != root_before || !(s == before)) ++non_neutral;
        continue;
      }
      ++accepted;
      for (const auto& [id, algo] : s.algorithms) {
        auto old = before.algorithms.find(id);
        const AlgorithmStatus from = old == before.algorithms.end() ? AlgorithmStatus::Pending : old->second.status;
        if (old == before.algorithms.end() && algo.status != AlgorithmStatus::Pending) ++illegal;
        if (from != algo.status) {
          if (!is_legal_transition(from, algo.status)) ++illegal;
          ++transitions[{from, algo.status}];
        }
      }
      for (const auto& ev : r.events) {
        if (auto* sc = std::get_if<StatusChangedEvent>(&ev)) {
          const auto& now = s.algorithms.at(sc->algorithm_id);
          if (!is_legal_transition(sc->from, sc->to) || now.status != sc->to ||
              before.algorithms.at(sc->algorithm_id).status != sc->from) {
            ++event_mismatch;
          }
        }
      }
      // an unsigned balance that went below zero would wrap far past the supply
      const Amount ceiling = s.tokens.initial_supply + s.tokens.total_minted;
      for (const auto& [id, b] : s.tokens.balances) negative += b > ceiling ? 1 : 0;
      if (!s.tokens_conserved()) ++negative;
    }
  }

  auto count = [&](AlgorithmStatus a, AlgorithmStatus b) {
    auto it = transitions.find({a, b});
    return it == transitions.end() ? std::size_t{0} : it->second;
  };
  const std::size_t to_active = count(AlgorithmStatus::Pending, AlgorithmStatus::Active);
  const std::size_t pend_dep = count(AlgorithmStatus::Pending, AlgorithmStatus::Deprecated);
  const std::size_t act_dep = count(AlgorithmStatus::Active, AlgorithmStatus::Deprecated);
  const std::string detail =
      fmt("%zu txs (%zu accepted); transitions P->A %zu, P->D %zu, A->D %zu; illegal %zu, event mismatches %zu, "
          "balance faults %zu, non-neutral rejections %zu",
          total, accepted, to_active, pend_dep, act_dep, illegal, event_mismatch, negative, non_neutral);
  const bool clean = illegal == 0 && event_mismatch == 0 && negative == 0 && non_neutral == 0;
  const bool exercised = total >= 1000 && accepted > 0 && accepted < total && to_active > 0 && pend_dep > 0 && act_dep > 0;
  if (clean && !exercised) return {false, "fuzz did not reach every transition; " + detail};
  return {clean, detail};
}

// ---- 6 ----

Result replay_integrity() {
  const Golden& g = golden();
  const std::string& contents = g.chain;
  const auto chain_path = artifact_paths(g.dir).chain;
  if (run_cli("verify --chain \"" + chain_path.string() + "\"") != 0) return {false, "verify rejects the golden chain"};

  // Snapshot the verifier at every record boundary so each flip only replays
  // from the record it lands in; the verification itself is unchanged.
  std::vector<std::size_t> starts = {0};
  for (std::size_t i = 0; i < contents.size(); ++i) {
    if (contents[i] == '\n' && i + 1 < contents.size()) starts.push_back(i + 1);
  }
  std::vector<ChainVerifier> snapshots(starts.size());
  for (std::size_t k = 1; k < starts.size(); ++k) {
    snapshots[k] = snapshots[k - 1];
    snapshots[k].feed(std::string_view(contents).substr(starts[k - 1], starts[k] - starts[k - 1] - 1));
  }

  auto detected = [&](std::string& buf, std::size_t pos) {
    const std::size_t line = static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), pos) - starts.begin()) - 1;
    ChainVerifier v = snapshots[line];
    try {
      v.feed_contents(std::string_view(buf).substr(starts[line]));
      v.state();
    } catch (const std::exception&) {
      return true;
    }
    return false;
  };

  const auto t0 = std::chrono::steady_clock::now();
  const long long n = static_cast<long long>(contents.size());
  long long undetected = 0;
  long long first_miss = -1;
#pragma omp parallel reduction(+ : undetected)
  {
    std::string buf = contents;
#pragma omp for schedule(dynamic, 256)
    for (long long pos = 0; pos < n; ++pos) {
      const auto p = static_cast<std::size_t>(pos);
      buf[p] = static_cast<char>(buf[p] ^ 0x01);
      if (!detected(buf, p)) {
        ++undetected;
#pragma omp critical
        if (first_miss < 0 || pos < first_miss) first_miss = pos;
      }
      buf[p] = contents[p];
    }
  }
  const double sweep_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // arbitrary replacement values at sampled positions
  SplitMix64 rng(0xB17F11B5);
  constexpr std::size_t kRandomFlips = 3000;
  std::size_t random_missed = 0;
  std::string buf = contents;
  for (std::size_t i = 0; i < kRandomFlips; ++i) {
    const std::size_t pos = rng.below(contents.size());
    const auto delta = static_cast<std::uint8_t>(1 + rng.below(255));
    buf[pos] = static_cast<char>(static_cast<std::uint8_t>(buf[pos]) ^ delta);
    random_missed += detected(buf, pos) ? 0 : 1;
    buf[pos] = contents[pos];
  }

  // end to end through the CLI
  constexpr std::size_t kCliFlips = 40;
  std::size_t cli_wrong = 0;
  const auto dir = temp_dir("acceptance-cli-flips");
  for (std::size_t i = 0; i < kCliFlips; ++i) {
    const std::size_t pos = rng.below(contents.size());
    std::string t = contents;
    t[pos] = static_cast<char>(static_cast<std::uint8_t>(t[pos]) ^ static_cast<std::uint8_t>(1 + rng.below(255)));
    write_file(dir / "t.chain.jsonl", t);
    cli_wrong += run_cli("verify --chain \"" + (dir / "t.chain.jsonl").string() + "\"") == 1 ? 0 : 1;
  }

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::string detail = fmt("golden chain verifies; XOR-0x01 at all %lld byte positions: %lld undetected (%.1f s, %d threads); "
                           "%zu random-value flips: %zu undetected; CLI exit 1 on %zu/%zu",
                           n, undetected, sweep_s, threads, kRandomFlips, random_missed, kCliFlips - cli_wrong, kCliFlips);
  if (first_miss >= 0) detail += fmt("; first miss at byte %lld", first_miss);
  return {undetected == 0 && random_missed == 0 && cli_wrong == 0, detail};
}

// ---- 7 ----

// Floor shares found by counting up, remainder to the highest score (ties: smallest id).
std::map<std::string, Amount> brute_force_rewards(const std::map<std::string, std::uint64_t>& scores, Amount pool) {
  std::uint64_t sum = 0;
  for (const auto& [id, s] : scores) sum += s;
  std::map<std::string, Amount> out;
  if (sum == 0) return out;
  Amount handed = 0;
  for (const auto& [id, s] : scores) {
    Amount q = 0;
    while ((q + 1) * sum <= pool * s) ++q;
    out[id] = q;
    handed += q;
  }
  std::string top;
  for (const auto& [id, s] : scores) {
    if (top.empty() || s > scores.at(top)) top = id;
  }
  out[top] += pool - handed;
  return out;
}

Result reward_arithmetic() {
  SplitMix64 rng(0x4E3A2D);
  constexpr int kVectors = 50;
  int mismatches = 0, sum_faults = 0, zero_sum_vectors = 0;
  for (int v = 0; v < kVectors; ++v) {
    const std::size_t n = 1 + rng.below(8);
    const Amount pool = v % 5 == 0 ? 100 : 1 + rng.below(5000);
    std::map<std::string, std::uint64_t> scores;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t s = rng.below(4) == 0 ? 0 : rng.below(v % 2 ? 5 : 1000);
      if (v % 10 == 3) s = 0;
      scores[fmt("alg-%02zu", i)] = s;
    }

    ContractParams params;
    params.epoch_pool = pool;
    NetworkState s = make_state({}, params);
    for (const auto& [id, score] : scores) {
      AlgorithmRecord rec;
      rec.algorithm_id = id;
      rec.owner = "owner-" + id;
      rec.media_types = {MediaType::Bytes};
      rec.detector = {kNearDuplicateDetector, {}};
      rec.status = AlgorithmStatus::Active;
      rec.epoch_correct = score;
      s.algorithms[id] = rec;
    }
    distribute_epoch_rewards(s, params.epoch_length);

    const auto want = brute_force_rewards(scores, pool);
    std::uint64_t sum = 0;
    for (const auto& [id, score] : scores) sum += score;
    Amount paid = 0;
    for (const auto& [id, score] : scores) {
      const Amount got = s.tokens.balance("owner-" + id);
      const Amount expect = want.contains(id) ? want.at(id) : 0;
      mismatches += got != expect ? 1 : 0;
      paid += got;
    }
    const auto direct = compute_epoch_rewards(scores, pool);
    for (const auto& [id, amount] : direct) mismatches += amount != (want.contains(id) ? want.at(id) : 0) ? 1 : 0;
    if (sum > 0) {
      sum_faults += paid != pool || s.tokens.total_minted != pool ? 1 : 0;
    } else {
      ++zero_sum_vectors;
      sum_faults += paid != 0 || s.tokens.total_minted != 0 ? 1 : 0;
    }
  }
  return {mismatches == 0 && sum_faults == 0,
          fmt("%d score vectors (%d with zero sum): %d share mismatches, %d pool-sum faults", kVectors,
              zero_sum_vectors, mismatches, sum_faults)};
}

// ---- 8 ----

Result exactly_once() {
  const Golden& g = golden();
  const NetworkState& s = g.run.final_state;
  std::map<std::string, int> commits;
  std::multiset<std::tuple<AccountId, std::string, std::string>> notified;
  for (const auto& rec : g.run.chain) {
    for (std::size_t i = 0; i < rec.block.transactions.size(); ++i) {
      if (!rec.receipts[i].accepted) continue;
      if (auto* c = std::get_if<CommitAnalysisResult>(&rec.block.transactions[i].payload)) ++commits[c->request_id];
      for (const auto& ev : rec.receipts[i].events) {
        if (auto* n = std::get_if<NotificationEvent>(&ev)) notified.insert({n->provider, n->content_id, n->request_id});
      }
    }
  }

  std::size_t requests = 0, completed_once = 0;
  for (const auto& [id, r] : s.requests) {
    ++requests;
    completed_once += r.status == RequestStatus::Completed && commits[id] == 1 ? 1 : 0;
  }

  // expected: one event per (fake flagged Deepfake, trusted item it matched)
  std::set<Hash256> fake_hashes;
  for (const auto& f : g.run.corpus.fakes) fake_hashes.insert(hash_bytes(f.item.content));
  std::multiset<std::tuple<AccountId, std::string, std::string>> expected;
  for (const auto& [id, r] : s.results) {
    if (r.verdict != Verdict::Deepfake || !fake_hashes.contains(s.requests.at(id).content_hash)) continue;
    for (const auto& m : r.matched_content) {
      expected.insert({s.contents[s.content_by_id.at(m.content_id)].provider, m.content_id, id});
    }
  }
  const bool pass = requests > 0 && completed_once == requests && commits.size() == requests && notified == expected &&
                    g.run.report.notifications.size() == notified.size();
  return {pass, fmt("%zu/%zu requests completed by exactly one commit; %zu notifications, %zu expected (fake, match) pairs",
                    completed_once, requests, notified.size(), expected.size())};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  struct Criterion {
    const char* name;
    Result (*fn)();
  };
  const Criterion criteria[] = {
      {"determinism", determinism},         {"token conservation", conservation},
      {"proposer fairness", fairness},      {"detection efficacy", detection_efficacy},
      {"lifecycle enforcement", lifecycle}, {"replay integrity", replay_integrity},
      {"reward arithmetic", reward_arithmetic}, {"oracle exactly-once", exactly_once},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    if (!only.empty() && !only.contains(index)) continue;
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r = c.fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += r.pass ? 0 : 1;
    std::cout << (r.pass ? "PASS" : "FAIL") << " [" << index << "] " << c.name << ": " << r.detail
              << fmt(" (%.1f s)", secs) << std::endl;
  }
  return failures;
}
