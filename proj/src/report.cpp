#include "veriledger/report.hpp"

#include <cstdio>
#include <set>

#include "veriledger/error.hpp"

namespace veriledger {

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json nullable(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const GroundTruth& truth) {
  nlohmann::json labels = nlohmann::json::object();
  for (const auto& [hash, label] : truth.labels) labels[hash.hex()] = to_string(label);
  return {{"version", "v1"}, {"labels", labels}};
}

GroundTruth ground_truth_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("version", "") != "v1" || !j.contains("labels") || !j["labels"].is_object()) {
    throw Error(ErrorCode::SerializationError, "ground truth: expected {version: v1, labels: {...}}");
  }
  GroundTruth truth;
  for (const auto& [key, value] : j["labels"].items()) {
    auto hash = Hash256::from_hex(key);
    auto label = value.is_string() ? parse_verdict(value.get<std::string>()) : std::nullopt;
    if (!hash || !label) throw Error(ErrorCode::SerializationError, "ground truth: bad entry " + key);
    truth.labels.emplace(*hash, *label);
  }
  return truth;
}

std::vector<NotificationEvent> collect_notifications(std::span<const ChainRecord> chain,
                                                     const std::optional<AccountId>& provider) {
  std::vector<NotificationEvent> out;
  for (const auto& rec : chain) {
    for (const auto& receipt : rec.receipts) {
      for (const auto& event : receipt.events) {
        if (const auto* n = std::get_if<NotificationEvent>(&event)) {
          if (!provider || n->provider == *provider) out.push_back(*n);
        }
      }
    }
  }
  return out;
}

RunReport compute_metrics(std::span<const ChainRecord> chain, const NetworkState& final_state,
                          const GroundTruth& truth) {
  RunReport report;

  std::map<std::string, PerfCounters> graded;
  for (const auto& [id, algo] : final_state.algorithms) graded[id];
  for (const auto& [request_id, result] : final_state.results) {
    if (!result.feedback) continue;
    const AnalysisRequest& req = final_state.requests.at(request_id);
    auto label = truth.labels.find(req.content_hash);
    if (label == truth.labels.end()) throw Error(ErrorCode::MissingLabel, "request " + request_id);
    const bool predicted = predicts_deepfake(result.verdict);
    const bool actual = predicts_deepfake(label->second);
    PerfCounters& c = graded[result.algorithm_id];
    if (predicted && actual) {
      ++c.tp;
    } else if (predicted) {
      ++c.fp;
    } else if (actual) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  for (const auto& [id, c] : graded) {
    AlgorithmMetrics m;
    m.algorithm_id = id;
    if (auto it = final_state.algorithms.find(id); it != final_state.algorithms.end()) m.status = it->second.status;
    m.counts = c;
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    report.algorithms.push_back(m);
  }

  // token summary
  TokenSummary& t = report.tokens;
  t.balances = final_state.tokens.balances;
  t.initial_supply = final_state.tokens.initial_supply;
  t.minted = final_state.tokens.total_minted;
  t.burned = final_state.tokens.total_burned;
  t.escrowed = final_state.total_escrowed();
  std::set<AccountId> validators, owners, providers, users;
  for (const auto& v : final_state.validators) validators.insert(v.id);
  for (const auto& [id, a] : final_state.algorithms) owners.insert(a.owner);
  for (const auto& c : final_state.contents) providers.insert(c.provider);
  for (const auto& [id, r] : final_state.requests) users.insert(r.submitter);
  for (const char* cls : {"validators", "algorithm_owners", "providers", "users", "oracle", "other"}) t.class_totals[cls] = 0;
  for (const auto& [account, balance] : t.balances) {
    const char* cls = validators.contains(account)                 ? "validators"
                      : owners.contains(account)                   ? "algorithm_owners"
                      : providers.contains(account)                ? "providers"
                      : users.contains(account)                    ? "users"
                      : account == final_state.params.oracle_account ? "oracle"
                                                                   : "other";
    t.class_totals[cls] += balance;
  }

  // chain summary
  ChainSummary& cs = report.chain;
  for (const auto& rec : chain) {
    if (rec.block.height == 0) continue;
    ++cs.blocks;
    for (std::size_t i = 0; i < rec.block.transactions.size(); ++i) {
      const std::string kind(to_string(rec.block.transactions[i].kind()));
      ++cs.transactions;
      if (i < rec.receipts.size() && rec.receipts[i].accepted) {
        ++cs.accepted;
        ++cs.accepted_by_kind[kind];
      } else {
        ++cs.rejected;
        ++cs.rejected_by_kind[kind];
      }
    }
  }
  if (!chain.empty()) {
    cs.tip_hash = chain.back().block.block_hash;
    cs.tip_state_root = chain.back().block.state_root;
  }

  for (const auto& [id, r] : final_state.requests) {
    ++report.requests.submitted;
    if (r.status == RequestStatus::Completed) {
      ++report.requests.completed;
    } else {
      ++report.requests.pending;
    }
  }
  for (const auto& [id, r] : final_state.results) {
    if (r.feedback) ++report.requests.feedback_labeled;
  }

  report.notifications = collect_notifications(chain);
  return report;
}

nlohmann::json to_json(const NotificationEvent& n) {
  return {{"provider", n.provider}, {"content_id", n.content_id}, {"request_id", n.request_id},
          {"similarity", n.similarity}};
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json algorithms = nlohmann::json::array();
  for (const auto& m : r.algorithms) {
    algorithms.push_back({{"algorithm_id", m.algorithm_id},
                          {"status", to_string(m.status)},
                          {"tp", m.counts.tp},
                          {"fp", m.counts.fp},
                          {"tn", m.counts.tn},
                          {"fn", m.counts.fn},
                          {"precision", nullable(m.precision)},
                          {"recall", nullable(m.recall)}});
  }
  nlohmann::json notifications = nlohmann::json::array();
  for (const auto& n : r.notifications) notifications.push_back(to_json(n));

  return {
      {"version", "v1"},
      {"algorithms", algorithms},
      {"tokens",
       {{"balances", r.tokens.balances},
        {"initial_supply", r.tokens.initial_supply},
        {"minted", r.tokens.minted},
        {"burned", r.tokens.burned},
        {"escrowed", r.tokens.escrowed},
        {"class_totals", r.tokens.class_totals}}},
      {"chain",
       {{"blocks", r.chain.blocks},
        {"transactions", r.chain.transactions},
        {"accepted", r.chain.accepted},
        {"rejected", r.chain.rejected},
        {"accepted_by_kind", r.chain.accepted_by_kind},
        {"rejected_by_kind", r.chain.rejected_by_kind},
        {"tip_hash", r.chain.tip_hash.hex()},
        {"tip_state_root", r.chain.tip_state_root.hex()}}},
      {"requests",
       {{"submitted", r.requests.submitted},
        {"completed", r.requests.completed},
        {"pending", r.requests.pending},
        {"feedback_labeled", r.requests.feedback_labeled}}},
      {"notifications", notifications},
  };
}

std::string to_csv(const RunReport& report) {
  std::string out = "algorithm_id,status,tp,fp,tn,fn,precision,recall\n";
  for (const auto& m : report.algorithms) {
    out += m.algorithm_id + ',' + std::string(to_string(m.status)) + ',' + std::to_string(m.counts.tp) + ',' +
           std::to_string(m.counts.fp) + ',' + std::to_string(m.counts.tn) + ',' + std::to_string(m.counts.fn) + ',' +
           csv_number(m.precision) + ',' + csv_number(m.recall) + '\n';
  }
  return out;
}

}  // namespace veriledger
