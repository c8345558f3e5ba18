#include "veriledger/oracle.hpp"

#include <stdexcept>

namespace veriledger {

namespace {

struct Slot {
  const AnalysisRequest* request = nullptr;
  std::string algorithm_id;
  std::optional<DetectionOutcome> outcome;
  std::optional<ErrorCode> error;
};

}  // namespace

std::string format_log_line(const OracleLogEntry& e) {
  std::string line = std::to_string(e.height) + '\t' + e.request_id + '\t' +
                     (e.algorithm_id.empty() ? std::string("-") : e.algorithm_id) + '\t';
  if (e.verdict) {
    line += to_string(*e.verdict);
  } else if (e.error) {
    line += to_string(*e.error);
  } else {
    line += "-";
  }
  line += '\t' + std::to_string(e.elapsed_ticks);
  return line;
}

OracleBatch process_pending(const NetworkState& state, const OracleConfig& config, const DetectorRegistry& plugins,
                            ExecutionPolicy policy) {
  if (config.batch_limit == 0) throw std::invalid_argument("oracle batch_limit must be >= 1");

  // requests is keyed by request_id, so iteration order is the service order
  std::vector<Slot> slots;
  for (const auto& [id, req] : state.requests) {
    if (slots.size() == config.batch_limit) break;
    if (req.status == RequestStatus::Pending) slots.push_back(Slot{&req, {}, {}, {}});
  }

  for (auto& slot : slots) {
    try {
      slot.algorithm_id = select_model(slot.request->media_type, state.algorithms);
    } catch (const Error& e) {
      slot.error = e.code();
    }
  }

  const TrustedRegistry registry{state.contents, &state.content_by_hash};
  auto analyze = [&](Slot& slot) {
    if (slot.error) return;
    try {
      const AlgorithmRecord& algo = state.algorithms.at(slot.algorithm_id);
      DetectionRequest request{slot.request->content_hash, slot.request->media_type, slot.request->embedding};
      // inner kernels stay serial; parallelism is across requests here
      slot.outcome = plugins.run(algo.detector, request, registry, ExecutionPolicy::Serial);
    } catch (const Error& e) {
      slot.error = e.code();
    } catch (const std::exception&) {
      slot.error = ErrorCode::InvalidResult;
    }
  };

  const auto n = static_cast<std::ptrdiff_t>(slots.size());
  if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) analyze(slots[static_cast<std::size_t>(i)]);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) analyze(slots[static_cast<std::size_t>(i)]);
  }

  OracleBatch batch;
  const std::uint64_t commit_height = state.height + 1;
  auto nonce_it = state.nonces.find(config.oracle_account);
  std::uint64_t nonce = nonce_it == state.nonces.end() ? 0 : nonce_it->second;
  for (auto& slot : slots) {
    const AnalysisRequest& req = *slot.request;
    OracleLogEntry entry{commit_height, req.request_id, slot.algorithm_id, std::nullopt, slot.error,
                         commit_height - req.submitted_at};
    if (slot.outcome) {
      entry.verdict = slot.outcome->verdict;
      batch.transactions.push_back(Transaction{
          config.oracle_account, ++nonce,
          CommitAnalysisResult{req.request_id, slot.algorithm_id, slot.outcome->verdict, slot.outcome->confidence,
                               std::move(slot.outcome->matched_content)}});
    }
    batch.log.push_back(std::move(entry));
  }
  return batch;
}

}  // namespace veriledger
