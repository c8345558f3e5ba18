#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "veriledger/corpus.hpp"
#include "veriledger/detection.hpp"
#include "veriledger/ledger.hpp"
#include "veriledger/oracle.hpp"
#include "veriledger/report.hpp"
#include "veriledger/state.hpp"

namespace veriledger {

struct AccountSpec {
  AccountId id;
  Amount balance = 0;
};

struct AlgorithmPlan {
  std::string algorithm_id;
  AccountId owner;
  DetectorSpec detector;
  std::set<MediaType> media_types;
  Amount stake = 100;
  std::uint64_t register_at = 1;
};

struct ScheduleSpec {
  std::uint64_t blocks = 30;
  std::uint64_t content_at = 1;
  std::uint64_t requests_start = 3;
  std::size_t requests_per_block = 4;
  bool feedback = true;
};

/// Scenario input. JSON schema in docs/scenario.md; every key is optional
/// and unknown keys are rejected.
struct ScenarioConfig {
  std::uint64_t seed = 1;
  std::vector<Validator> validators;
  std::vector<AccountSpec> accounts;
  std::vector<AccountId> providers;
  std::vector<AccountId> users;
  OracleConfig oracle;
  std::vector<AlgorithmPlan> algorithms;
  CorpusSpec corpus;
  /// Perturbation rate of the Deepfake half of the validation challenges.
  double challenge_rate = 0.01;
  ScheduleSpec schedule;
  Amount request_fee = 10;
  /// oracle_account is overwritten by oracle.oracle_account.
  ContractParams params;
};

/// Throws Error(ConfigInvalid) on unknown keys, wrong types or bad values.
ScenarioConfig parse_scenario_config(const nlohmann::json& j);
ScenarioConfig load_scenario_config(const std::filesystem::path& path);
void validate_config(const ScenarioConfig& config);

struct RunOptions {
  ExecutionPolicy policy = ExecutionPolicy::Parallel;
  const DetectorRegistry* plugins = nullptr;  // builtin() when null
  /// When set, every record is appended here as the chain grows.
  std::optional<std::filesystem::path> chain_path;
  /// Extra transactions appended to each block (fuzzing hook).
  std::function<std::vector<Transaction>(const NetworkState& snapshot, std::uint64_t height)> inject;
  /// Observer called after each block is applied.
  std::function<void(const ChainRecord&, const BlockOutcome&)> on_block;
};

struct ScenarioRun {
  NetworkState genesis_state;
  std::vector<ChainRecord> chain;  // genesis first
  NetworkState final_state;
  Corpus corpus;
  GroundTruth truth;
  std::vector<OracleLogEntry> oracle_log;
  RunReport report;
};

/// Drives providers, users, algorithm owners and the oracle block by block:
/// oracle batch, challenge results, registrations, content, requests and
/// feedback are collected from the previous block's state, the elected
/// proposer's block is applied, and rewards are paid on epoch boundaries.
ScenarioRun run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

struct RunArtifacts {
  std::filesystem::path chain;
  std::filesystem::path oracle_log;
  std::filesystem::path report_json;
  std::filesystem::path metrics_csv;
  std::filesystem::path ground_truth;
};

RunArtifacts artifact_paths(const std::filesystem::path& out_dir);

/// run_scenario plus the files the `run` command writes into `out_dir`.
ScenarioRun run_scenario_to_directory(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                                      RunOptions options = {});

/// Compact report JSON followed by a newline, as written to report.json.
std::string render_report(const RunReport& report);

}  // namespace veriledger
