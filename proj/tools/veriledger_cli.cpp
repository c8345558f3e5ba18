// veriledger: run scenarios and work with stored chains.
#include <CLI11.hpp>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "veriledger/json_codec.hpp"
#include "veriledger/report.hpp"
#include "veriledger/scenario.hpp"
#include "veriledger/store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace veriledger;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_pretty = false;

void emit(const json& j) { std::cout << (g_pretty ? j.dump(2) : j.dump()) << "\n"; }

bool setup_logging() {
  auto logger = spdlog::stderr_color_mt("veriledger");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("VERILEDGER_LOG");
  std::string level = env ? env : "error";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    std::cerr << "VERILEDGER_LOG must be one of error, info, debug (got '" << level << "')\n";
    return false;
  }
  return true;
}

json block_summary(const ChainRecord& rec) {
  std::uint64_t accepted = 0;
  for (const auto& r : rec.receipts) accepted += r.accepted ? 1 : 0;
  return {{"height", rec.block.height},
          {"block_hash", rec.block.block_hash.hex()},
          {"parent_hash", rec.block.parent_hash.hex()},
          {"proposer", rec.block.proposer},
          {"timestamp", rec.block.timestamp},
          {"state_root", rec.block.state_root.hex()},
          {"transactions", rec.block.transactions.size()},
          {"accepted", accepted},
          {"rejected", rec.receipts.size() - accepted}};
}

json block_detail(const ChainRecord& rec) {
  json j = block_summary(rec);
  json txs = json::array();
  for (std::size_t i = 0; i < rec.block.transactions.size(); ++i) {
    const Transaction& tx = rec.block.transactions[i];
    const Receipt& receipt = rec.receipts.at(i);
    txs.push_back({{"index", i},
                   {"hash", tx_hash(tx).hex()},
                   {"kind", to_string(tx.kind())},
                   {"sender", tx.sender},
                   {"nonce", tx.nonce},
                   {"accepted", receipt.accepted},
                   {"error", receipt.error ? json(to_string(*receipt.error)) : json(nullptr)},
                   {"events", to_json(receipt).at("events")}});
  }
  j["txs"] = std::move(txs);
  return j;
}

int cmd_run(const fs::path& config_path, const fs::path& out_dir) {
  ScenarioConfig config = load_scenario_config(config_path);
  spdlog::info("running scenario {} (seed {}, {} blocks)", config_path.string(), config.seed, config.schedule.blocks);
  RunOptions options;
  options.on_block = [](const ChainRecord& rec, const BlockOutcome&) {
    spdlog::debug("block {} proposer {} txs {}", rec.block.height, rec.block.proposer, rec.block.transactions.size());
  };
  ScenarioRun run = run_scenario_to_directory(config, out_dir, options);
  const RunArtifacts paths = artifact_paths(out_dir);
  spdlog::info("tip {} at height {}", run.final_state.tip_hash.hex(), run.final_state.height);
  emit({{"status", "OK"},
        {"height", run.final_state.height},
        {"tip_hash", run.final_state.tip_hash.hex()},
        {"chain", paths.chain.string()},
        {"oracle_log", paths.oracle_log.string()},
        {"report", paths.report_json.string()},
        {"metrics", paths.metrics_csv.string()},
        {"ground_truth", paths.ground_truth.string()}});
  return kExitOk;
}

int cmd_inspect(const fs::path& chain_path, const std::optional<std::uint64_t>& height) {
  const ChainFile file = read_chain(chain_path);
  if (height) {
    for (const auto& rec : file.records) {
      if (rec.block.height == *height) {
        emit(block_detail(rec));
        return kExitOk;
      }
    }
    spdlog::error("no block at height {}", *height);
    return kExitFailure;
  }
  json out = json::array();
  for (const auto& rec : file.records) out.push_back(block_summary(rec));
  emit(out);
  return kExitOk;
}

GroundTruth load_truth(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("ground truth file not found: " + path.string());
  try {
    return ground_truth_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SerializationError, path.string() + ": " + e.what());
  }
}

int cmd_report(const fs::path& chain_path, std::optional<fs::path> truth_path) {
  if (!truth_path) truth_path = chain_path.parent_path() / "ground_truth.json";
  const GroundTruth truth = load_truth(*truth_path);
  const ChainFile file = read_chain(chain_path);
  const NetworkState final_state = replay_chain(file);
  const RunReport report = compute_metrics(file.records, final_state, truth);
  if (g_pretty) {
    emit(to_json(report));
  } else {
    std::cout << render_report(report);
  }
  return kExitOk;
}

int cmd_notifications(const fs::path& chain_path, const std::string& provider) {
  const ChainFile file = read_chain(chain_path);
  json out = json::array();
  for (const auto& ev : collect_notifications(file.records, provider)) out.push_back(to_json(ev));
  emit(out);
  return kExitOk;
}

int cmd_verify(const fs::path& chain_path) {
  const VerifyResult result = verify_chain(chain_path);
  if (result.ok) {
    emit({{"status", "OK"}, {"height", result.height}, {"tip_hash", result.tip_hash.hex()}});
    return kExitOk;
  }
  json failure = {{"status", "FAIL"},
                  {"height", result.failing_height ? json(*result.failing_height) : json(nullptr)},
                  {"line", result.failing_line},
                  {"error", result.error}};
  emit(failure);
  return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"veriledger: deepfake-detection ledger simulator"};
  app.require_subcommand(1);
  app.add_flag("--pretty", g_pretty, "Indented JSON output");

  fs::path config_path, out_dir, chain_path;
  std::optional<std::uint64_t> height;
  std::optional<fs::path> truth_path;
  std::string provider;

  auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
  run->add_option("--config", config_path, "Scenario JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  auto* inspect = app.add_subcommand("inspect", "Print block summaries");
  inspect->add_option("--chain", chain_path, "Chain file")->required();
  inspect->add_option("--height", height, "Show one block in full");

  auto* report = app.add_subcommand("report", "Recompute the run report from a stored chain");
  report->add_option("--chain", chain_path, "Chain file")->required();
  report->add_option("--truth", truth_path, "Ground truth (default: ground_truth.json next to the chain)");

  auto* notifications = app.add_subcommand("notifications", "List notifications for a provider");
  notifications->add_option("--chain", chain_path, "Chain file")->required();
  notifications->add_option("--provider", provider, "Provider account")->required();

  auto* verify = app.add_subcommand("verify", "Replay a chain and check every hash");
  verify->add_option("--chain", chain_path, "Chain file")->required();

  for (auto* sub : {run, inspect, report, notifications, verify}) sub->add_flag("--pretty", g_pretty, "Indented JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (!setup_logging()) return kExitUsage;

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*inspect) return cmd_inspect(chain_path, height);
    if (*report) return cmd_report(chain_path, truth_path);
    if (*notifications) return cmd_notifications(chain_path, provider);
    if (*verify) return cmd_verify(chain_path);
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return e.code() == ErrorCode::ConfigInvalid ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
