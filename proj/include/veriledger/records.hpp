#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "veriledger/hash.hpp"
#include "veriledger/types.hpp"

namespace veriledger {

struct PerfCounters {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t correct() const { return tp + tn; }
  std::uint64_t total() const { return tp + fp + tn + fn; }

  bool operator==(const PerfCounters&) const = default;
};

struct AlgorithmRecord {
  std::string algorithm_id;
  AccountId owner;
  std::set<MediaType> media_types;
  DetectorSpec detector;
  AlgorithmStatus status = AlgorithmStatus::Pending;
  Amount stake = 0;
  PerfCounters perf;
  std::uint64_t challenge_passed = 0;
  std::set<std::string> challenges_seen;
  std::uint64_t registered_at = 0;
  /// tp + tn accrued since the last epoch boundary.
  std::uint64_t epoch_correct = 0;

  bool covers(MediaType t) const { return media_types.contains(t); }
  bool operator==(const AlgorithmRecord&) const = default;
};

struct ContentRecord {
  std::string content_id;
  AccountId provider;
  MediaType media_type = MediaType::Bytes;
  Hash256 content_hash;
  Embedding embedding;
  std::map<std::string, std::string> metadata;
  std::uint64_t registered_at = 0;

  bool operator==(const ContentRecord&) const = default;
};

struct AnalysisRequest {
  std::string request_id;
  AccountId submitter;
  MediaType media_type = MediaType::Bytes;
  Hash256 content_hash;
  Embedding embedding;
  Amount fee = 0;
  RequestStatus status = RequestStatus::Pending;
  std::uint64_t submitted_at = 0;

  bool operator==(const AnalysisRequest&) const = default;
};

struct AnalysisResultRecord {
  std::string request_id;
  std::string algorithm_id;
  Verdict verdict = Verdict::Unverified;
  double confidence = 0.0;
  std::vector<MatchCandidate> matched_content;
  std::uint64_t committed_at = 0;
  /// Label supplied by the submitter; at most once.
  std::optional<Verdict> feedback;

  bool operator==(const AnalysisResultRecord&) const = default;
};

struct Validator {
  std::string id;
  Amount stake = 0;

  bool operator==(const Validator&) const = default;
};

}  // namespace veriledger
