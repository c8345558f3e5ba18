#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "veriledger/kernels.hpp"
#include "veriledger/records.hpp"
#include "veriledger/types.hpp"

namespace veriledger {

/// Embeds content into the fixed-dimension fingerprint for its media type.
///
///  - Bytes: 256-bin byte histogram normalized to unit sum.
///  - Image: P5 PGM split into an 8x8 grid of blocks (trailing blocks absorb
///    the remainder); each entry is the block's mean gray divided by maxval.
///    Both dimensions must be at least 8.
///  - Audio: 16-bit LE PCM split into 64 windows (same remainder rule); each
///    entry is the window RMS divided by 32768. At least 64 samples.
///
/// Throws Error with EmptyContent, MalformedImage or MalformedAudio.
Embedding embed(std::span<const std::uint8_t> content, MediaType media_type);

/// Cosine similarity in [0,1]. Throws DimensionMismatch or ZeroVector.
double similarity(const Embedding& a, const Embedding& b);

/// Ordering for match lists: similarity descending, then content_id ascending.
bool match_order(const MatchCandidate& a, const MatchCandidate& b);

/// Top-k registry entries of the query's media type with similarity >= threshold.
std::vector<MatchCandidate> match_trusted(const Embedding& query, std::span<const ContentRecord> registry,
                                          std::size_t k, double threshold,
                                          ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Read-only view of the trusted registry handed to detectors.
struct TrustedRegistry {
  std::span<const ContentRecord> records;
  /// Optional content_hash -> index lookup; a linear scan is used when absent.
  const std::map<Hash256, std::size_t>* by_hash = nullptr;

  const ContentRecord* find_hash(const Hash256& h) const;
};

struct DetectionRequest {
  Hash256 content_hash;
  MediaType media_type = MediaType::Bytes;
  Embedding embedding;
};

struct DetectionOutcome {
  Verdict verdict = Verdict::Unverified;
  double confidence = 0.0;
  std::vector<MatchCandidate> matched_content;

  bool operator==(const DetectionOutcome&) const = default;
};

/// Returns a description of the first result-record invariant the triple
/// violates, or nullopt when it is well formed.
std::optional<std::string> result_invariant_violation(Verdict verdict, double confidence,
                                                      const std::vector<MatchCandidate>& matched);

inline constexpr const char* kExactHashDetector = "exact-hash";
inline constexpr const char* kNearDuplicateDetector = "near-duplicate";
inline constexpr double kDefaultNearDuplicateTau = 0.95;
inline constexpr std::size_t kNearDuplicateTopK = 5;

/// Plugin table of detector kinds.
class DetectorRegistry {
 public:
  using DetectorFn =
      std::function<DetectionOutcome(const DetectorSpec&, const DetectionRequest&, const TrustedRegistry&, ExecutionPolicy)>;

  /// Registry holding exact-hash and near-duplicate.
  static const DetectorRegistry& builtin();
  static DetectorRegistry with_builtins();

  void add(std::string kind, DetectorFn fn);
  bool contains(const std::string& kind) const { return detectors_.contains(kind); }
  std::set<std::string> kinds() const;

  /// Throws UnknownDetector for unregistered kinds and InvalidResult when a
  /// plugin returns a malformed outcome.
  DetectionOutcome run(const DetectorSpec& spec, const DetectionRequest& request, const TrustedRegistry& registry,
                       ExecutionPolicy policy = ExecutionPolicy::Parallel) const;

 private:
  std::map<std::string, DetectorFn> detectors_;
};

inline DetectionOutcome run_detector(const DetectorSpec& spec, const DetectionRequest& request,
                                     const TrustedRegistry& registry,
                                     const DetectorRegistry& plugins = DetectorRegistry::builtin(),
                                     ExecutionPolicy policy = ExecutionPolicy::Parallel) {
  return plugins.run(spec, request, registry, policy);
}

/// Laplace-smoothed accuracy (tp+tn+1)/(total+2), kept as an exact fraction.
struct SmoothedScore {
  std::uint64_t numerator = 1;
  std::uint64_t denominator = 2;
};

SmoothedScore smoothed_score(const PerfCounters& perf);

/// Exact comparison of a/b against c/d.
int compare_scores(const SmoothedScore& a, const SmoothedScore& b);

struct ScoredCandidate {
  std::string algorithm_id;
  std::uint64_t registered_at = 0;
  SmoothedScore score;
};

/// Highest score wins; ties go to earliest registered_at, then smallest id.
/// Throws NoEligibleAlgorithm on an empty list.
std::string select_by_score(std::span<const ScoredCandidate> candidates);

/// Picks the Active algorithm covering `media_type` with the best smoothed
/// accuracy. Throws NoEligibleAlgorithm when none qualifies.
std::string select_model(MediaType media_type, const std::map<std::string, AlgorithmRecord>& algorithms);

}  // namespace veriledger
