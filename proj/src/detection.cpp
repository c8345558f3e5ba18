#include "veriledger/detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "veriledger/error.hpp"
#include "veriledger/media.hpp"

namespace veriledger {

namespace {

constexpr std::size_t kGrid = 8;
constexpr std::size_t kAudioWindows = 64;

// Segment [begin, end) of `index` when `total` is cut into `parts` pieces of
// total/parts, with the last piece absorbing the remainder.
struct Segment {
  std::size_t begin, end;
};

Segment segment(std::size_t total, std::size_t parts, std::size_t index) {
  const std::size_t width = total / parts;
  const std::size_t begin = index * width;
  const std::size_t end = index + 1 == parts ? total : begin + width;
  return {begin, end};
}

Embedding embed_bytes(std::span<const std::uint8_t> content) {
  std::array<std::uint64_t, 256> counts{};
  for (auto b : content) ++counts[b];
  Embedding e{MediaType::Bytes, std::vector<double>(256)};
  const auto n = static_cast<double>(content.size());
  for (std::size_t i = 0; i < 256; ++i) e.values[i] = static_cast<double>(counts[i]) / n;
  return e;
}

Embedding embed_image(std::span<const std::uint8_t> content) {
  const GrayImage img = parse_pgm(content);
  if (img.width < kGrid || img.height < kGrid) {
    throw Error(ErrorCode::MalformedImage, "image must be at least 8x8 for the block grid");
  }
  Embedding e{MediaType::Image, std::vector<double>(kGrid * kGrid)};
  for (std::size_t br = 0; br < kGrid; ++br) {
    const Segment rows = segment(img.height, kGrid, br);
    for (std::size_t bc = 0; bc < kGrid; ++bc) {
      const Segment cols = segment(img.width, kGrid, bc);
      std::uint64_t sum = 0;
      for (std::size_t y = rows.begin; y < rows.end; ++y) {
        for (std::size_t x = cols.begin; x < cols.end; ++x) sum += img.pixels[y * img.width + x];
      }
      const std::uint64_t count = (rows.end - rows.begin) * (cols.end - cols.begin);
      e.values[br * kGrid + bc] = static_cast<double>(sum) / static_cast<double>(count * img.maxval);
    }
  }
  return e;
}

Embedding embed_audio(std::span<const std::uint8_t> content) {
  const auto samples = decode_pcm16le(content);
  if (samples.size() < kAudioWindows) {
    throw Error(ErrorCode::MalformedAudio, "need at least 64 samples, got " + std::to_string(samples.size()));
  }
  Embedding e{MediaType::Audio, std::vector<double>(kAudioWindows)};
  for (std::size_t w = 0; w < kAudioWindows; ++w) {
    const Segment win = segment(samples.size(), kAudioWindows, w);
    std::uint64_t sumsq = 0;
    for (std::size_t i = win.begin; i < win.end; ++i) {
      const auto s = static_cast<std::int64_t>(samples[i]);
      sumsq += static_cast<std::uint64_t>(s * s);
    }
    const double mean_sq = static_cast<double>(sumsq) / static_cast<double>(win.end - win.begin);
    e.values[w] = std::sqrt(mean_sq) / 32768.0;
  }
  return e;
}

DetectionOutcome exact_hash_outcome(const ContentRecord& rec) {
  return {Verdict::Authentic, 1.0, {{rec.content_id, 1.0}}};
}

void reject_unknown_params(const DetectorSpec& spec, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : spec.params) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) throw Error(ErrorCode::InvalidPayload, spec.kind + ": unknown parameter '" + key + "'");
  }
}

DetectionOutcome run_exact_hash(const DetectorSpec& spec, const DetectionRequest& request,
                                const TrustedRegistry& registry, ExecutionPolicy) {
  reject_unknown_params(spec, {});
  if (const ContentRecord* rec = registry.find_hash(request.content_hash)) return exact_hash_outcome(*rec);
  return {Verdict::Unverified, 0.0, {}};
}

DetectionOutcome run_near_duplicate(const DetectorSpec& spec, const DetectionRequest& request,
                                    const TrustedRegistry& registry, ExecutionPolicy policy) {
  reject_unknown_params(spec, {"tau"});
  double tau = kDefaultNearDuplicateTau;
  if (auto it = spec.params.find("tau"); it != spec.params.end()) tau = it->second;
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidPayload, "near-duplicate: tau outside [0,1]");

  if (const ContentRecord* rec = registry.find_hash(request.content_hash)) return exact_hash_outcome(*rec);
  auto matches = match_trusted(request.embedding, registry.records, kNearDuplicateTopK, tau, policy);
  if (matches.empty()) return {Verdict::Unverified, 0.0, {}};
  const double top = matches.front().similarity;
  return {Verdict::Deepfake, top, std::move(matches)};
}

}  // namespace

Embedding embed(std::span<const std::uint8_t> content, MediaType media_type) {
  if (content.empty()) throw Error(ErrorCode::EmptyContent, "cannot embed empty content");
  switch (media_type) {
    case MediaType::Bytes: return embed_bytes(content);
    case MediaType::Image: return embed_image(content);
    case MediaType::Audio: return embed_audio(content);
  }
  throw Error(ErrorCode::InvalidPayload, "unknown media type");
}

double similarity(const Embedding& a, const Embedding& b) {
  if (a.media_type != b.media_type || a.values.size() != b.values.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.values.size()) + " vs " + std::to_string(b.values.size()));
  }
  const double s = cosine_fixed_order(a.values, b.values);
  if (s == kIneligibleScore) throw Error(ErrorCode::ZeroVector, "similarity of an all-zero embedding");
  return s;
}

bool match_order(const MatchCandidate& a, const MatchCandidate& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.content_id < b.content_id;
}

std::vector<MatchCandidate> match_trusted(const Embedding& query, std::span<const ContentRecord> registry,
                                          std::size_t k, double threshold, ExecutionPolicy policy) {
  if (k == 0) throw std::invalid_argument("match_trusted: k must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("match_trusted: threshold outside [0,1]");

  std::vector<double> scores(registry.size());
  similarity_scores(policy, query, registry, scores);

  std::vector<MatchCandidate> hits;
  for (std::size_t i = 0; i < registry.size(); ++i) {
    if (scores[i] != kIneligibleScore && scores[i] >= threshold) hits.push_back({registry[i].content_id, scores[i]});
  }
  const std::size_t keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), match_order);
  hits.resize(keep);
  return hits;
}

const ContentRecord* TrustedRegistry::find_hash(const Hash256& h) const {
  if (by_hash) {
    auto it = by_hash->find(h);
    return it == by_hash->end() ? nullptr : &records[it->second];
  }
  for (const auto& rec : records) {
    if (rec.content_hash == h) return &rec;
  }
  return nullptr;
}

std::optional<std::string> result_invariant_violation(Verdict verdict, double confidence,
                                                      const std::vector<MatchCandidate>& matched) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) return "confidence outside [0,1]";
  for (std::size_t i = 0; i < matched.size(); ++i) {
    const auto& m = matched[i];
    if (!(m.similarity >= 0.0 && m.similarity <= 1.0)) return "match similarity outside [0,1]";
    if (m.content_id.empty()) return "match without content_id";
    if (i > 0 && !match_order(matched[i - 1], m)) return "matches not in descending order";
  }
  switch (verdict) {
    case Verdict::Authentic: {
      if (confidence != 1.0) return "Authentic requires confidence 1.0";
      bool exact = std::any_of(matched.begin(), matched.end(), [](const auto& m) { return m.similarity == 1.0; });
      if (!exact) return "Authentic requires an exact match";
      break;
    }
    case Verdict::Unverified:
      if (!matched.empty()) return "Unverified must not carry matches";
      break;
    case Verdict::Deepfake:
      break;
  }
  return std::nullopt;
}

const DetectorRegistry& DetectorRegistry::builtin() {
  static const DetectorRegistry registry = with_builtins();
  return registry;
}

DetectorRegistry DetectorRegistry::with_builtins() {
  DetectorRegistry r;
  r.add(kExactHashDetector, run_exact_hash);
  r.add(kNearDuplicateDetector, run_near_duplicate);
  return r;
}

void DetectorRegistry::add(std::string kind, DetectorFn fn) { detectors_[std::move(kind)] = std::move(fn); }

std::set<std::string> DetectorRegistry::kinds() const {
  std::set<std::string> out;
  for (const auto& [kind, fn] : detectors_) out.insert(kind);
  return out;
}

DetectionOutcome DetectorRegistry::run(const DetectorSpec& spec, const DetectionRequest& request,
                                       const TrustedRegistry& registry, ExecutionPolicy policy) const {
  auto it = detectors_.find(spec.kind);
  if (it == detectors_.end()) throw Error(ErrorCode::UnknownDetector, spec.kind);
  DetectionOutcome out = it->second(spec, request, registry, policy);
  if (auto why = result_invariant_violation(out.verdict, out.confidence, out.matched_content)) {
    throw Error(ErrorCode::InvalidResult, spec.kind + ": " + *why);
  }
  return out;
}

SmoothedScore smoothed_score(const PerfCounters& perf) { return {perf.correct() + 1, perf.total() + 2}; }

int compare_scores(const SmoothedScore& a, const SmoothedScore& b) {
  const auto lhs = static_cast<u128>(a.numerator) * b.denominator;
  const auto rhs = static_cast<u128>(b.numerator) * a.denominator;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::string select_by_score(std::span<const ScoredCandidate> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::NoEligibleAlgorithm, "no candidates");
  const ScoredCandidate* best = &candidates.front();
  for (const auto& c : candidates.subspan(1)) {
    const int cmp = compare_scores(c.score, best->score);
    if (cmp > 0 || (cmp == 0 && (c.registered_at < best->registered_at ||
                                 (c.registered_at == best->registered_at && c.algorithm_id < best->algorithm_id)))) {
      best = &c;
    }
  }
  return best->algorithm_id;
}

std::string select_model(MediaType media_type, const std::map<std::string, AlgorithmRecord>& algorithms) {
  std::vector<ScoredCandidate> eligible;
  for (const auto& [id, rec] : algorithms) {
    if (rec.status == AlgorithmStatus::Active && rec.covers(media_type)) {
      eligible.push_back({id, rec.registered_at, smoothed_score(rec.perf)});
    }
  }
  if (eligible.empty()) throw Error(ErrorCode::NoEligibleAlgorithm, std::string(to_string(media_type)));
  return select_by_score(eligible);
}

}  // namespace veriledger
