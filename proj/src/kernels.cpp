#include "veriledger/kernels.hpp"

#include <cmath>
#include <stdexcept>

#if defined(VERILEDGER_HAVE_OPENMP)
#include <omp.h>
#endif

namespace veriledger {

double cosine_fixed_order(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return kIneligibleScore;
  double s = dot / std::sqrt(na * nb);
  if (s < 0.0) return 0.0;
  if (s > 1.0) return 1.0;
  return s;
}

namespace {

inline double score_one(const Embedding& query, const ContentRecord& rec) {
  if (rec.media_type != query.media_type || rec.embedding.values.size() != query.values.size()) {
    return kIneligibleScore;
  }
  return cosine_fixed_order(query.values, rec.embedding.values);
}

void check_sizes(std::span<const ContentRecord> registry, std::span<double> out) {
  if (out.size() != registry.size()) throw std::invalid_argument("similarity_scores: output size mismatch");
}

}  // namespace

void similarity_scores_serial(const Embedding& query, std::span<const ContentRecord> registry, std::span<double> out) {
  check_sizes(registry, out);
  for (std::size_t i = 0; i < registry.size(); ++i) out[i] = score_one(query, registry[i]);
}

void similarity_scores_parallel(const Embedding& query, std::span<const ContentRecord> registry, std::span<double> out) {
  check_sizes(registry, out);
  const auto n = static_cast<std::ptrdiff_t>(registry.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = score_one(query, registry[static_cast<std::size_t>(i)]);
  }
}

int max_parallel_threads() {
#if defined(VERILEDGER_HAVE_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace veriledger
