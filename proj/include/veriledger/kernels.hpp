#pragma once

// Data-parallel scoring kernels. Each parallel kernel has a serial twin that
// is the reference for tests and benchmarks; both must produce bit-identical
// output because every element is computed by the same scalar routine.

#include <span>

#include "veriledger/records.hpp"
#include "veriledger/types.hpp"

namespace veriledger {

enum class ExecutionPolicy { Serial, Parallel };

/// Score written for registry entries that cannot match the query
/// (different media type, dimension mismatch, or all-zero vector).
inline constexpr double kIneligibleScore = -1.0;

/// Fixed-order cosine of two equal-length non-negative vectors, clamped to
/// [0,1]. Returns kIneligibleScore when either vector has zero norm.
double cosine_fixed_order(std::span<const double> a, std::span<const double> b);

void similarity_scores_serial(const Embedding& query, std::span<const ContentRecord> registry, std::span<double> out);
void similarity_scores_parallel(const Embedding& query, std::span<const ContentRecord> registry, std::span<double> out);

inline void similarity_scores(ExecutionPolicy policy, const Embedding& query, std::span<const ContentRecord> registry,
                              std::span<double> out) {
  if (policy == ExecutionPolicy::Parallel) {
    similarity_scores_parallel(query, registry, out);
  } else {
    similarity_scores_serial(query, registry, out);
  }
}

/// Worker count the parallel kernels will use (1 without OpenMP).
int max_parallel_threads();

}  // namespace veriledger
