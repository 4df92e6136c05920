#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "prefrank/data.hpp"
#include "prefrank/rng.hpp"

namespace prefrank {

// A comparison reoriented so the preferred item comes first.
struct NormalizedComparison {
  Item winner;
  Item loser;
  double strength = 0.0;
};

// Tie-free group of normalized comparisons from one stratum.
using Partition = std::vector<NormalizedComparison>;

// Comparisons in ascending strength order (strongest preference first);
// the zero-score anchor is implicit and appended by the loss.
struct RankingTarget {
  std::vector<NormalizedComparison> ordered;
};

struct PackedBatch {
  std::vector<RankingTarget> rankings;
  std::size_t capacity = 0;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& r : rankings) n += r.ordered.size();
    return n;
  }
};

NormalizedComparison normalize(const Comparison& c);

// Groups comparisons by stratum_id, preserving input order within a group.
// Strata are returned in ascending id order.
std::vector<std::vector<Comparison>> stratify(const std::vector<Comparison>& comparisons);

// Round-robin tie-aware partitioning of one stratum.
// k = ceil(n / max_size) when max_size is given, else the largest tie-group
// size. Throws when max_size forces k below the largest tie group.
std::vector<Partition> partition_tie_aware(const std::vector<NormalizedComparison>& stratum,
                                           std::optional<std::size_t> max_size = {});

// Ascending strength order. Throws on tied strengths.
RankingTarget sort_by_strength(const Partition& partition);

// Greedy largest-first best-fit packing of rankings into fixed-capacity
// batches, splitting rankings when no batch fits them whole.
std::vector<PackedBatch> pack_batches(const std::vector<RankingTarget>& rankings,
                                      std::size_t capacity, Rng& rng);

// Uniformly permutes the strength values across comparisons in place;
// items and preference labels are untouched.
void permute_strengths(std::vector<Comparison>& comparisons, Rng& rng);

}  // namespace prefrank
