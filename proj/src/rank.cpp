#include "prefrank/rank.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>

namespace prefrank {

NormalizedComparison normalize(const Comparison& c) {
  NormalizedComparison n;
  if (c.preference == Preference::A) {
    n.winner = c.a;
    n.loser = c.b;
  } else {
    n.winner = c.b;
    n.loser = c.a;
  }
  n.strength = c.strength;
  return n;
}

std::vector<std::vector<Comparison>> stratify(const std::vector<Comparison>& comparisons) {
  std::map<int, std::vector<Comparison>> by_key;
  for (const auto& c : comparisons) by_key[c.stratum_id].push_back(c);
  std::vector<std::vector<Comparison>> strata;
  strata.reserve(by_key.size());
  for (auto& [key, group] : by_key) strata.push_back(std::move(group));
  return strata;
}

std::vector<Partition> partition_tie_aware(const std::vector<NormalizedComparison>& stratum,
                                           std::optional<std::size_t> max_size) {
  if (stratum.empty()) {
    throw std::invalid_argument("partition_tie_aware: empty stratum");
  }
  // Group by strength value, in order of first appearance.
  std::vector<std::vector<const NormalizedComparison*>> groups;
  std::map<double, std::size_t> group_of;
  for (const auto& c : stratum) {
    auto [it, inserted] = group_of.try_emplace(c.strength, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(&c);
  }
  std::size_t largest_tie = 0;
  for (const auto& g : groups) largest_tie = std::max(largest_tie, g.size());

  std::size_t k;
  if (max_size) {
    k = (stratum.size() + *max_size - 1) / *max_size;
    if (k < largest_tie) {
      for (const auto& g : groups) {
        if (g.size() > k) {
          throw std::runtime_error(
              "partition_tie_aware: max_size leaves unresolved ties at strength " +
              std::to_string(g.front()->strength));
        }
      }
    }
  } else {
    k = largest_tie;
  }

  std::vector<Partition> partitions(k);
  // Round-robin with a cursor that persists across tie groups, keeping
  // partition sizes balanced.
  std::size_t cursor = 0;
  for (const auto& g : groups) {
    for (const auto* c : g) {
      partitions[cursor % k].push_back(*c);
      ++cursor;
    }
  }
  return partitions;
}

RankingTarget sort_by_strength(const Partition& partition) {
  RankingTarget target;
  target.ordered = partition;
  std::sort(target.ordered.begin(), target.ordered.end(),
            [](const NormalizedComparison& x, const NormalizedComparison& y) {
              return x.strength < y.strength;
            });
  for (std::size_t i = 1; i < target.ordered.size(); ++i) {
    if (target.ordered[i - 1].strength == target.ordered[i].strength) {
      throw std::runtime_error("sort_by_strength: tied strengths in partition");
    }
  }
  return target;
}

namespace {

struct Fragment {
  std::vector<NormalizedComparison> members;  // shuffled at creation
  std::size_t order = 0;                      // insertion order, heap tie-break
};

struct FragmentLess {
  // Max-heap by size; earlier insertion wins ties.
  bool operator()(const Fragment& x, const Fragment& y) const {
    if (x.members.size() != y.members.size()) return x.members.size() < y.members.size();
    return x.order > y.order;
  }
};

}  // namespace

std::vector<PackedBatch> pack_batches(const std::vector<RankingTarget>& rankings,
                                      std::size_t capacity, Rng& rng) {
  if (capacity < 1) throw std::invalid_argument("pack_batches: capacity must be >= 1");

  std::size_t total = 0;
  for (const auto& r : rankings) total += r.ordered.size();
  const std::size_t num_batches = (total + capacity - 1) / capacity;

  std::vector<PackedBatch> batches(num_batches);
  std::vector<std::size_t> remaining(num_batches, capacity);
  for (auto& b : batches) b.capacity = capacity;

  std::priority_queue<Fragment, std::vector<Fragment>, FragmentLess> heap;
  std::size_t next_order = 0;
  for (const auto& r : rankings) {
    if (r.ordered.empty()) continue;
    Fragment f{r.ordered, next_order++};
    rng.shuffle(f.members);  // randomize split points, once per fragment
    heap.push(std::move(f));
  }

  auto place = [&](std::size_t batch, std::vector<NormalizedComparison> members) {
    remaining[batch] -= members.size();
    // Re-sort the placed piece so it is a valid ascending-strength ranking.
    RankingTarget piece;
    piece.ordered = std::move(members);
    std::sort(piece.ordered.begin(), piece.ordered.end(),
              [](const NormalizedComparison& x, const NormalizedComparison& y) {
                return x.strength < y.strength;
              });
    batches[batch].rankings.push_back(std::move(piece));
  };

  while (!heap.empty()) {
    Fragment frag = heap.top();
    heap.pop();
    const std::size_t need = frag.members.size();

    // Best fit: batch with the least remaining space that still fits.
    std::size_t best = num_batches;
    for (std::size_t i = 0; i < num_batches; ++i) {
      if (remaining[i] >= need &&
          (best == num_batches || remaining[i] < remaining[best])) {
        best = i;
      }
    }
    if (best != num_batches) {
      place(best, std::move(frag.members));
      continue;
    }

    // No whole fit: put the largest prefix into the batch with the most
    // remaining space and reinsert the suffix.
    std::size_t widest = 0;
    for (std::size_t i = 1; i < num_batches; ++i) {
      if (remaining[i] > remaining[widest]) widest = i;
    }
    const std::size_t take = remaining[widest];
    std::vector<NormalizedComparison> prefix(frag.members.begin(),
                                             frag.members.begin() + static_cast<long>(take));
    frag.members.erase(frag.members.begin(), frag.members.begin() + static_cast<long>(take));
    place(widest, std::move(prefix));
    frag.order = next_order++;
    heap.push(std::move(frag));
  }

  // Best-fit placement can strand slack in more than one batch; drain it
  // toward the last batch so every batch except the last is full. Moving a
  // suffix of a sorted ranking keeps both pieces valid rankings.
  for (std::size_t i = 0; i + 1 < num_batches; ++i) {
    while (remaining[i] > 0) {
      std::size_t j = num_batches;
      for (std::size_t cand = num_batches; cand-- > i + 1;) {
        if (!batches[cand].rankings.empty()) {
          j = cand;
          break;
        }
      }
      if (j == num_batches) break;
      auto& src = batches[j].rankings.back();
      const std::size_t take = std::min(remaining[i], src.ordered.size());
      RankingTarget moved;
      moved.ordered.assign(src.ordered.end() - static_cast<long>(take), src.ordered.end());
      src.ordered.erase(src.ordered.end() - static_cast<long>(take), src.ordered.end());
      if (src.ordered.empty()) batches[j].rankings.pop_back();
      batches[i].rankings.push_back(std::move(moved));
      remaining[i] -= take;
      remaining[j] += take;
    }
  }
  return batches;
}

void permute_strengths(std::vector<Comparison>& comparisons, Rng& rng) {
  std::vector<double> strengths;
  strengths.reserve(comparisons.size());
  for (const auto& c : comparisons) strengths.push_back(c.strength);
  rng.shuffle(strengths);
  for (std::size_t i = 0; i < comparisons.size(); ++i) {
    comparisons[i].strength = strengths[i];
  }
}

}  // namespace prefrank
