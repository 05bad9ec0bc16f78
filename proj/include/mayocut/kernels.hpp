#pragma once

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "mayocut/parallel.hpp"

// Data-parallel primitives used by the solvers. Each kernel comes in a
// _serial reference form and an OpenMP form; the parallel form is required
// to return bit-identical results for any worker count, so callers stay
// deterministic. The dispatching wrappers pick based on max_threads().

namespace mayocut {

inline constexpr std::uint64_t knpos = std::numeric_limits<std::uint64_t>::max();

// ---- smallest index satisfying a pure predicate -------------------------

template <class Pred>
std::uint64_t min_index_where_serial(std::uint64_t count, Pred&& pred) {
  for (std::uint64_t i = 0; i < count; ++i)
    if (pred(i)) return i;
  return knpos;
}

// Scans fixed-size chunks; a chunk is fully evaluated before the early exit
// is taken, so the winning index never depends on thread scheduling.
template <class Pred>
std::uint64_t min_index_where_parallel(std::uint64_t count, Pred&& pred,
                                       std::uint64_t chunk = 2048) {
  const int threads = max_threads();
  for (std::uint64_t base = 0; base < count; base += chunk) {
    const auto end = static_cast<std::int64_t>(std::min(count, base + chunk));
    std::uint64_t best = knpos;
#pragma omp parallel for num_threads(threads) schedule(static) reduction(min : best)
    for (std::int64_t i = static_cast<std::int64_t>(base); i < end; ++i) {
      const auto idx = static_cast<std::uint64_t>(i);
      if (pred(idx)) best = std::min(best, idx);
    }
    if (best != knpos) return best;
  }
  return knpos;
}

template <class Pred>
std::uint64_t min_index_where(std::uint64_t count, Pred&& pred) {
  if (max_threads() > 1 && count > 1)
    return min_index_where_parallel(count, std::forward<Pred>(pred));
  return min_index_where_serial(count, std::forward<Pred>(pred));
}

// ---- argmin over a pure score function -----------------------------------

// Smaller score wins; equal scores break toward the smaller index. Score
// functions must never return NaN (use +inf to reject a candidate).
struct ScoredIndex {
  double score = std::numeric_limits<double>::infinity();
  std::uint64_t index = knpos;

  bool better_than(const ScoredIndex& other) const {
    return score < other.score || (score == other.score && index < other.index);
  }
};

template <class ScoreFn>
ScoredIndex argmin_score_serial(std::uint64_t count, ScoreFn&& score) {
  ScoredIndex best;
  for (std::uint64_t i = 0; i < count; ++i) {
    ScoredIndex cand{score(i), i};
    if (cand.better_than(best)) best = cand;
  }
  return best;
}

template <class ScoreFn>
ScoredIndex argmin_score_parallel(std::uint64_t count, ScoreFn&& score) {
  const int threads = max_threads();
  std::vector<ScoredIndex> local(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
  {
    const int t = omp_get_thread_num();
    ScoredIndex mine;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      const auto idx = static_cast<std::uint64_t>(i);
      ScoredIndex cand{score(idx), idx};
      if (cand.better_than(mine)) mine = cand;
    }
    local[static_cast<std::size_t>(t)] = mine;
  }
  // The (score, index) order is total, so the merge result is independent
  // of how indices were partitioned across threads.
  ScoredIndex best;
  for (const auto& cand : local)
    if (cand.better_than(best)) best = cand;
  return best;
}

template <class ScoreFn>
ScoredIndex argmin_score(std::uint64_t count, ScoreFn&& score) {
  if (max_threads() > 1 && count > 1)
    return argmin_score_parallel(count, std::forward<ScoreFn>(score));
  return argmin_score_serial(count, std::forward<ScoreFn>(score));
}

// ---- independent per-index work (e.g. one grid cell each) ----------------

template <class Fn>
void for_each_index_serial(std::size_t count, Fn&& fn) {
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

template <class Fn>
void for_each_index_parallel(std::size_t count, Fn&& fn) {
  const int threads = max_threads();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
    fn(static_cast<std::size_t>(i));
}

template <class Fn>
void for_each_index(std::size_t count, Fn&& fn) {
  if (max_threads() > 1 && count > 1)
    for_each_index_parallel(count, std::forward<Fn>(fn));
  else
    for_each_index_serial(count, std::forward<Fn>(fn));
}

}  // namespace mayocut
