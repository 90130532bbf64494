#pragma once

#include <cstdint>
#include <unordered_map>

#include "mib/dataset.hpp"

namespace mib {

// Per-query instrumentation. primary_evals counts edit-distance evaluations,
// filter_evals counts bag-distance evaluations; the two never mix. The memo
// caches edit distances from the current query to records by id, so with
// memoization on a record is evaluated at most once per query and
// primary_evals never exceeds the dataset size.
struct DistanceCounter {
  std::uint64_t primary_evals = 0;
  std::uint64_t filter_evals = 0;

  bool memoize = true;
  bool use_bag_filter = false;

  std::unordered_map<RecordId, int> memo;

  // Clears counts and memo, keeps the policy flags.
  void reset() {
    primary_evals = 0;
    filter_evals = 0;
    memo.clear();
  }
};

}  // namespace mib
