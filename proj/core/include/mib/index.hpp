#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mib/counter.hpp"
#include "mib/dataset.hpp"
#include "mib/distance.hpp"

namespace mib {

// Find every record within `radius` edit operations of `text`.
struct RangeQuery {
  std::string text;
  int radius = 0;
};

struct QueryResult {
  std::vector<RecordId> matches;  // sorted, unique
  std::uint64_t primary_evals = 0;
  std::uint64_t filter_evals = 0;
};

// Subset elimination: every member of a subset lies within k of pivot p; the
// subset cannot contain a match iff d(q,p) - k > e.
constexpr bool prune_subset(int d_qp, int k, int e) { return d_qp - k > e; }

// Common contract of the search structures. An index is immutable after
// construction; range_search is safe to call concurrently as long as each
// call gets its own DistanceCounter.
class Index {
 public:
  virtual ~Index() = default;
  virtual const char* name() const = 0;

  // Resets `counter` (counts and memo, not the policy flags), then runs the
  // query. Matches come back sorted and unique; a stored record equal to a
  // query within radius of itself is a match like any other.
  virtual QueryResult range_search(const RangeQuery& query,
                                   DistanceCounter& counter) const = 0;
};

// Query-scoped evaluation state shared by the index implementations: the
// decoded query, the radius, the match accumulator, and counted + memoized
// distance evaluation against dataset records.
class QueryContext {
 public:
  // Resets the counter. Throws ConfigError on a negative radius.
  QueryContext(const Dataset& ds, const RangeQuery& query, DistanceCounter& counter);

  int radius() const { return radius_; }
  const std::u32string& query() const { return query_; }
  const Dataset& dataset() const { return *dataset_; }

  // Exact edit distance from the query to a record. Memoized; counts one
  // primary eval only when actually computed.
  int distance_to(RecordId id);

  // Membership test honoring the counter's bag-filter flag. A memo hit
  // costs nothing.
  bool verify(RecordId id);

  void add_match(RecordId id) { matches_.push_back(id); }
  void collect_if_match(RecordId id) {
    if (verify(id)) add_match(id);
  }

  // Sorts and dedups the matches, snapshots the counter totals.
  QueryResult finish();

 private:
  const Dataset* dataset_;
  DistanceCounter* counter_;
  std::u32string query_;
  int radius_;
  std::vector<RecordId> matches_;
};

// Ground-truth scan: evaluates the edit distance for every record, ignoring
// the bag-filter flag. primary_evals comes back equal to the dataset size.
QueryResult linear_scan(const Dataset& ds, const RangeQuery& query,
                        DistanceCounter& counter);

// The brute-force scan as a benchable structure. Unlike the free function it
// honors the counter's bag-filter flag.
class LinearScan final : public Index {
 public:
  explicit LinearScan(const Dataset& ds) : ds_(&ds) {}
  const char* name() const override { return "linear"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

 private:
  const Dataset* ds_;
};

}  // namespace mib
