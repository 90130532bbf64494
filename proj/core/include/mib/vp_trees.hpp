#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mib/index.hpp"
#include "mib/rng.hpp"

namespace mib {

struct VpLeafEntry {
  RecordId id = kNoRecord;
  // Distance to every ancestor vantage point, root first. Used to reject
  // the record without an edit-distance evaluation.
  std::vector<int> ancestor_dists;
};

struct VpNode {
  // Internal node fields. `median` is the lower median of the distances
  // from the vantage point to the records below; records at distance equal
  // to the median go left.
  RecordId vantage = kNoRecord;
  int median = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Exact min/max distance from `vantage` to the records of each subtree.
  int left_lo = 0, left_hi = 0;
  int right_lo = 0, right_hi = 0;

  // Leaf payload: exactly one record.
  std::optional<VpLeafEntry> entry;

  bool leaf() const { return vantage == kNoRecord; }
};

// Binary vantage-point tree. Vantage points are picked by the best-spread
// rule: among `candidates` random records of the subset, take the one whose
// distances to a random sample of `sample_size` records have the largest
// variance. Descent tests the query ball against the exact per-subtree
// distance bounds.
class VpTree final : public Index {
 public:
  VpTree(const Dataset& ds, std::uint64_t seed, int candidates = 10,
         int sample_size = 100);

  const char* name() const override { return "vp"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

  const std::vector<VpNode>& nodes() const { return nodes_; }
  std::int32_t root() const { return root_; }

 private:
  std::int32_t build(std::vector<RecordId>& subset,
                     std::vector<std::vector<int>>& path, Rng& rng);
  RecordId best_spread(const std::vector<RecordId>& subset, Rng& rng) const;
  void search(std::int32_t idx, QueryContext& ctx, std::vector<int>& qdists) const;

  const Dataset* ds_;
  int candidates_;
  int sample_size_;
  std::vector<VpNode> nodes_;
  std::int32_t root_ = -1;
};

struct MvpParams {
  int vantage_count = 2;   // vantage points per internal node
  int partitions = 2;      // children per vantage point split
  int path_length = 10;    // ancestor distances kept per leaf record
  int leaf_capacity = 110;
};

struct MvpLeafEntry {
  RecordId id = kNoRecord;
  // Distances to the nearest ancestor vantage points, deepest first, at
  // most path_length entries.
  std::vector<int> path_dists;
};

struct MvpNode {
  bool leaf = false;

  // Internal: vantage points in split order. cutoffs[j][cell] holds the
  // partitions-1 non-decreasing boundary values that vantage j uses to
  // split pre-split cell `cell` (there are partitions^j such cells).
  // Region k (0-based) of a cell is the half-open distance band
  // (cutoff[k-1], cutoff[k]]; the first region has no lower bound, the
  // last no upper bound. children has partitions^v slots, -1 when empty.
  std::vector<RecordId> vantages;
  std::vector<std::vector<std::vector<int>>> cutoffs;
  std::vector<std::int32_t> children;

  // Leaf payload.
  std::vector<MvpLeafEntry> entries;
};

// Multi-vantage-point tree. Each internal node splits by `vantage_count`
// points in sequence; later vantage points see boundaries conditioned on the
// earlier partitions. The first vantage point of a node is random; each next
// one is the record farthest from the previous vantage point among records
// outside the leftmost partitions.
class MvpTree final : public Index {
 public:
  MvpTree(const Dataset& ds, std::uint64_t seed, const MvpParams& params = {});

  const char* name() const override { return "mvp"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

  const MvpParams& params() const { return params_; }
  const std::vector<MvpNode>& nodes() const { return nodes_; }
  std::int32_t root() const { return root_; }

 private:
  std::int32_t build(std::vector<RecordId>& subset,
                     std::vector<std::vector<int>>& path, Rng& rng);
  void search(std::int32_t idx, QueryContext& ctx, std::vector<int>& qpath) const;

  const Dataset* ds_;
  MvpParams params_;
  std::vector<MvpNode> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace mib
