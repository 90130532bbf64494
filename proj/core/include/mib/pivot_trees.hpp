#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mib/index.hpp"
#include "mib/rng.hpp"

namespace mib {

// Node of a discrete distance-partition tree. An internal node keys each
// child by the exact distance between the pivot and every record below that
// edge; a leaf holds a bucket of record ids.
struct BkNode {
  RecordId pivot = kNoRecord;                        // internal nodes only
  std::vector<std::pair<int, std::uint32_t>> edges;  // (distance, node index), ascending
  std::vector<RecordId> bucket;                      // leaves only
  bool leaf() const { return pivot == kNoRecord; }
};

// Per-subset random pivots. The pivot record lives in its node, not in the
// subtrees, and is reported directly when within the query radius.
class BkTree final : public Index {
 public:
  BkTree(const Dataset& ds, std::uint64_t seed, int bucket_size = 512);

  const char* name() const override { return "bk"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

  int bucket_size() const { return bucket_size_; }
  const std::vector<BkNode>& nodes() const { return nodes_; }
  const BkNode& root() const { return nodes_[root_]; }

 private:
  std::uint32_t build(std::vector<RecordId> subset, Rng& rng);

  const Dataset* ds_;
  int bucket_size_;
  std::vector<BkNode> nodes_;
  std::uint32_t root_ = 0;
};

// Node shared by the fixed-pivot trees. Distances to the pivot of the node's
// depth key the children; the pivot itself is a dataset record that stays in
// whatever subset it falls into.
struct FqNode {
  bool leaf = false;
  std::vector<std::pair<int, std::uint32_t>> edges;  // internal, ascending
  std::vector<RecordId> bucket;                      // leaves only
};

// One pivot per level, shared by every node of that depth. Level pivots are
// a seeded permutation of the dataset, so any subset splits at the latest
// when its own first member comes up as the level pivot.
class FqTree final : public Index {
 public:
  FqTree(const Dataset& ds, std::uint64_t seed, int bucket_size = 512);

  const char* name() const override { return "fq"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

  int bucket_size() const { return bucket_size_; }
  const std::vector<FqNode>& nodes() const { return nodes_; }
  const FqNode& root() const { return nodes_[root_]; }
  // Pivot of each level actually present in the tree.
  const std::vector<RecordId>& level_pivots() const { return level_pivots_; }
  int max_leaf_depth() const;

 private:
  const Dataset* ds_;
  int bucket_size_;
  std::vector<FqNode> nodes_;
  std::vector<RecordId> level_pivots_;
  std::uint32_t root_ = 0;
};

// Fixed-height variant: every leaf sits at exactly `height`; internal levels
// keep splitting (or passing records through) until that depth. By default
// the height is the deepest leaf the bucket-terminated tree would have, so
// shallow branches get extended by the remaining level pivots.
class FhTree final : public Index {
 public:
  FhTree(const Dataset& ds, std::uint64_t seed, int bucket_size = 512,
         std::optional<int> height = std::nullopt);

  const char* name() const override { return "fh"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

  int bucket_size() const { return bucket_size_; }
  int height() const { return height_; }
  const std::vector<FqNode>& nodes() const { return nodes_; }
  const FqNode& root() const { return nodes_[root_]; }
  const std::vector<RecordId>& level_pivots() const { return level_pivots_; }

 private:
  const Dataset* ds_;
  int bucket_size_;
  int height_ = 0;
  std::vector<FqNode> nodes_;
  std::vector<RecordId> level_pivots_;
  std::uint32_t root_ = 0;
};

}  // namespace mib
