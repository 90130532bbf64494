#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mib/index.hpp"

namespace mib {

struct BubbleParams {
  double threshold = 5.0;  // admission bound: join a cluster iff the distance
                           // to its clusteroid is strictly below this
  int branching = 16;      // max entries per tree node
  int samples = 8;         // representative records kept per tree entry
};

// One flat cluster. The full pairwise distance matrix between members is
// kept, so clusteroid re-selection after an insert and the search-time
// bound need no further evaluations.
struct BubbleCluster {
  std::vector<RecordId> members;
  std::vector<std::vector<int>> dists;    // dists[i][j] = d(members[i], members[j])
  std::vector<std::uint64_t> rowsums;     // sum of squared distances to co-members
  std::uint32_t clusteroid_pos = 0;       // index into members, minimal rowsum
  int radius_bound = 0;                   // max member-to-clusteroid distance

  RecordId clusteroid() const { return members[clusteroid_pos]; }
};

struct CfNode;

struct CfEntry {
  std::vector<RecordId> samples;
  std::uint32_t member_count = 0;
  std::unique_ptr<CfNode> child;  // internal entries
  std::int32_t cluster = -1;      // leaf entries: index into clusters()
};

struct CfNode {
  bool leaf = true;
  std::vector<CfEntry> entries;
};

// Average inter-set distance sqrt(sum d(a_i, b_j)^2 / (|a| * |b|)) between
// two sample sets. Every pair costs one counted edit-distance evaluation.
double d2_distance(const Dataset& ds, const std::vector<RecordId>& a,
                   const std::vector<RecordId>& b, DistanceCounter& counter);

// Incremental clustering over a height-balanced feature tree. Inserts
// descend by d2 between the record and the entry samples; at a leaf the
// record joins the closest clusteroid's cluster if within the threshold,
// otherwise it starts a new cluster. The search scans clusteroids, skips a
// whole cluster when d(q, clusteroid) - radius_bound > e, and pre-filters
// members with the cached member-to-clusteroid distances.
class BubbleIndex final : public Index {
 public:
  BubbleIndex(const Dataset& ds, const BubbleParams& params = {},
              bool build_now = true);

  void insert(RecordId id, DistanceCounter& counter);

  const char* name() const override { return "bubble"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

  const BubbleParams& params() const { return params_; }
  const std::vector<BubbleCluster>& clusters() const { return clusters_; }
  const CfNode* root() const { return root_.get(); }

 private:
  std::vector<CfEntry> insert_below(CfNode& node, RecordId id, DistanceCounter& counter);
  void join_cluster(std::int32_t ci, RecordId id, int dist_to_clusteroid,
                    DistanceCounter& counter);
  std::vector<CfEntry> split_node(CfNode& node, DistanceCounter& counter);
  void refresh_entry(CfEntry& entry) const;

  const Dataset* ds_;
  BubbleParams params_;
  std::vector<BubbleCluster> clusters_;
  std::unique_ptr<CfNode> root_;
};

}  // namespace mib
