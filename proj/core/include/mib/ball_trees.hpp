#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mib/index.hpp"

namespace mib {

struct BallNode;

struct BallLeafEntry {
  RecordId id = kNoRecord;
  // Distance to the routing object of the entry that points at this leaf;
  // -1 while the leaf is the root. Lets the search skip a verification when
  // |d(q, routing) - dist_to_parent| > e.
  int dist_to_parent = -1;
};

struct BallRoutingEntry {
  RecordId routing_id = kNoRecord;
  // Exact max distance from routing_id to every record in the subtree.
  int covering_radius = 0;
  // Distance to the parent node's routing object; -1 in the root node.
  int parent_distance = -1;
  std::unique_ptr<BallNode> child;
};

struct BallNode {
  bool leaf = true;
  std::vector<BallLeafEntry> entries;     // leaf payload
  std::vector<BallRoutingEntry> routing;  // internal payload
};

// The three covering-radius trees share this engine; they differ in routing
// policy, split policy and search-time pruning:
//
//   bisector  binary, route to the closer routing object, a full leaf is
//             replaced in place by a new internal node with the two farthest
//             records as routing objects. Descent prunes with the covering
//             radius only.
//   mtree     m-ary, route where the covering radius grows least (ties to
//             the closer object), splits promote the two farthest entries
//             and propagate upward. Descent additionally prunes children
//             from the stored parent distances before any evaluation.
//   mtb       mtree skeleton with closest-object routing and a hard bound:
//             whenever an insert would push a leaf-level covering radius
//             above the threshold, the leaf is re-partitioned greedily until
//             every group has radius within the threshold.
//
// Covering radii and parent distances stay exact through every insert and
// split. Routing objects remain ordinary leaf records below themselves; the
// search reports them from the evaluation made for routing, without a second
// evaluation.
namespace detail {

struct BallPolicy {
  bool route_closest = true;
  bool propagate_splits = true;
  bool parent_prune = true;
  int fanout = 2;
  int leaf_capacity = 256;
  std::optional<double> threshold;
};

class BallTreeCore {
 public:
  BallTreeCore(const Dataset& ds, BallPolicy policy);

  void insert(RecordId id, DistanceCounter& counter);
  void search(QueryContext& ctx) const;

  const BallNode* root() const { return root_.get(); }
  const BallPolicy& policy() const { return policy_; }
  const Dataset& dataset() const { return *ds_; }

 private:
  std::vector<BallRoutingEntry> insert_below(BallNode& node, RecordId id,
                                             RecordId parent_routing,
                                             DistanceCounter& counter);
  std::vector<BallRoutingEntry> split_leaf(std::vector<BallLeafEntry> entries,
                                           DistanceCounter& counter) const;
  std::vector<BallRoutingEntry> split_routing(std::vector<BallRoutingEntry> entries,
                                              DistanceCounter& counter) const;
  int subtree_max_distance(RecordId from, const BallNode& node,
                           DistanceCounter& counter) const;
  void search_node(const BallNode& node, QueryContext& ctx, int dist_q_parent) const;

  const Dataset* ds_;
  BallPolicy policy_;
  std::unique_ptr<BallNode> root_;
};

}  // namespace detail

class BisectorTree final : public Index {
 public:
  BisectorTree(const Dataset& ds, int leaf_capacity = 256, bool build_now = true);

  void insert(RecordId id, DistanceCounter& counter) { core_.insert(id, counter); }
  const char* name() const override { return "bisector"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

  const BallNode* root() const { return core_.root(); }
  int leaf_capacity() const { return core_.policy().leaf_capacity; }

 private:
  detail::BallTreeCore core_;
};

struct MTreeParams {
  int fanout = 5;
  int leaf_capacity = 256;
};

class MTree final : public Index {
 public:
  MTree(const Dataset& ds, const MTreeParams& params = {}, bool build_now = true);

  void insert(RecordId id, DistanceCounter& counter) { core_.insert(id, counter); }
  const char* name() const override { return "mtree"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

  const BallNode* root() const { return core_.root(); }
  const MTreeParams& params() const { return params_; }

 private:
  MTreeParams params_;
  detail::BallTreeCore core_;
};

struct MtbParams {
  int fanout = 5;
  int leaf_capacity = 256;
  double threshold = 5.0;
};

class MtbTree final : public Index {
 public:
  MtbTree(const Dataset& ds, const MtbParams& params = {}, bool build_now = true);

  void insert(RecordId id, DistanceCounter& counter) { core_.insert(id, counter); }
  const char* name() const override { return "mtb"; }
  QueryResult range_search(const RangeQuery& query,
                           DistanceCounter& counter) const override;

  const BallNode* root() const { return core_.root(); }
  const MtbParams& params() const { return params_; }

 private:
  MtbParams params_;
  detail::BallTreeCore core_;
};

}  // namespace mib
