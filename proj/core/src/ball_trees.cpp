#include "mib/ball_trees.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "mib/errors.hpp"

namespace mib {
namespace detail {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::unique_ptr<BallNode> make_leaf(std::vector<BallLeafEntry> entries) {
  auto node = std::make_unique<BallNode>();
  node->leaf = true;
  node->entries = std::move(entries);
  return node;
}

std::unique_ptr<BallNode> make_internal(std::vector<BallRoutingEntry> routing) {
  auto node = std::make_unique<BallNode>();
  node->leaf = false;
  node->routing = std::move(routing);
  return node;
}

}  // namespace

BallTreeCore::BallTreeCore(const Dataset& ds, BallPolicy policy)
    : ds_(&ds), policy_(policy) {
  if (ds.empty()) throw ConfigError("cannot index an empty dataset");
  if (policy.fanout < 2) throw ConfigError("fanout must be at least 2");
  if (policy.leaf_capacity < 1) throw ConfigError("leaf capacity must be at least 1");
  if (policy.threshold && *policy.threshold <= 0.0)
    throw ConfigError("threshold must be positive");
}

int BallTreeCore::subtree_max_distance(RecordId from, const BallNode& node,
                                       DistanceCounter& counter) const {
  const std::u32string& fs = ds_->symbols(from);
  int best = 0;
  if (node.leaf) {
    for (const BallLeafEntry& en : node.entries)
      best = std::max(best, counted_edit_distance(fs, ds_->symbols(en.id), counter));
    return best;
  }
  for (const BallRoutingEntry& en : node.routing)
    best = std::max(best, subtree_max_distance(from, *en.child, counter));
  return best;
}

// Farthest-pair leaf split: the two records at maximal distance become the
// routing objects, everything else joins the closer one (ties to the first).
// Covering radii and leaf parent distances come out exact by construction.
// With a threshold set, new seeds are added greedily (worst offender first)
// until every group radius is within the threshold.
std::vector<BallRoutingEntry> BallTreeCore::split_leaf(
    std::vector<BallLeafEntry> entries, DistanceCounter& counter) const {
  const std::size_t k = entries.size();
  std::vector<std::vector<int>> dist(k, std::vector<int>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    const std::u32string& is = ds_->symbols(entries[i].id);
    for (std::size_t j = i + 1; j < k; ++j) {
      int d = counted_edit_distance(is, ds_->symbols(entries[j].id), counter);
      dist[i][j] = dist[j][i] = d;
    }
  }

  std::vector<std::size_t> seeds;
  {
    std::size_t a = 0, b = 1;
    int far = -1;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (dist[i][j] > far) {
          far = dist[i][j];
          a = i;
          b = j;
        }
    seeds = {a, b};
  }

  std::vector<std::size_t> owner(k, 0);
  auto assign_all = [&] {
    for (std::size_t t = 0; t < k; ++t) {
      std::size_t best = seeds[0];
      for (std::size_t s : seeds)
        if (dist[s][t] < dist[best][t]) best = s;
      owner[t] = best;
    }
  };
  assign_all();

  if (policy_.threshold) {
    const double limit = *policy_.threshold;
    for (;;) {
      std::size_t worst = kNone;
      int worst_d = -1;
      for (std::size_t t = 0; t < k; ++t) {
        int d = dist[owner[t]][t];
        if (static_cast<double>(d) <= limit) continue;
        if (d > worst_d ||
            (d == worst_d && entries[t].id < entries[worst].id)) {
          worst = t;
          worst_d = d;
        }
      }
      if (worst == kNone) break;
      seeds.push_back(worst);
      assign_all();
    }
  }

  std::vector<BallRoutingEntry> out;
  out.reserve(seeds.size());
  for (std::size_t s : seeds) {
    std::vector<BallLeafEntry> group;
    int radius = 0;
    for (std::size_t t = 0; t < k; ++t) {
      if (owner[t] != s) continue;
      group.push_back({entries[t].id, dist[s][t]});
      radius = std::max(radius, dist[s][t]);
    }
    BallRoutingEntry en;
    en.routing_id = entries[s].id;
    en.covering_radius = radius;
    en.parent_distance = -1;  // caller fills
    en.child = make_leaf(std::move(group));
    out.push_back(std::move(en));
  }
  return out;
}

// Farthest-pair split of an oversized routing-entry set. Entries follow the
// closer promoted object; halves still above the fanout split recursively.
// Promoted covering radii are recomputed exactly over the whole subtree.
std::vector<BallRoutingEntry> BallTreeCore::split_routing(
    std::vector<BallRoutingEntry> entries, DistanceCounter& counter) const {
  const std::size_t k = entries.size();
  std::vector<std::vector<int>> dist(k, std::vector<int>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    const std::u32string& is = ds_->symbols(entries[i].routing_id);
    for (std::size_t j = i + 1; j < k; ++j) {
      int d = counted_edit_distance(is, ds_->symbols(entries[j].routing_id), counter);
      dist[i][j] = dist[j][i] = d;
    }
  }

  std::size_t a = 0, b = 1;
  int far = -1;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (dist[i][j] > far) {
        far = dist[i][j];
        a = i;
        b = j;
      }

  RecordId routing_a = entries[a].routing_id;
  RecordId routing_b = entries[b].routing_id;
  std::vector<BallRoutingEntry> ga, gb;
  std::vector<int> da, db;  // distance of each group member to its seed
  for (std::size_t t = 0; t < k; ++t) {
    if (dist[a][t] <= dist[b][t]) {
      da.push_back(dist[a][t]);
      ga.push_back(std::move(entries[t]));
    } else {
      db.push_back(dist[b][t]);
      gb.push_back(std::move(entries[t]));
    }
  }

  auto pack = [&](RecordId routing, std::vector<BallRoutingEntry> group,
                  const std::vector<int>& seed_dist) {
    std::vector<BallRoutingEntry> packed;
    if (group.size() > static_cast<std::size_t>(policy_.fanout)) {
      packed = split_routing(std::move(group), counter);
    } else {
      for (std::size_t t = 0; t < group.size(); ++t)
        group[t].parent_distance = seed_dist[t];
      BallRoutingEntry en;
      en.routing_id = routing;
      en.parent_distance = -1;  // caller fills
      en.child = make_internal(std::move(group));
      en.covering_radius = subtree_max_distance(routing, *en.child, counter);
      packed.push_back(std::move(en));
    }
    return packed;
  };

  std::vector<BallRoutingEntry> out = pack(routing_a, std::move(ga), da);
  std::vector<BallRoutingEntry> side_b = pack(routing_b, std::move(gb), db);
  for (auto& en : side_b) out.push_back(std::move(en));
  return out;
}

std::vector<BallRoutingEntry> BallTreeCore::insert_below(
    BallNode& node, RecordId id, RecordId parent_routing,
    DistanceCounter& counter) {
  const std::u32string& xs = ds_->symbols(id);

  std::vector<int> dist(node.routing.size());
  for (std::size_t i = 0; i < node.routing.size(); ++i)
    dist[i] =
        counted_edit_distance(xs, ds_->symbols(node.routing[i].routing_id), counter);

  std::size_t best = 0;
  if (policy_.route_closest) {
    for (std::size_t i = 1; i < dist.size(); ++i)
      if (dist[i] < dist[best]) best = i;
  } else {
    // least covering-radius growth; ties to the closer object, then first
    auto growth = [&](std::size_t i) {
      return std::max(0, dist[i] - node.routing[i].covering_radius);
    };
    for (std::size_t i = 1; i < dist.size(); ++i) {
      int gi = growth(i), gb = growth(best);
      if (gi < gb || (gi == gb && dist[i] < dist[best])) best = i;
    }
  }

  auto fill_parent = [&](std::vector<BallRoutingEntry>& repl) {
    for (auto& en : repl)
      en.parent_distance =
          parent_routing == kNoRecord
              ? -1
              : counted_edit_distance(ds_->symbols(parent_routing),
                                      ds_->symbols(en.routing_id), counter);
  };
  auto splice = [&](std::vector<BallRoutingEntry> repl) {
    node.routing.erase(node.routing.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto& en : repl) node.routing.push_back(std::move(en));
  };

  BallRoutingEntry& chosen = node.routing[best];
  if (chosen.child->leaf) {
    if (policy_.threshold &&
        static_cast<double>(dist[best]) > *policy_.threshold) {
      // the record would stretch this leaf ball past the bound: re-partition
      // the leaf together with the new record
      std::vector<BallLeafEntry> group = std::move(chosen.child->entries);
      group.push_back({id, -1});
      auto repl = split_leaf(std::move(group), counter);
      fill_parent(repl);
      splice(std::move(repl));
    } else {
      chosen.covering_radius = std::max(chosen.covering_radius, dist[best]);
      chosen.child->entries.push_back({id, dist[best]});
      if (chosen.child->entries.size() >
          static_cast<std::size_t>(policy_.leaf_capacity)) {
        if (!policy_.propagate_splits) {
          // binary variant: the full leaf becomes an internal node in place,
          // the parent entry keeps its routing object and exact radius
          auto inner = split_leaf(std::move(chosen.child->entries), counter);
          for (auto& en : inner)
            en.parent_distance = counted_edit_distance(
                ds_->symbols(chosen.routing_id), ds_->symbols(en.routing_id),
                counter);
          chosen.child = make_internal(std::move(inner));
        } else {
          auto repl = split_leaf(std::move(chosen.child->entries), counter);
          fill_parent(repl);
          splice(std::move(repl));
        }
      }
    }
  } else {
    chosen.covering_radius = std::max(chosen.covering_radius, dist[best]);
    auto repl = insert_below(*chosen.child, id, chosen.routing_id, counter);
    if (!repl.empty()) {
      fill_parent(repl);
      splice(std::move(repl));
    }
  }

  if (node.routing.size() > static_cast<std::size_t>(policy_.fanout))
    return split_routing(std::move(node.routing), counter);
  return {};
}

void BallTreeCore::insert(RecordId id, DistanceCounter& counter) {
  if (!root_) {
    root_ = make_leaf({BallLeafEntry{id, -1}});
    return;
  }

  if (root_->leaf) {
    root_->entries.push_back({id, -1});
    if (root_->entries.size() > static_cast<std::size_t>(policy_.leaf_capacity)) {
      auto top = split_leaf(std::move(root_->entries), counter);
      while (top.size() > static_cast<std::size_t>(policy_.fanout))
        top = split_routing(std::move(top), counter);
      for (auto& en : top) en.parent_distance = -1;
      root_ = make_internal(std::move(top));
    }
    return;
  }

  auto repl = insert_below(*root_, id, kNoRecord, counter);
  if (!repl.empty()) {
    while (repl.size() > static_cast<std::size_t>(policy_.fanout))
      repl = split_routing(std::move(repl), counter);
    for (auto& en : repl) en.parent_distance = -1;
    root_ = make_internal(std::move(repl));
  }
}

void BallTreeCore::search_node(const BallNode& node, QueryContext& ctx,
                               int dist_q_parent) const {
  const int e = ctx.radius();

  if (node.leaf) {
    for (const BallLeafEntry& en : node.entries) {
      if (dist_q_parent >= 0 && en.dist_to_parent >= 0 &&
          std::abs(dist_q_parent - en.dist_to_parent) > e)
        continue;
      ctx.collect_if_match(en.id);
    }
    return;
  }

  for (const BallRoutingEntry& en : node.routing) {
    // parent-distance prescreen: the child ball cannot reach the query ball
    if (policy_.parent_prune && dist_q_parent >= 0 && en.parent_distance >= 0 &&
        std::abs(dist_q_parent - en.parent_distance) > en.covering_radius + e)
      continue;
    int d = ctx.distance_to(en.routing_id);
    if (d <= e) ctx.add_match(en.routing_id);
    // covering-radius test: the ball around the routing object intersects
    // the query ball
    if (d - e <= en.covering_radius) search_node(*en.child, ctx, d);
  }
}

void BallTreeCore::search(QueryContext& ctx) const {
  if (root_) search_node(*root_, ctx, -1);
}

}  // namespace detail

namespace {

void bulk_insert(detail::BallTreeCore& core, const Dataset& ds) {
  DistanceCounter counter;
  counter.memoize = false;
  for (RecordId id = 0; id < static_cast<RecordId>(ds.size()); ++id)
    core.insert(id, counter);
}

}  // namespace

BisectorTree::BisectorTree(const Dataset& ds, int leaf_capacity, bool build_now)
    : core_(ds, detail::BallPolicy{.route_closest = true,
                                   .propagate_splits = false,
                                   .parent_prune = false,
                                   .fanout = 2,
                                   .leaf_capacity = leaf_capacity,
                                   .threshold = std::nullopt}) {
  if (build_now) bulk_insert(core_, ds);
}

QueryResult BisectorTree::range_search(const RangeQuery& query,
                                       DistanceCounter& counter) const {
  QueryContext ctx(core_.dataset(), query, counter);
  core_.search(ctx);
  return ctx.finish();
}

MTree::MTree(const Dataset& ds, const MTreeParams& params, bool build_now)
    : params_(params),
      core_(ds, detail::BallPolicy{.route_closest = false,
                                   .propagate_splits = true,
                                   .parent_prune = true,
                                   .fanout = params.fanout,
                                   .leaf_capacity = params.leaf_capacity,
                                   .threshold = std::nullopt}) {
  if (build_now) bulk_insert(core_, ds);
}

QueryResult MTree::range_search(const RangeQuery& query,
                                DistanceCounter& counter) const {
  QueryContext ctx(core_.dataset(), query, counter);
  core_.search(ctx);
  return ctx.finish();
}

MtbTree::MtbTree(const Dataset& ds, const MtbParams& params, bool build_now)
    : params_(params),
      core_(ds, detail::BallPolicy{.route_closest = true,
                                   .propagate_splits = true,
                                   .parent_prune = true,
                                   .fanout = params.fanout,
                                   .leaf_capacity = params.leaf_capacity,
                                   .threshold = params.threshold}) {
  if (build_now) bulk_insert(core_, ds);
}

QueryResult MtbTree::range_search(const RangeQuery& query,
                                  DistanceCounter& counter) const {
  QueryContext ctx(core_.dataset(), query, counter);
  core_.search(ctx);
  return ctx.finish();
}

}  // namespace mib
