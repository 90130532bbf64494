#include "mib/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "mib/errors.hpp"

namespace mib {

double d2_distance(const Dataset& ds, const std::vector<RecordId>& a,
                   const std::vector<RecordId>& b, DistanceCounter& counter) {
  if (a.empty() || b.empty()) throw ConfigError("d2 over an empty sample set");
  std::uint64_t sumsq = 0;
  for (RecordId x : a) {
    const std::u32string& xs = ds.symbols(x);
    for (RecordId y : b) {
      std::uint64_t d =
          static_cast<std::uint64_t>(counted_edit_distance(xs, ds.symbols(y), counter));
      sumsq += d * d;
    }
  }
  return std::sqrt(static_cast<double>(sumsq) /
                   (static_cast<double>(a.size()) * static_cast<double>(b.size())));
}

BubbleIndex::BubbleIndex(const Dataset& ds, const BubbleParams& params,
                         bool build_now)
    : ds_(&ds), params_(params) {
  if (ds.empty()) throw ConfigError("cannot index an empty dataset");
  if (params.threshold <= 0.0) throw ConfigError("threshold must be positive");
  if (params.branching < 2) throw ConfigError("branching must be at least 2");
  if (params.samples < 1) throw ConfigError("sample count must be at least 1");
  if (build_now) {
    DistanceCounter counter;
    counter.memoize = false;
    for (RecordId id = 0; id < static_cast<RecordId>(ds.size()); ++id)
      insert(id, counter);
  }
}

// Adds a member. The pairwise matrix grows by one row and column; rowsums
// update incrementally; the clusteroid is re-picked as the member with the
// least sum of squared distances to its co-members (ties to the lowest id).
void BubbleIndex::join_cluster(std::int32_t ci, RecordId id,
                               int dist_to_clusteroid, DistanceCounter& counter) {
  BubbleCluster& cl = clusters_[static_cast<std::size_t>(ci)];
  const std::size_t k = cl.members.size();
  const std::u32string& xs = ds_->symbols(id);

  std::vector<int> row(k + 1, 0);
  std::uint64_t rowsum_x = 0;
  for (std::size_t i = 0; i < k; ++i) {
    int d = i == cl.clusteroid_pos
                ? dist_to_clusteroid
                : counted_edit_distance(xs, ds_->symbols(cl.members[i]), counter);
    row[i] = d;
    cl.dists[i].push_back(d);
    std::uint64_t sq = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
    cl.rowsums[i] += sq;
    rowsum_x += sq;
  }
  cl.members.push_back(id);
  cl.rowsums.push_back(rowsum_x);
  cl.dists.push_back(std::move(row));

  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i < cl.members.size(); ++i) {
    if (cl.rowsums[i] < cl.rowsums[best] ||
        (cl.rowsums[i] == cl.rowsums[best] && cl.members[i] < cl.members[best]))
      best = i;
  }
  cl.clusteroid_pos = best;

  int bound = 0;
  for (std::size_t i = 0; i < cl.members.size(); ++i)
    bound = std::max(bound, cl.dists[i][best]);
  cl.radius_bound = bound;
}

// Leaf entry samples are the cluster members closest to the clusteroid;
// internal entry samples merge the children's samples round-robin. Both are
// capped at params.samples and use only cached distances.
void BubbleIndex::refresh_entry(CfEntry& entry) const {
  const std::size_t cap = static_cast<std::size_t>(params_.samples);
  if (entry.cluster >= 0) {
    const BubbleCluster& cl = clusters_[static_cast<std::size_t>(entry.cluster)];
    std::vector<std::pair<int, RecordId>> order;
    order.reserve(cl.members.size());
    for (std::size_t i = 0; i < cl.members.size(); ++i)
      order.emplace_back(cl.dists[i][cl.clusteroid_pos], cl.members[i]);
    std::sort(order.begin(), order.end());
    entry.samples.clear();
    for (std::size_t i = 0; i < order.size() && i < cap; ++i)
      entry.samples.push_back(order[i].second);
    entry.member_count = static_cast<std::uint32_t>(cl.members.size());
    return;
  }

  const CfNode& child = *entry.child;
  entry.samples.clear();
  entry.member_count = 0;
  for (const CfEntry& sub : child.entries) entry.member_count += sub.member_count;
  for (std::size_t pos = 0; entry.samples.size() < cap; ++pos) {
    bool any = false;
    for (const CfEntry& sub : child.entries) {
      if (pos < sub.samples.size()) {
        any = true;
        entry.samples.push_back(sub.samples[pos]);
        if (entry.samples.size() >= cap) break;
      }
    }
    if (!any) break;
  }
}

// Farthest-pair split. Leaf entries measure by clusteroid distance,
// internal entries by d2 over their samples; the remainder joins the closer
// seed, ties to the first.
std::vector<CfEntry> BubbleIndex::split_node(CfNode& node, DistanceCounter& counter) {
  const std::size_t k = node.entries.size();
  std::vector<std::vector<double>> dist(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double d;
      if (node.leaf) {
        RecordId a = clusters_[static_cast<std::size_t>(node.entries[i].cluster)].clusteroid();
        RecordId b = clusters_[static_cast<std::size_t>(node.entries[j].cluster)].clusteroid();
        d = counted_edit_distance(ds_->symbols(a), ds_->symbols(b), counter);
      } else {
        d = d2_distance(*ds_, node.entries[i].samples, node.entries[j].samples,
                        counter);
      }
      dist[i][j] = dist[j][i] = d;
    }
  }

  std::size_t a = 0, b = 1;
  double far = -1.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (dist[i][j] > far) {
        far = dist[i][j];
        a = i;
        b = j;
      }

  auto left = std::make_unique<CfNode>();
  auto right = std::make_unique<CfNode>();
  left->leaf = right->leaf = node.leaf;
  for (std::size_t t = 0; t < k; ++t) {
    if (dist[a][t] <= dist[b][t])
      left->entries.push_back(std::move(node.entries[t]));
    else
      right->entries.push_back(std::move(node.entries[t]));
  }

  std::vector<CfEntry> out(2);
  out[0].child = std::move(left);
  out[1].child = std::move(right);
  refresh_entry(out[0]);
  refresh_entry(out[1]);
  return out;
}

std::vector<CfEntry> BubbleIndex::insert_below(CfNode& node, RecordId id,
                                               DistanceCounter& counter) {
  if (node.leaf) {
    // closest clusteroid; ties to the lower cluster index
    std::int32_t best_cluster = -1;
    int best_d = std::numeric_limits<int>::max();
    const std::u32string& xs = ds_->symbols(id);
    for (const CfEntry& entry : node.entries) {
      const BubbleCluster& cl = clusters_[static_cast<std::size_t>(entry.cluster)];
      int d = counted_edit_distance(xs, ds_->symbols(cl.clusteroid()), counter);
      if (d < best_d || (d == best_d && entry.cluster < best_cluster)) {
        best_d = d;
        best_cluster = entry.cluster;
      }
    }

    if (static_cast<double>(best_d) < params_.threshold) {
      join_cluster(best_cluster, id, best_d, counter);
      for (CfEntry& entry : node.entries)
        if (entry.cluster == best_cluster) refresh_entry(entry);
    } else {
      BubbleCluster cl;
      cl.members = {id};
      cl.dists = {{0}};
      cl.rowsums = {0};
      cl.clusteroid_pos = 0;
      cl.radius_bound = 0;
      clusters_.push_back(std::move(cl));
      CfEntry entry;
      entry.cluster = static_cast<std::int32_t>(clusters_.size() - 1);
      entry.samples = {id};
      entry.member_count = 1;
      node.entries.push_back(std::move(entry));
    }

    if (node.entries.size() > static_cast<std::size_t>(params_.branching))
      return split_node(node, counter);
    return {};
  }

  // descend where the average inter-set distance to the entry samples is
  // least; ties to the first entry
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  std::vector<RecordId> probe = {id};
  for (std::size_t i = 0; i < node.entries.size(); ++i) {
    double d = d2_distance(*ds_, probe, node.entries[i].samples, counter);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }

  auto repl = insert_below(*node.entries[best].child, id, counter);
  if (repl.empty()) {
    refresh_entry(node.entries[best]);
    return {};
  }
  node.entries.erase(node.entries.begin() + static_cast<std::ptrdiff_t>(best));
  for (auto& entry : repl) node.entries.push_back(std::move(entry));
  if (node.entries.size() > static_cast<std::size_t>(params_.branching))
    return split_node(node, counter);
  return {};
}

void BubbleIndex::insert(RecordId id, DistanceCounter& counter) {
  if (!root_) {
    BubbleCluster cl;
    cl.members = {id};
    cl.dists = {{0}};
    cl.rowsums = {0};
    clusters_.push_back(std::move(cl));

    root_ = std::make_unique<CfNode>();
    root_->leaf = true;
    CfEntry entry;
    entry.cluster = 0;
    entry.samples = {id};
    entry.member_count = 1;
    root_->entries.push_back(std::move(entry));
    return;
  }

  auto repl = insert_below(*root_, id, counter);
  if (!repl.empty()) {
    auto nr = std::make_unique<CfNode>();
    nr->leaf = false;
    nr->entries = std::move(repl);
    root_ = std::move(nr);
  }
}

QueryResult BubbleIndex::range_search(const RangeQuery& query,
                                      DistanceCounter& counter) const {
  QueryContext ctx(*ds_, query, counter);
  const int e = ctx.radius();

  for (const BubbleCluster& cl : clusters_) {
    int d = ctx.distance_to(cl.clusteroid());
    if (d <= e) ctx.add_match(cl.clusteroid());
    // the whole cluster sits within radius_bound of the clusteroid
    if (prune_subset(d, cl.radius_bound, e)) continue;
    for (std::size_t i = 0; i < cl.members.size(); ++i) {
      if (i == cl.clusteroid_pos) continue;
      // cached member-to-clusteroid distance rules the member out cheaply
      if (std::abs(d - cl.dists[i][cl.clusteroid_pos]) > e) continue;
      ctx.collect_if_match(cl.members[i]);
    }
  }
  return ctx.finish();
}

}  // namespace mib
