#include "mib/pivot_trees.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "mib/errors.hpp"
#include "mib/rng.hpp"

namespace mib {

namespace {

void check_bucket_size(int bucket_size) {
  if (bucket_size < 1) throw ConfigError("bucket size must be at least 1");
}

void check_nonempty(const Dataset& ds) {
  if (ds.empty()) throw ConfigError("cannot index an empty dataset");
}

std::vector<RecordId> all_ids(const Dataset& ds) {
  std::vector<RecordId> ids(ds.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<RecordId>(i);
  return ids;
}

// Children whose edge distance intersects [d-e, d+e]; edges are sorted.
template <class Fn>
void for_edges_in_window(const std::vector<std::pair<int, std::uint32_t>>& edges,
                         int d, int e, Fn&& fn) {
  auto it = std::lower_bound(edges.begin(), edges.end(),
                             std::make_pair(d - e, std::uint32_t{0}));
  for (; it != edges.end() && it->first <= d + e; ++it) fn(it->second);
}

}  // namespace

BkTree::BkTree(const Dataset& ds, std::uint64_t seed, int bucket_size)
    : ds_(&ds), bucket_size_(bucket_size) {
  check_bucket_size(bucket_size);
  check_nonempty(ds);
  Rng rng(sub_seed(seed, "bk"));
  root_ = build(all_ids(ds), rng);
}

std::uint32_t BkTree::build(std::vector<RecordId> subset, Rng& rng) {
  std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();

  if (subset.size() <= static_cast<std::size_t>(bucket_size_)) {
    nodes_[idx].bucket = std::move(subset);
    return idx;
  }

  std::size_t pick = static_cast<std::size_t>(uniform_below(rng, subset.size()));
  RecordId pivot = subset[pick];
  nodes_[idx].pivot = pivot;

  std::map<int, std::vector<RecordId>> groups;
  const std::u32string& ps = ds_->symbols(pivot);
  for (RecordId r : subset) {
    if (r == pivot) continue;
    groups[edit_distance(ps, ds_->symbols(r))].push_back(r);
  }
  for (auto& [d, group] : groups) {
    std::uint32_t child = build(std::move(group), rng);
    nodes_[idx].edges.emplace_back(d, child);
  }
  return idx;
}

QueryResult BkTree::range_search(const RangeQuery& query,
                                 DistanceCounter& counter) const {
  QueryContext ctx(*ds_, query, counter);
  const int e = ctx.radius();

  std::vector<std::uint32_t> stack = {root_};
  while (!stack.empty()) {
    const BkNode& node = nodes_[stack.back()];
    stack.pop_back();
    if (node.leaf()) {
      for (RecordId id : node.bucket) ctx.collect_if_match(id);
      continue;
    }
    int d = ctx.distance_to(node.pivot);
    if (d <= e) ctx.add_match(node.pivot);
    for_edges_in_window(node.edges, d, e,
                        [&](std::uint32_t child) { stack.push_back(child); });
  }
  return ctx.finish();
}

namespace {

// Shared builder for the fixed-pivot trees. Level pivots come from a seeded
// permutation of the whole dataset: by the time a subset's own first member
// becomes the level pivot it is guaranteed to split (its pivot sits at edge
// 0, everything else strictly above), so recursion depth never exceeds the
// dataset size. When an explicit height runs past the permutation the
// pivots repeat cyclically; each depth still has exactly one pivot.
struct FixedPivotBuilder {
  const Dataset* ds;
  int bucket_size;
  std::vector<RecordId> pivot_order;
  std::vector<FqNode> nodes;
  int deepest_pivot_level = -1;

  FixedPivotBuilder(const Dataset& d, int b, std::uint64_t seed, const char* stream)
      : ds(&d), bucket_size(b) {
    Rng rng(sub_seed(seed, stream));
    const std::uint32_t n = static_cast<std::uint32_t>(d.size());
    std::vector<std::uint32_t> perm = sample_ids(n, n, rng);

    // A level pivot keys the partition of every subset at its depth, so a
    // poor early pivot poisons the whole tree. Order the front of the pivot
    // schedule by distance spread: per level, score a few candidates by the
    // variance of their distances to a fresh sample and promote the best.
    // Rejected candidates stay eligible and the permutation tail keeps every
    // record on the schedule, which is what guarantees any subset splits.
    const std::size_t lead = std::min<std::size_t>(n, 64);
    const std::size_t cand_count = 8;
    const std::size_t sample_count = std::min<std::size_t>(n, 100);
    std::deque<std::uint32_t> remaining(perm.begin(), perm.end());
    while (pivot_order.size() < lead && !remaining.empty()) {
      std::size_t take = std::min(cand_count, remaining.size());
      std::vector<std::uint32_t> sample =
          sample_ids(n, static_cast<std::uint32_t>(sample_count), rng);
      std::size_t best = 0;
      double best_var = -1.0;
      for (std::size_t c = 0; c < take; ++c) {
        const std::u32string& cs = ds->symbols(remaining[c]);
        double sum = 0.0, sumsq = 0.0;
        for (std::uint32_t s : sample) {
          double dist = edit_distance(cs, ds->symbols(s));
          sum += dist;
          sumsq += dist * dist;
        }
        double k = static_cast<double>(sample.size());
        double mean = sum / k;
        double var = sumsq / k - mean * mean;
        if (var > best_var) {
          best_var = var;
          best = c;
        }
      }
      pivot_order.push_back(remaining[best]);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    pivot_order.insert(pivot_order.end(), remaining.begin(), remaining.end());
  }

  RecordId pivot_at(std::size_t depth) const {
    return pivot_order[depth % pivot_order.size()];
  }

  std::map<int, std::vector<RecordId>> partition(const std::vector<RecordId>& subset,
                                                 std::size_t depth) {
    deepest_pivot_level =
        std::max(deepest_pivot_level, static_cast<int>(depth));
    std::map<int, std::vector<RecordId>> groups;
    const std::u32string& ps = ds->symbols(pivot_at(depth));
    for (RecordId r : subset) {
      groups[edit_distance(ps, ds->symbols(r))].push_back(r);
    }
    return groups;
  }

  // Splitting stops when a subset fits the bucket.
  std::uint32_t build_bucketed(std::vector<RecordId> subset, std::size_t depth) {
    std::uint32_t idx = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    if (subset.size() <= static_cast<std::size_t>(bucket_size)) {
      nodes[idx].leaf = true;
      nodes[idx].bucket = std::move(subset);
      return idx;
    }
    auto groups = partition(subset, depth);
    for (auto& [d, group] : groups) {
      std::uint32_t child = build_bucketed(std::move(group), depth + 1);
      nodes[idx].edges.emplace_back(d, child);
    }
    return idx;
  }

  // Every leaf lands at exactly `height`, small subsets pass through.
  std::uint32_t build_fixed(std::vector<RecordId> subset, std::size_t depth,
                            std::size_t height) {
    std::uint32_t idx = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    if (depth == height) {
      nodes[idx].leaf = true;
      nodes[idx].bucket = std::move(subset);
      return idx;
    }
    auto groups = partition(subset, depth);
    for (auto& [d, group] : groups) {
      std::uint32_t child = build_fixed(std::move(group), depth + 1, height);
      nodes[idx].edges.emplace_back(d, child);
    }
    return idx;
  }

  // Depth the bucket-terminated recursion would reach, without node
  // construction.
  int natural_height(const std::vector<RecordId>& subset, std::size_t depth) {
    if (subset.size() <= static_cast<std::size_t>(bucket_size))
      return static_cast<int>(depth);
    auto groups = partition(subset, depth);
    int h = 0;
    for (auto& g : groups) h = std::max(h, natural_height(g.second, depth + 1));
    return h;
  }

  std::vector<RecordId> used_pivots() const {
    std::vector<RecordId> out;
    for (int i = 0; i <= deepest_pivot_level; ++i)
      out.push_back(pivot_at(static_cast<std::size_t>(i)));
    return out;
  }
};

void fixed_pivot_search(const std::vector<FqNode>& nodes,
                        const std::vector<RecordId>& level_pivots,
                        std::uint32_t root, QueryContext& ctx) {
  const int e = ctx.radius();
  std::vector<std::pair<std::uint32_t, std::size_t>> stack = {{root, 0}};
  while (!stack.empty()) {
    auto [idx, depth] = stack.back();
    stack.pop_back();
    const FqNode& node = nodes[idx];
    if (node.leaf) {
      for (RecordId id : node.bucket) ctx.collect_if_match(id);
      continue;
    }
    // the pivot is not reported here: it lives on in some bucket below
    int d = ctx.distance_to(level_pivots[depth]);
    for_edges_in_window(node.edges, d, e, [&](std::uint32_t child) {
      stack.emplace_back(child, depth + 1);
    });
  }
}

int max_depth_of(const std::vector<FqNode>& nodes, std::uint32_t root) {
  int deepest = 0;
  std::vector<std::pair<std::uint32_t, int>> stack = {{root, 0}};
  while (!stack.empty()) {
    auto [idx, depth] = stack.back();
    stack.pop_back();
    const FqNode& node = nodes[idx];
    if (node.leaf) {
      deepest = std::max(deepest, depth);
      continue;
    }
    for (const auto& edge : node.edges) stack.emplace_back(edge.second, depth + 1);
  }
  return deepest;
}

}  // namespace

FqTree::FqTree(const Dataset& ds, std::uint64_t seed, int bucket_size)
    : ds_(&ds), bucket_size_(bucket_size) {
  check_bucket_size(bucket_size);
  check_nonempty(ds);
  FixedPivotBuilder b(ds, bucket_size, seed, "fq");
  root_ = b.build_bucketed(all_ids(ds), 0);
  nodes_ = std::move(b.nodes);
  level_pivots_ = b.used_pivots();
}

int FqTree::max_leaf_depth() const { return max_depth_of(nodes_, root_); }

QueryResult FqTree::range_search(const RangeQuery& query,
                                 DistanceCounter& counter) const {
  QueryContext ctx(*ds_, query, counter);
  fixed_pivot_search(nodes_, level_pivots_, root_, ctx);
  return ctx.finish();
}

FhTree::FhTree(const Dataset& ds, std::uint64_t seed, int bucket_size,
               std::optional<int> height)
    : ds_(&ds), bucket_size_(bucket_size) {
  check_bucket_size(bucket_size);
  check_nonempty(ds);
  if (height && *height < 0) throw ConfigError("height must be non-negative");

  FixedPivotBuilder b(ds, bucket_size, seed, "fq");
  height_ = height ? *height : b.natural_height(all_ids(ds), 0);
  b.deepest_pivot_level = -1;  // only levels the real build touches count
  root_ = b.build_fixed(all_ids(ds), 0, static_cast<std::size_t>(height_));
  nodes_ = std::move(b.nodes);
  level_pivots_ = b.used_pivots();
}

QueryResult FhTree::range_search(const RangeQuery& query,
                                 DistanceCounter& counter) const {
  QueryContext ctx(*ds_, query, counter);
  fixed_pivot_search(nodes_, level_pivots_, root_, ctx);
  return ctx.finish();
}

}  // namespace mib
