#include "mib/vp_trees.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mib/errors.hpp"
#include "mib/rng.hpp"

namespace mib {

VpTree::VpTree(const Dataset& ds, std::uint64_t seed, int candidates,
               int sample_size)
    : ds_(&ds), candidates_(candidates), sample_size_(sample_size) {
  if (ds.empty()) throw ConfigError("cannot index an empty dataset");
  if (candidates < 1 || sample_size < 1)
    throw ConfigError("vp candidate and sample counts must be at least 1");

  Rng rng(sub_seed(seed, "vp"));
  std::vector<RecordId> subset(ds.size());
  for (std::size_t i = 0; i < subset.size(); ++i)
    subset[i] = static_cast<RecordId>(i);
  std::vector<std::vector<int>> path(ds.size());
  root_ = build(subset, path, rng);
}

RecordId VpTree::best_spread(const std::vector<RecordId>& subset, Rng& rng) const {
  const std::uint32_t n = static_cast<std::uint32_t>(subset.size());
  std::vector<std::uint32_t> cand = sample_ids(
      n, std::min<std::uint32_t>(static_cast<std::uint32_t>(candidates_), n), rng);

  RecordId best = subset[cand[0]];
  double best_var = -1.0;
  for (std::uint32_t ci : cand) {
    RecordId c = subset[ci];
    std::vector<std::uint32_t> targets = sample_ids(
        n, std::min<std::uint32_t>(static_cast<std::uint32_t>(sample_size_), n),
        rng);
    const std::u32string& cs = ds_->symbols(c);
    double sum = 0.0, sumsq = 0.0;
    for (std::uint32_t ti : targets) {
      double d = edit_distance(cs, ds_->symbols(subset[ti]));
      sum += d;
      sumsq += d * d;
    }
    double k = static_cast<double>(targets.size());
    double mean = sum / k;
    double var = sumsq / k - mean * mean;
    if (var > best_var) {
      best_var = var;
      best = c;
    }
  }
  return best;
}

std::int32_t VpTree::build(std::vector<RecordId>& subset,
                           std::vector<std::vector<int>>& path, Rng& rng) {
  if (subset.empty()) return -1;

  std::int32_t idx = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();

  if (subset.size() == 1) {
    VpLeafEntry entry;
    entry.id = subset[0];
    entry.ancestor_dists = std::move(path[subset[0]]);
    nodes_[idx].entry = std::move(entry);
    return idx;
  }

  RecordId vantage = best_spread(subset, rng);
  nodes_[idx].vantage = vantage;

  const std::u32string& vs = ds_->symbols(vantage);
  std::vector<std::pair<int, RecordId>> rest;
  rest.reserve(subset.size() - 1);
  for (RecordId r : subset) {
    if (r == vantage) continue;
    int d = edit_distance(vs, ds_->symbols(r));
    path[r].push_back(d);
    rest.emplace_back(d, r);
  }

  std::vector<int> dists;
  dists.reserve(rest.size());
  for (const auto& [d, r] : rest) dists.push_back(d);
  std::sort(dists.begin(), dists.end());
  int median = dists[(dists.size() - 1) / 2];  // lower median
  nodes_[idx].median = median;

  std::vector<RecordId> left, right;
  int llo = 0, lhi = 0, rlo = 0, rhi = 0;
  bool lfirst = true, rfirst = true;
  for (const auto& [d, r] : rest) {
    if (d <= median) {
      left.push_back(r);
      llo = lfirst ? d : std::min(llo, d);
      lhi = lfirst ? d : std::max(lhi, d);
      lfirst = false;
    } else {
      right.push_back(r);
      rlo = rfirst ? d : std::min(rlo, d);
      rhi = rfirst ? d : std::max(rhi, d);
      rfirst = false;
    }
  }
  nodes_[idx].left_lo = llo;
  nodes_[idx].left_hi = lhi;
  nodes_[idx].right_lo = rlo;
  nodes_[idx].right_hi = rhi;

  std::int32_t l = build(left, path, rng);
  std::int32_t r = build(right, path, rng);
  nodes_[idx].left = l;
  nodes_[idx].right = r;
  return idx;
}

void VpTree::search(std::int32_t idx, QueryContext& ctx,
                    std::vector<int>& qdists) const {
  const VpNode& node = nodes_[idx];
  const int e = ctx.radius();

  if (node.leaf()) {
    const VpLeafEntry& entry = *node.entry;
    // qdists holds the query's distance to every ancestor vantage point of
    // this leaf, in the same root-first order as the cached entry distances
    for (std::size_t t = 0; t < entry.ancestor_dists.size(); ++t) {
      if (std::abs(qdists[t] - entry.ancestor_dists[t]) > e) return;
    }
    ctx.collect_if_match(entry.id);
    return;
  }

  int d = ctx.distance_to(node.vantage);
  if (d <= e) ctx.add_match(node.vantage);

  qdists.push_back(d);
  if (node.left >= 0 && d - e <= node.left_hi && d + e >= node.left_lo)
    search(node.left, ctx, qdists);
  if (node.right >= 0 && d + e >= node.right_lo && d - e <= node.right_hi)
    search(node.right, ctx, qdists);
  qdists.pop_back();
}

QueryResult VpTree::range_search(const RangeQuery& query,
                                 DistanceCounter& counter) const {
  QueryContext ctx(*ds_, query, counter);
  std::vector<int> qdists;
  if (root_ >= 0) search(root_, ctx, qdists);
  return ctx.finish();
}

namespace {

std::size_t int_pow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

MvpTree::MvpTree(const Dataset& ds, std::uint64_t seed, const MvpParams& params)
    : ds_(&ds), params_(params) {
  if (ds.empty()) throw ConfigError("cannot index an empty dataset");
  if (params.vantage_count < 1 || params.partitions < 2 ||
      params.path_length < 0 || params.leaf_capacity < 1)
    throw ConfigError("invalid mvp parameters");
  if (int_pow(static_cast<std::size_t>(params.partitions), params.vantage_count) >
      (std::size_t{1} << 20))
    throw ConfigError("mvp fan-out too large");

  Rng rng(sub_seed(seed, "mvp"));
  std::vector<RecordId> subset(ds.size());
  for (std::size_t i = 0; i < subset.size(); ++i)
    subset[i] = static_cast<RecordId>(i);
  std::vector<std::vector<int>> path(ds.size());
  root_ = build(subset, path, rng);
}

std::int32_t MvpTree::build(std::vector<RecordId>& subset,
                            std::vector<std::vector<int>>& path, Rng& rng) {
  if (subset.empty()) return -1;

  const int m = params_.partitions;
  const int v = params_.vantage_count;
  const int p = params_.path_length;

  std::int32_t idx = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();

  if (subset.size() <= static_cast<std::size_t>(params_.leaf_capacity)) {
    MvpNode& node = nodes_[idx];
    node.leaf = true;
    node.entries.reserve(subset.size());
    for (RecordId r : subset) {
      MvpLeafEntry entry;
      entry.id = r;
      const std::vector<int>& full = path[r];
      std::size_t keep = std::min<std::size_t>(full.size(), static_cast<std::size_t>(p));
      entry.path_dists.reserve(keep);
      for (std::size_t t = 0; t < keep; ++t)
        entry.path_dists.push_back(full[full.size() - 1 - t]);  // deepest first
      node.entries.push_back(std::move(entry));
    }
    return idx;
  }

  // cells[c] lists the records of pre-split cell c; last_dist[r] is the
  // distance from r to the most recent vantage point
  std::vector<std::vector<RecordId>> cells(1);
  cells[0] = subset;
  std::vector<int> last_dist(ds_->size(), 0);

  std::vector<RecordId> vantages;
  std::vector<std::vector<std::vector<int>>> cutoffs;

  for (int j = 0; j < v; ++j) {
    // pick the vantage point
    RecordId vantage = kNoRecord;
    if (j == 0) {
      std::size_t total = 0;
      for (const auto& cell : cells) total += cell.size();
      if (total == 0) break;
      std::size_t pick = static_cast<std::size_t>(uniform_below(rng, total));
      for (auto& cell : cells) {
        if (pick < cell.size()) {
          vantage = cell[pick];
          cell.erase(cell.begin() + static_cast<std::ptrdiff_t>(pick));
          break;
        }
        pick -= cell.size();
      }
    } else {
      // farthest from the previous vantage point, preferring records that
      // fell outside the leftmost partitions of the previous split; ties go
      // to the lowest id
      RecordId best = kNoRecord;
      int best_d = -1;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c % static_cast<std::size_t>(m) == 0) continue;
        for (RecordId r : cells[c]) {
          if (last_dist[r] > best_d || (last_dist[r] == best_d && r < best)) {
            best = r;
            best_d = last_dist[r];
          }
        }
      }
      if (best == kNoRecord) {
        for (const auto& cell : cells) {
          for (RecordId r : cell) {
            if (last_dist[r] > best_d || (last_dist[r] == best_d && r < best)) {
              best = r;
              best_d = last_dist[r];
            }
          }
        }
      }
      if (best == kNoRecord) break;  // no records left to pick
      vantage = best;
      for (auto& cell : cells) {
        auto it = std::find(cell.begin(), cell.end(), vantage);
        if (it != cell.end()) {
          cell.erase(it);
          break;
        }
      }
    }
    vantages.push_back(vantage);

    // split every cell into m bands by distance to the vantage point
    const std::u32string& vsym = ds_->symbols(vantage);
    std::vector<std::vector<RecordId>> next(cells.size() * static_cast<std::size_t>(m));
    std::vector<std::vector<int>> level_cutoffs(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::vector<std::pair<int, RecordId>> scored;
      scored.reserve(cells[c].size());
      for (RecordId r : cells[c]) {
        int d = edit_distance(vsym, ds_->symbols(r));
        path[r].push_back(d);
        last_dist[r] = d;
        scored.emplace_back(d, r);
      }
      std::sort(scored.begin(), scored.end());

      std::vector<int>& cuts = level_cutoffs[c];
      cuts.resize(static_cast<std::size_t>(m - 1));
      const std::size_t sz = scored.size();
      for (int k = 1; k < m; ++k) {
        std::size_t boundary = sz * static_cast<std::size_t>(k) /
                               static_cast<std::size_t>(m);
        // an empty band keeps a cutoff below every distance
        cuts[static_cast<std::size_t>(k - 1)] =
            boundary == 0 ? -1 : scored[boundary - 1].first;
      }
      for (const auto& [d, r] : scored) {
        int band = m - 1;
        for (int k = 0; k < m - 1; ++k) {
          if (d <= cuts[static_cast<std::size_t>(k)]) {
            band = k;
            break;
          }
        }
        next[c * static_cast<std::size_t>(m) + static_cast<std::size_t>(band)]
            .push_back(r);
      }
    }
    cutoffs.push_back(std::move(level_cutoffs));
    cells = std::move(next);
  }

  MvpNode& placed = nodes_[idx];
  placed.vantages = std::move(vantages);
  placed.cutoffs = std::move(cutoffs);
  placed.children.assign(cells.size(), -1);

  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::int32_t child = build(cells[c], path, rng);
    // nodes_ may have grown; re-resolve the node reference by index
    nodes_[idx].children[c] = child;
  }
  return idx;
}

void MvpTree::search(std::int32_t idx, QueryContext& ctx,
                     std::vector<int>& qpath) const {
  const MvpNode& node = nodes_[idx];
  const int e = ctx.radius();

  if (node.leaf) {
    for (const MvpLeafEntry& entry : node.entries) {
      bool rejected = false;
      for (std::size_t t = 0; t < entry.path_dists.size(); ++t) {
        // entry distances are deepest-first; the query path is root-first
        int qd = qpath[qpath.size() - 1 - t];
        if (std::abs(qd - entry.path_dists[t]) > e) {
          rejected = true;
          break;
        }
      }
      if (!rejected) ctx.collect_if_match(entry.id);
    }
    return;
  }

  const int m = params_.partitions;
  const std::size_t v_used = node.vantages.size();

  std::vector<int> vdists(v_used);
  for (std::size_t j = 0; j < v_used; ++j) {
    int d = ctx.distance_to(node.vantages[j]);
    if (d <= e) ctx.add_match(node.vantages[j]);
    vdists[j] = d;
  }
  for (int d : vdists) qpath.push_back(d);

  // walk the band lattice: a band k of a cell survives when the query ball
  // can reach it, i.e. d - e <= upper cutoff (except the last band) and
  // d + e >= lower cutoff (except the first band)
  std::vector<std::pair<std::size_t, std::size_t>> frontier = {{0, 0}};  // (level, cell)
  std::vector<std::size_t> reached;
  while (!frontier.empty()) {
    auto [j, cell] = frontier.back();
    frontier.pop_back();
    if (j == v_used) {
      reached.push_back(cell);
      continue;
    }
    const std::vector<int>& cuts = node.cutoffs[j][cell];
    const int d = vdists[j];
    for (int k = 0; k < m; ++k) {
      bool upper_ok = (k == m - 1) || (d - e <= cuts[static_cast<std::size_t>(k)]);
      bool lower_ok = (k == 0) || (d + e >= cuts[static_cast<std::size_t>(k - 1)]);
      if (upper_ok && lower_ok)
        frontier.emplace_back(j + 1, cell * static_cast<std::size_t>(m) +
                                         static_cast<std::size_t>(k));
    }
  }
  for (std::size_t cell : reached) {
    std::int32_t child = node.children[cell];
    if (child >= 0) search(child, ctx, qpath);
  }

  qpath.resize(qpath.size() - v_used);
}

QueryResult MvpTree::range_search(const RangeQuery& query,
                                  DistanceCounter& counter) const {
  QueryContext ctx(*ds_, query, counter);
  std::vector<int> qpath;
  if (root_ >= 0) search(root_, ctx, qpath);
  return ctx.finish();
}

}  // namespace mib
