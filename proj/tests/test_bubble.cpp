#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mib/mib.hpp"
#include "support.hpp"

using namespace mib;

namespace {

// Recompute every cached field of a cluster from scratch.
void check_cluster(const Dataset& ds, const BubbleCluster& c) {
  const std::size_t k = c.members.size();
  REQUIRE(k > 0);
  REQUIRE(c.dists.size() == k);
  REQUIRE(c.rowsums.size() == k);
  REQUIRE(c.clusteroid_pos < k);

  std::vector<std::uint64_t> rowsums(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    REQUIRE(c.dists[i].size() == k);
    CHECK(c.dists[i][i] == 0);
    for (std::size_t j = 0; j < k; ++j) {
      int d = edit_distance(ds.symbols(c.members[i]), ds.symbols(c.members[j]));
      CHECK(c.dists[i][j] == d);
      CHECK(c.dists[i][j] == c.dists[j][i]);
      rowsums[i] += static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
    }
    CHECK(c.rowsums[i] == rowsums[i]);
  }

  // clusteroid minimizes the rowsum; ties go to the lowest member id
  for (std::size_t i = 0; i < k; ++i) {
    CHECK(rowsums[c.clusteroid_pos] <= rowsums[i]);
    if (rowsums[i] == rowsums[c.clusteroid_pos])
      CHECK(c.members[c.clusteroid_pos] <= c.members[i]);
  }

  int radius = 0;
  for (std::size_t i = 0; i < k; ++i)
    radius = std::max(radius, c.dists[c.clusteroid_pos][i]);
  CHECK(c.radius_bound == radius);
}

void walk_cf(const CfNode& node, const std::vector<BubbleCluster>& clusters,
             int branching, int samples, std::vector<std::int32_t>& seen,
             std::uint32_t& count_out) {
  CHECK(!node.entries.empty());
  CHECK(node.entries.size() <= static_cast<std::size_t>(branching));
  std::uint32_t total = 0;
  for (const auto& entry : node.entries) {
    CHECK(!entry.samples.empty());
    CHECK(entry.samples.size() <= static_cast<std::size_t>(samples));
    if (node.leaf) {
      REQUIRE(entry.cluster >= 0);
      REQUIRE(static_cast<std::size_t>(entry.cluster) < clusters.size());
      seen.push_back(entry.cluster);
      const BubbleCluster& c = clusters[static_cast<std::size_t>(entry.cluster)];
      CHECK(entry.member_count == c.members.size());
      // samples are drawn from the cluster's members
      for (RecordId s : entry.samples)
        CHECK(std::find(c.members.begin(), c.members.end(), s) !=
              c.members.end());
      total += entry.member_count;
    } else {
      REQUIRE(entry.child != nullptr);
      std::uint32_t below = 0;
      walk_cf(*entry.child, clusters, branching, samples, seen, below);
      CHECK(entry.member_count == below);
      total += below;
    }
  }
  count_out = total;
}

}  // namespace

TEST_CASE("d2 distance matches the closed form on a worked example") {
  Dataset ds = Dataset::from_lines({"aaaa", "ab", "aaaaaaa"});
  int d01 = edit_distance(ds.symbols(0), ds.symbols(1));  // 3
  int d02 = edit_distance(ds.symbols(0), ds.symbols(2));  // 3
  CHECK(d01 == 3);
  CHECK(d02 == 3);
  DistanceCounter counter;
  double d2 = d2_distance(ds, {0}, {1, 2}, counter);
  CHECK(d2 == doctest::Approx(std::sqrt((double(d01) * d01 + double(d02) * d02) / 2.0)));
  CHECK(counter.primary_evals == 2);

  DistanceCounter c2;
  CHECK_THROWS_AS(d2_distance(ds, {}, {0}, c2), ConfigError);
}

TEST_CASE("bubble: clusters partition the dataset and caches are exact") {
  Dataset ds = testsup::random_dataset(400, 4, 1, 12, 901);
  BubbleParams params;
  params.threshold = 4.0;
  params.branching = 4;
  params.samples = 3;
  BubbleIndex index(ds, params);

  std::vector<RecordId> all;
  for (const auto& c : index.clusters()) {
    check_cluster(ds, c);
    all.insert(all.end(), c.members.begin(), c.members.end());
  }
  std::sort(all.begin(), all.end());
  REQUIRE(all.size() == ds.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    CHECK(all[i] == static_cast<RecordId>(i));

  // the feature tree references every cluster exactly once and its
  // member counts add up level by level
  REQUIRE(index.root() != nullptr);
  std::vector<std::int32_t> seen;
  std::uint32_t total = 0;
  walk_cf(*index.root(), index.clusters(), params.branching, params.samples,
          seen, total);
  std::sort(seen.begin(), seen.end());
  REQUIRE(seen.size() == index.clusters().size());
  for (std::size_t i = 0; i < seen.size(); ++i)
    CHECK(seen[i] == static_cast<std::int32_t>(i));
  CHECK(total == ds.size());
}

TEST_CASE("bubble: admission is strict, the threshold itself starts a new cluster") {
  // aa vs ab: distance 1; aa vs dddd: distance 4
  Dataset ds = Dataset::from_lines({"aa", "ab", "dddd"});
  BubbleParams params;
  params.threshold = 1.0;  // d = 1 is not < 1, so every record stays alone
  BubbleIndex strict(ds, params);
  CHECK(strict.clusters().size() == 3);

  params.threshold = 1.5;  // now ab joins aa, dddd stays apart
  BubbleIndex loose(ds, params);
  CHECK(loose.clusters().size() == 2);
  CHECK(loose.clusters()[0].members == std::vector<RecordId>{0, 1});
}

TEST_CASE("bubble: search equals the linear scan") {
  for (double threshold : {2.0, 5.0}) {
    CAPTURE(threshold);
    Dataset ds = testsup::random_dataset(350, 4, 1, 10, 902);
    BubbleParams params;
    params.threshold = threshold;
    params.branching = 5;
    params.samples = 4;
    BubbleIndex index(ds, params);
    testsup::check_matches_oracle(index, ds, 902, 5, 5);
  }
}

TEST_CASE("bubble: search evaluates every clusteroid but skips far clusters") {
  // dense space so clusters grow well past singletons
  Dataset ds = testsup::random_dataset(300, 4, 1, 6, 903);
  BubbleParams params;
  params.threshold = 5.0;
  BubbleIndex index(ds, params);
  const std::size_t n_clusters = index.clusters().size();
  REQUIRE(n_clusters > 1);
  REQUIRE(n_clusters < ds.size() / 3);

  DistanceCounter counter;
  auto res = index.range_search(RangeQuery{ds.text(0), 0}, counter);
  CHECK(res.matches == std::vector<RecordId>{0});
  // one evaluation per clusteroid plus the prefilter survivors
  CHECK(res.primary_evals >= n_clusters);
  CHECK(res.primary_evals < ds.size());
}

TEST_CASE("bubble: incremental inserts keep the structure valid") {
  Dataset ds = testsup::random_dataset(200, 4, 1, 10, 904);
  BubbleParams params;
  params.threshold = 3.0;
  params.branching = 3;
  params.samples = 2;
  BubbleIndex index(ds, params, /*build_now=*/false);
  CHECK(index.clusters().empty());

  DistanceCounter counter;
  counter.memoize = false;
  for (std::size_t i = 0; i < ds.size(); ++i)
    index.insert(static_cast<RecordId>(i), counter);

  for (const auto& c : index.clusters()) check_cluster(ds, c);
  std::vector<std::int32_t> seen;
  std::uint32_t total = 0;
  walk_cf(*index.root(), index.clusters(), params.branching, params.samples,
          seen, total);
  CHECK(total == ds.size());
  testsup::check_matches_oracle(index, ds, 904, 4, 4);
}

TEST_CASE("bubble rejects bad parameters") {
  Dataset ds = Dataset::from_lines({"a", "b"});
  BubbleParams params;
  params.threshold = 0.0;
  CHECK_THROWS_AS(BubbleIndex(ds, params), ConfigError);
  params.threshold = 1.0;
  params.branching = 1;
  CHECK_THROWS_AS(BubbleIndex(ds, params), ConfigError);
  params.branching = 2;
  params.samples = 0;
  CHECK_THROWS_AS(BubbleIndex(ds, params), ConfigError);
  Dataset empty;
  CHECK_THROWS_AS(BubbleIndex(empty, BubbleParams{}), ConfigError);
}
