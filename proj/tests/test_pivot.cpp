#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "mib/mib.hpp"
#include "support.hpp"

using namespace mib;

namespace {

// Every record stored in the subtree rooted at `idx`: bucket contents plus
// the pivots of internal nodes.
void collect_bk(const BkTree& tree, std::uint32_t idx, std::vector<RecordId>& out) {
  const BkNode& node = tree.nodes()[idx];
  if (node.leaf()) {
    out.insert(out.end(), node.bucket.begin(), node.bucket.end());
    return;
  }
  out.push_back(node.pivot);
  for (const auto& [d, child] : node.edges) collect_bk(tree, child, out);
}

void collect_fq(const std::vector<FqNode>& nodes, std::uint32_t idx,
                std::vector<RecordId>& out) {
  const FqNode& node = nodes[idx];
  if (node.leaf) {
    out.insert(out.end(), node.bucket.begin(), node.bucket.end());
    return;
  }
  for (const auto& [d, child] : node.edges) collect_fq(nodes, child, out);
}

void check_partition(std::vector<RecordId> got, std::size_t n) {
  std::sort(got.begin(), got.end());
  REQUIRE(got.size() == n);
  for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == static_cast<RecordId>(i));
}

}  // namespace

TEST_CASE("bk tree: every record once, edges exact, buckets bounded") {
  Dataset ds = testsup::random_dataset(600, 4, 1, 12, 101);
  BkTree tree(ds, 7, /*bucket_size=*/8);

  std::vector<RecordId> all;
  collect_bk(tree, 0, all);
  check_partition(all, ds.size());

  for (const BkNode& node : tree.nodes()) {
    if (node.leaf()) {
      CHECK(node.bucket.size() <= 8);
      CHECK(node.edges.empty());
      continue;
    }
    CHECK(node.bucket.empty());
    CHECK(!node.edges.empty());
    int prev = -1;
    for (const auto& [d, child] : node.edges) {
      CHECK(d > prev);  // ascending, distinct
      prev = d;
      // edge label equals the exact pivot distance of everything below
      std::vector<RecordId> below;
      collect_bk(tree, child, below);
      CHECK(!below.empty());
      for (RecordId r : below) {
        CHECK(edit_distance(ds.symbols(node.pivot), ds.symbols(r)) == d);
      }
    }
  }
}

TEST_CASE("bk tree: search equals the linear scan") {
  for (std::uint64_t seed : {1ULL, 2ULL}) {
    Dataset ds = testsup::random_dataset(400, 4, 1, 10, 200 + seed);
    BkTree tree(ds, seed, /*bucket_size=*/4);
    testsup::check_matches_oracle(tree, ds, seed);
  }
}

TEST_CASE("bk tree: a single-record dataset is one bucket") {
  Dataset ds = Dataset::from_lines({"only"});
  BkTree tree(ds, 1, 512);
  CHECK(tree.root().leaf());
  DistanceCounter counter;
  auto res = tree.range_search(RangeQuery{"only", 0}, counter);
  CHECK(res.matches == std::vector<RecordId>{0});
}

TEST_CASE("bk tree: radius zero visits one path") {
  Dataset ds = testsup::random_dataset(500, 26, 3, 10, 77);
  BkTree tree(ds, 3, /*bucket_size=*/1);
  DistanceCounter counter;
  auto res = tree.range_search(RangeQuery{ds.text(11), 0}, counter);
  CHECK(res.matches == std::vector<RecordId>{11});
  // with distinct edge labels, e=0 follows at most one edge per level
  CHECK(counter.primary_evals < ds.size() / 4);
}

TEST_CASE("fq tree: one pivot per level, partitions exact, buckets bounded") {
  Dataset ds = testsup::random_dataset(500, 4, 1, 12, 303);
  FqTree tree(ds, 13, /*bucket_size=*/8);

  std::vector<RecordId> all;
  collect_fq(tree.nodes(), 0, all);
  check_partition(all, ds.size());

  // walk with explicit depth and verify each edge against the level pivot
  struct Frame {
    std::uint32_t idx;
    std::size_t depth;
  };
  std::vector<Frame> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [idx, depth] = stack.back();
    stack.pop_back();
    const FqNode& node = tree.nodes()[idx];
    if (node.leaf) {
      CHECK(node.bucket.size() <= 8);
      continue;
    }
    REQUIRE(depth < tree.level_pivots().size());
    RecordId pivot = tree.level_pivots()[depth];
    int prev = -1;
    for (const auto& [d, child] : node.edges) {
      CHECK(d > prev);
      prev = d;
      std::vector<RecordId> below;
      collect_fq(tree.nodes(), child, below);
      for (RecordId r : below)
        CHECK(edit_distance(ds.symbols(pivot), ds.symbols(r)) == d);
      stack.push_back({child, depth + 1});
    }
  }
}

TEST_CASE("fq tree: search equals the linear scan") {
  for (std::uint64_t seed : {3ULL, 4ULL}) {
    Dataset ds = testsup::random_dataset(400, 4, 1, 10, 400 + seed);
    FqTree tree(ds, seed, /*bucket_size=*/4);
    testsup::check_matches_oracle(tree, ds, seed);
  }
}

TEST_CASE("fq tree: the level pivot costs at most one evaluation per query") {
  // tiny buckets force many sibling nodes per level; the memo must keep a
  // level's shared pivot at a single primary eval
  Dataset ds = testsup::random_dataset(300, 3, 1, 6, 55);
  FqTree tree(ds, 5, /*bucket_size=*/1);
  DistanceCounter counter;
  auto res = tree.range_search(RangeQuery{ds.text(0), 6}, counter);
  CHECK(res.primary_evals <= ds.size());
  (void)res;
}

TEST_CASE("fh tree: all leaves at the same depth") {
  Dataset ds = testsup::random_dataset(450, 4, 1, 12, 909);

  SUBCASE("default height matches the deepest bucket-terminated leaf") {
    FqTree fq(ds, 21, /*bucket_size=*/8);
    FhTree fh(ds, 21, /*bucket_size=*/8);
    CHECK(fh.height() == fq.max_leaf_depth());
  }

  SUBCASE("explicit height is honored") {
    FhTree fh(ds, 21, 8, 3);
    CHECK(fh.height() == 3);

    struct Frame {
      std::uint32_t idx;
      int depth;
    };
    std::vector<Frame> stack = {{0, 0}};
    std::vector<RecordId> all;
    while (!stack.empty()) {
      auto [idx, depth] = stack.back();
      stack.pop_back();
      const FqNode& node = fh.nodes()[idx];
      if (node.leaf) {
        CHECK(depth == 3);
        all.insert(all.end(), node.bucket.begin(), node.bucket.end());
        continue;
      }
      CHECK(depth < 3);
      for (const auto& [d, child] : node.edges) stack.push_back({child, depth + 1});
    }
    check_partition(all, ds.size());
  }

  SUBCASE("height zero collapses to one bucket") {
    FhTree fh(ds, 21, 8, 0);
    CHECK(fh.root().leaf);
    CHECK(fh.root().bucket.size() == ds.size());
  }
}

TEST_CASE("fh tree: search equals the linear scan") {
  for (std::uint64_t seed : {5ULL, 6ULL}) {
    Dataset ds = testsup::random_dataset(400, 4, 1, 10, 600 + seed);
    FhTree tree(ds, seed, /*bucket_size=*/4);
    testsup::check_matches_oracle(tree, ds, seed);
  }
}

TEST_CASE("fq and fh share level pivots for the same seed") {
  Dataset ds = testsup::random_dataset(300, 4, 1, 10, 321);
  FqTree fq(ds, 77, 8);
  FhTree fh(ds, 77, 8);
  std::size_t shared = std::min(fq.level_pivots().size(), fh.level_pivots().size());
  for (std::size_t i = 0; i < shared; ++i)
    CHECK(fq.level_pivots()[i] == fh.level_pivots()[i]);
}

TEST_CASE("pivot trees reject bad parameters") {
  Dataset ds = Dataset::from_lines({"a", "b"});
  CHECK_THROWS_AS(BkTree(ds, 0, 0), ConfigError);
  CHECK_THROWS_AS(FqTree(ds, 0, -3), ConfigError);
  CHECK_THROWS_AS(FhTree(ds, 0, 512, -1), ConfigError);
  Dataset empty;
  CHECK_THROWS_AS(BkTree(empty, 0, 512), ConfigError);
}
