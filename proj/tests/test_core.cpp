#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "mib/mib.hpp"
#include "support.hpp"

using namespace mib;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = std::string("./") + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("dataset loading trims, dedups and numbers densely") {
  auto path = write_temp("ds_basic.txt", "  cat \ncat\ndog\n\n\tdog\t\nfish\n");
  Dataset ds = load_dataset(path);
  REQUIRE(ds.size() == 3);
  CHECK(ds.text(0) == "cat");
  CHECK(ds.text(1) == "dog");
  CHECK(ds.text(2) == "fish");
  for (RecordId i = 0; i < 3; ++i) CHECK(ds.record(i).id == i);
  std::remove(path.c_str());
}

TEST_CASE("dataset loading honors max_records") {
  auto path = write_temp("ds_cap.txt", "a\nb\nc\nd\ne\n");
  Dataset ds = load_dataset(path, 3);
  CHECK(ds.size() == 3);
  CHECK(ds.text(2) == "c");
  std::remove(path.c_str());
}

TEST_CASE("dataset errors") {
  CHECK_THROWS_AS(load_dataset("./does_not_exist_zzz.txt"), IoError);
  auto path = write_temp("ds_empty.txt", "\n  \n\t\n");
  CHECK_THROWS_AS(load_dataset(path), EmptyDatasetError);
  std::remove(path.c_str());
}

TEST_CASE("dataset decodes symbols once at load") {
  auto path = write_temp("ds_utf8.txt", "na\xC3\xAFve\ncafe\n");
  Dataset ds = load_dataset(path);
  REQUIRE(ds.size() == 2);
  CHECK(ds.symbols(0).size() == 5);  // n a ï v e
  CHECK(ds.symbols(1).size() == 4);
  std::remove(path.c_str());
}

TEST_CASE("counter reset clears counts and memo but keeps policy") {
  DistanceCounter c;
  c.use_bag_filter = true;
  c.memoize = true;
  c.primary_evals = 5;
  c.filter_evals = 3;
  c.memo.emplace(0, 2);
  c.reset();
  CHECK(c.primary_evals == 0);
  CHECK(c.filter_evals == 0);
  CHECK(c.memo.empty());
  CHECK(c.use_bag_filter);
  CHECK(c.memoize);
}

TEST_CASE("query context memoizes distances and counts each record once") {
  Dataset ds = Dataset::from_lines({"cat", "cart", "dog"});
  DistanceCounter counter;
  QueryContext ctx(ds, RangeQuery{"cat", 1}, counter);

  CHECK(ctx.distance_to(0) == 0);
  CHECK(ctx.distance_to(1) == 1);
  CHECK(counter.primary_evals == 2);
  // repeated evaluations hit the memo
  CHECK(ctx.distance_to(0) == 0);
  CHECK(ctx.verify(1));
  CHECK(counter.primary_evals == 2);
  CHECK(counter.filter_evals == 0);

  // verify on a fresh record with the filter on runs bag first
  counter.use_bag_filter = true;
  CHECK_FALSE(ctx.verify(2));
  CHECK(counter.filter_evals == 1);
  CHECK(counter.primary_evals == 2);  // bag(cat,dog)=3 > 1 rejected early
}

TEST_CASE("query context without memoization recounts") {
  Dataset ds = Dataset::from_lines({"cat"});
  DistanceCounter counter;
  counter.memoize = false;
  QueryContext ctx(ds, RangeQuery{"cat", 0}, counter);
  ctx.distance_to(0);
  ctx.distance_to(0);
  CHECK(counter.primary_evals == 2);
  CHECK(counter.memo.empty());
}

TEST_CASE("negative radius is a config error") {
  Dataset ds = Dataset::from_lines({"x"});
  DistanceCounter counter;
  CHECK_THROWS_AS(QueryContext(ds, RangeQuery{"x", -1}, counter), ConfigError);
}

TEST_CASE("linear_scan is the oracle: evaluates everything, ignores the filter") {
  Dataset ds = testsup::random_dataset(200, 4, 1, 10, 42);
  DistanceCounter counter;
  counter.use_bag_filter = true;  // must make no difference here
  QueryResult res = linear_scan(ds, RangeQuery{ds.text(7), 2}, counter);
  CHECK(res.primary_evals == ds.size());
  CHECK(res.filter_evals == 0);
  CHECK(std::is_sorted(res.matches.begin(), res.matches.end()));
  CHECK(res.matches == testsup::brute_matches(ds, ds.text(7), 2));
  // the query is a dataset member, so it matches itself
  CHECK(std::binary_search(res.matches.begin(), res.matches.end(), RecordId{7}));
}

TEST_CASE("LinearScan index honors the bag filter and scans 100%") {
  Dataset ds = testsup::random_dataset(300, 4, 1, 10, 43);
  LinearScan index(ds);

  DistanceCounter off;
  QueryResult plain = index.range_search(RangeQuery{ds.text(0), 1}, off);
  CHECK(plain.primary_evals == ds.size());
  CHECK(plain.filter_evals == 0);

  DistanceCounter on;
  on.use_bag_filter = true;
  QueryResult filtered = index.range_search(RangeQuery{ds.text(0), 1}, on);
  CHECK(filtered.matches == plain.matches);
  CHECK(filtered.filter_evals == ds.size());
  CHECK(filtered.primary_evals <= plain.primary_evals);
}

TEST_CASE("range_search resets a dirty counter") {
  Dataset ds = Dataset::from_lines({"one", "two"});
  LinearScan index(ds);
  DistanceCounter counter;
  counter.primary_evals = 999;
  counter.memo.emplace(0, 7);  // stale entry from some other query
  QueryResult res = index.range_search(RangeQuery{"one", 0}, counter);
  CHECK(res.primary_evals == 2);
  CHECK(res.matches == std::vector<RecordId>{0});
}

TEST_CASE("prune_subset: boundary cases") {
  // d(q,p)=5, k=2: closest possible member at 3
  CHECK(prune_subset(5, 2, 2));        // 3 > 2: skip
  CHECK_FALSE(prune_subset(5, 2, 3));  // 3 <= 3: must look
  CHECK_FALSE(prune_subset(0, 0, 0));  // the pivot itself matches
  CHECK_FALSE(prune_subset(4, 9, 1));  // huge radius subsumes everything
}

TEST_CASE("prune_subset never discards a reachable match") {
  Rng rng(sub_seed(23, "core/prune"));
  Dataset ds = testsup::random_dataset(120, 4, 1, 8, 99);
  for (int round = 0; round < 200; ++round) {
    // random pivot and random subset
    RecordId pivot = static_cast<RecordId>(uniform_below(rng, ds.size()));
    std::vector<RecordId> subset;
    for (int i = 0; i < 15; ++i)
      subset.push_back(static_cast<RecordId>(uniform_below(rng, ds.size())));
    int k = 0;
    for (RecordId r : subset)
      k = std::max(k, edit_distance(ds.symbols(pivot), ds.symbols(r)));
    std::string q = testsup::random_word(rng, 4, 1, 8);
    int e = static_cast<int>(uniform_below(rng, 4));
    int dqp = edit_distance(decode_utf8(q), ds.symbols(pivot));
    if (!prune_subset(dqp, k, e)) continue;
    for (RecordId r : subset) {
      CAPTURE(q);
      CHECK(edit_distance(decode_utf8(q), ds.symbols(r)) > e);
    }
  }
}

TEST_CASE("sub_seed is stable and stream-separated") {
  CHECK(sub_seed(1, "a") == sub_seed(1, "a"));
  CHECK(sub_seed(1, "a") != sub_seed(1, "b"));
  CHECK(sub_seed(1, "a") != sub_seed(2, "a"));
}

TEST_CASE("uniform_below stays in range and covers values") {
  Rng rng(1234);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    std::uint64_t v = uniform_below(rng, 7);
    REQUIRE(v < 7);
    ++hits[static_cast<std::size_t>(v)];
  }
  for (int h : hits) CHECK(h > 0);
}

TEST_CASE("sample_ids yields distinct ids, full draw is a permutation") {
  Rng rng(99);
  auto part = sample_ids(50, 10, rng);
  CHECK(part.size() == 10);
  std::sort(part.begin(), part.end());
  CHECK(std::adjacent_find(part.begin(), part.end()) == part.end());

  Rng rng2(99);
  auto full = sample_ids(50, 50, rng2);
  CHECK(full.size() == 50);
  std::sort(full.begin(), full.end());
  for (std::uint32_t i = 0; i < 50; ++i) CHECK(full[i] == i);
}
