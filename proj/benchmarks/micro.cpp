// Micro benchmarks for the distance kernels and the range search of every
// index structure. Run manually:
//   build/benchmarks/mib_micro --benchmark_filter=search
#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "mib/mib.hpp"

namespace {

mib::Dataset sample_dataset(std::size_t n) {
  // synthetic but word-like: lowercase, lengths 2..12
  std::vector<std::string> lines;
  lines.reserve(n);
  mib::Rng rng(mib::sub_seed(17, "micro"));
  while (lines.size() < n) {
    std::size_t len = 2 + mib::uniform_below(rng, 11);
    std::string w;
    for (std::size_t i = 0; i < len; ++i)
      w.push_back(static_cast<char>('a' + mib::uniform_below(rng, 26)));
    lines.push_back(std::move(w));
  }
  return mib::Dataset::from_lines(lines);
}

const mib::Dataset& corpus() {
  static mib::Dataset ds = sample_dataset(3000);
  return ds;
}

void BM_EditDistance(benchmark::State& state) {
  const mib::Dataset& ds = corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    int d = mib::edit_distance(ds.symbols(i % ds.size()),
                               ds.symbols((i * 7 + 1) % ds.size()));
    benchmark::DoNotOptimize(d);
    ++i;
  }
}
BENCHMARK(BM_EditDistance);

void BM_BagDistance(benchmark::State& state) {
  const mib::Dataset& ds = corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    int d = mib::bag_distance(ds.symbols(i % ds.size()),
                              ds.symbols((i * 7 + 1) % ds.size()));
    benchmark::DoNotOptimize(d);
    ++i;
  }
}
BENCHMARK(BM_BagDistance);

void BM_Build(benchmark::State& state, const char* name) {
  const mib::Dataset& ds = corpus();
  mib::StructureParams params;
  params.bucket_size = 64;
  for (auto _ : state) {
    auto index = mib::make_index(name, ds, params, 1);
    benchmark::DoNotOptimize(index);
  }
}

void BM_Search(benchmark::State& state, const char* name) {
  const mib::Dataset& ds = corpus();
  mib::StructureParams params;
  params.bucket_size = 64;
  auto index = mib::make_index(name, ds, params, 1);
  mib::DistanceCounter counter;
  std::size_t i = 0;
  for (auto _ : state) {
    auto res = index->range_search(
        mib::RangeQuery{ds.text(i % ds.size()), 2}, counter);
    benchmark::DoNotOptimize(res);
    ++i;
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Build, bk, "bk");
BENCHMARK_CAPTURE(BM_Build, vp, "vp");
BENCHMARK_CAPTURE(BM_Build, mtree, "mtree");

BENCHMARK_CAPTURE(BM_Search, bk, "bk");
BENCHMARK_CAPTURE(BM_Search, fq, "fq");
BENCHMARK_CAPTURE(BM_Search, fh, "fh");
BENCHMARK_CAPTURE(BM_Search, vp, "vp");
BENCHMARK_CAPTURE(BM_Search, mvp, "mvp");
BENCHMARK_CAPTURE(BM_Search, bisector, "bisector");
BENCHMARK_CAPTURE(BM_Search, mtree, "mtree");
BENCHMARK_CAPTURE(BM_Search, mtb, "mtb");
BENCHMARK_CAPTURE(BM_Search, bubble, "bubble");
BENCHMARK_CAPTURE(BM_Search, linear, "linear");

BENCHMARK_MAIN();
