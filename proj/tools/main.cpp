// Command line front end: build, query, bench and verify over the index
// structures in the core library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mib/mib.hpp"

namespace {

struct Options {
  std::string dataset_path;
  std::string structures = "all";
  std::optional<std::size_t> max_records;
  std::uint64_t seed = 0;

  std::optional<int> radius;
  std::optional<double> fraction;
  std::string fractions_spec;

  std::string query_text;
  int query_sets = 6;
  int query_size = 500;
  std::string bag_filter = "off";
  bool verify = false;
  bool no_time = false;
  int threads = 1;

  std::string out_path;
  bool plot = false;

  int bucket_size = 512;
  std::optional<int> fanout;
  std::string mvp_spec;
  std::optional<double> threshold;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return parts;
}

std::vector<std::string> parse_structures(const std::string& spec) {
  if (spec == "all" || spec.empty()) return mib::known_structures();
  auto known = mib::known_structures();
  std::vector<std::string> names = split_csv(spec);
  for (const auto& name : names) {
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw mib::ConfigError("unknown structure '" + name + "'");
  }
  return names;
}

std::vector<double> parse_fractions(const std::string& spec) {
  double start = 0, stop = 0, step = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
      step <= 0.0)
    throw mib::ConfigError("--fractions expects START:STOP:STEP with STEP > 0");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    double f = start + step * i;
    if (f > stop + 1e-9) break;
    // snap near-integer multiples of 0.0001 so 0.1 * 3 prints as 0.3
    out.push_back(std::round(f * 10000.0) / 10000.0);
  }
  if (out.empty()) throw mib::ConfigError("--fractions covers no value");
  return out;
}

mib::StructureParams parse_structure_params(const Options& opts) {
  mib::StructureParams params;
  params.bucket_size = opts.bucket_size;
  if (opts.fanout) {
    params.mtree.fanout = *opts.fanout;
    params.mtb.fanout = *opts.fanout;
  }
  if (opts.threshold) {
    params.mtb.threshold = *opts.threshold;
    params.bubble.threshold = *opts.threshold;
  }
  if (!opts.mvp_spec.empty()) {
    int v = 0, m = 0, p = 0, leaf = 0;
    if (std::sscanf(opts.mvp_spec.c_str(), "%d,%d,%d,%d", &v, &m, &p, &leaf) != 4)
      throw mib::ConfigError("--mvp expects V,M,P,LEAF");
    params.mvp.vantage_count = v;
    params.mvp.partitions = m;
    params.mvp.path_length = p;
    params.mvp.leaf_capacity = leaf;
  }
  return params;
}

mib::BagFilterMode parse_bag_filter(const std::string& s) {
  if (s == "off") return mib::BagFilterMode::Off;
  if (s == "on") return mib::BagFilterMode::On;
  if (s == "both") return mib::BagFilterMode::Both;
  throw mib::ConfigError("--bag-filter expects on, off or both");
}

mib::BenchConfig make_bench_config(const Options& opts) {
  mib::BenchConfig config;
  config.structures = parse_structures(opts.structures);
  if (opts.radius && (!opts.fractions_spec.empty() || opts.fraction))
    throw mib::ConfigError("--radius excludes --fraction and --fractions");
  if (opts.radius) {
    config.fixed_radius = *opts.radius;
  } else if (opts.fraction) {
    config.fractions = {*opts.fraction};
  } else if (!opts.fractions_spec.empty()) {
    config.fractions = parse_fractions(opts.fractions_spec);
  }
  config.query_sets = opts.query_sets;
  config.query_size = opts.query_size;
  config.bag_filter = parse_bag_filter(opts.bag_filter);
  config.seed = opts.seed;
  config.verify = opts.verify;
  config.measure_time = !opts.no_time;
  config.threads = opts.threads;
  config.params = parse_structure_params(opts);
  return config;
}

int run_build(const Options& opts) {
  mib::Dataset ds = mib::load_dataset(opts.dataset_path, opts.max_records);
  mib::StructureParams params = parse_structure_params(opts);
  std::printf("dataset: %zu records\n", ds.size());
  for (const auto& name : parse_structures(opts.structures)) {
    auto t0 = std::chrono::steady_clock::now();
    auto index = mib::make_index(name, ds, params, opts.seed);
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::printf("built %-8s in %.1f ms\n", index->name(), ms);
  }
  return 0;
}

int run_query(const Options& opts) {
  if (opts.query_text.empty()) throw mib::ConfigError("--query is required");
  if (!opts.radius && !opts.fraction)
    throw mib::ConfigError("give --radius or --fraction");
  if (opts.radius && opts.fraction)
    throw mib::ConfigError("--radius and --fraction are mutually exclusive");

  mib::Dataset ds = mib::load_dataset(opts.dataset_path, opts.max_records);
  mib::StructureParams params = parse_structure_params(opts);
  mib::BagFilterMode filter = parse_bag_filter(opts.bag_filter);

  int radius;
  if (opts.radius) {
    radius = *opts.radius;
  } else {
    std::size_t len = mib::decode_utf8(opts.query_text).size();
    radius = static_cast<int>(std::ceil(*opts.fraction * static_cast<double>(len)));
  }

  for (const auto& name : parse_structures(opts.structures)) {
    auto index = mib::make_index(name, ds, params, opts.seed);
    mib::DistanceCounter counter;
    counter.use_bag_filter = filter != mib::BagFilterMode::Off;
    auto res = index->range_search(mib::RangeQuery{opts.query_text, radius}, counter);
    std::printf("%s: %zu matches, %llu evaluations, %llu filter evaluations\n",
                index->name(), res.matches.size(),
                static_cast<unsigned long long>(res.primary_evals),
                static_cast<unsigned long long>(res.filter_evals));
    for (mib::RecordId id : res.matches) {
      int d = mib::edit_distance(opts.query_text, ds.text(id));
      std::printf("  %u\t%d\t%s\n", id, d, ds.text(id).c_str());
    }
    if (opts.verify) {
      mib::DistanceCounter plain;
      auto want = mib::linear_scan(ds, mib::RangeQuery{opts.query_text, radius}, plain);
      if (res.matches != want.matches)
        throw mib::VerificationError(std::string("structure ") + index->name() +
                                     " disagrees with the linear scan for query '" +
                                     opts.query_text + "' radius " +
                                     std::to_string(radius));
    }
  }
  return 0;
}

int run_bench_cmd(const Options& opts) {
  if (opts.plot && opts.out_path.empty())
    throw mib::ConfigError("--plot needs --out to know the csv location");

  mib::Dataset ds = mib::load_dataset(opts.dataset_path, opts.max_records);
  mib::BenchConfig config = make_bench_config(opts);
  mib::BenchReport report = mib::run_bench(ds, config);

  if (opts.out_path.empty()) {
    std::fputs(mib::csv_string(report).c_str(), stdout);
  } else {
    mib::emit_csv(report, opts.out_path);
    std::fprintf(stderr, "wrote %s (%zu rows)\n", opts.out_path.c_str(),
                 report.rows.size());
    if (opts.plot) {
      std::string script = opts.out_path + ".gp";
      mib::emit_gnuplot(report, opts.out_path, script);
      std::fprintf(stderr, "wrote %s\n", script.c_str());
    }
  }
  return 0;
}

int run_verify(const Options& opts) {
  mib::Dataset ds = mib::load_dataset(opts.dataset_path, opts.max_records);
  mib::BenchConfig config = make_bench_config(opts);
  config.verify = true;
  config.measure_time = false;
  mib::BenchReport report = mib::run_bench(ds, config);
  std::printf("ok: %zu rows verified against the linear scan\n",
              report.rows.size());
  return 0;
}

void add_common(CLI::App* cmd, Options& opts) {
  cmd->add_option("--dataset", opts.dataset_path, "newline separated text corpus")
      ->required();
  cmd->add_option("--structure", opts.structures,
                  "comma separated structure names, or 'all'");
  cmd->add_option("--max-records", opts.max_records, "cap the dataset size");
  cmd->add_option("--seed", opts.seed, "RNG seed")->envname("MIB_SEED");
  cmd->add_option("--bucket-size", opts.bucket_size, "bk/fq/fh bucket capacity");
  cmd->add_option("--fanout", opts.fanout, "mtree/mtb fanout");
  cmd->add_option("--mvp", opts.mvp_spec, "mvp parameters V,M,P,LEAF");
  cmd->add_option("--threshold", opts.threshold, "mtb/bubble radius threshold");
  cmd->add_option("--bag-filter", opts.bag_filter, "on, off or both");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric similarity search over string corpora"};
  app.require_subcommand(1);
  Options opts;

  CLI::App* build = app.add_subcommand("build", "build structures, report timings");
  add_common(build, opts);

  CLI::App* query = app.add_subcommand("query", "run one range query");
  add_common(query, opts);
  query->add_option("--query", opts.query_text, "query string");
  query->add_option("--radius", opts.radius, "edit distance radius");
  query->add_option("--fraction", opts.fraction,
                    "radius as a fraction of the query length");
  query->add_flag("--verify", opts.verify, "compare against the linear scan");

  CLI::App* bench = app.add_subcommand("bench", "radius sweep, CSV output");
  add_common(bench, opts);
  bench->add_option("--radius", opts.radius, "fixed radius instead of a sweep");
  bench->add_option("--fraction", opts.fraction, "single fraction");
  bench->add_option("--fractions", opts.fractions_spec,
                    "fraction sweep START:STOP:STEP");
  bench->add_option("--query-sets", opts.query_sets, "number of query sets");
  bench->add_option("--query-size", opts.query_size, "queries per set");
  bench->add_option("--threads", opts.threads, "worker threads");
  bench->add_flag("--no-time", opts.no_time,
                  "skip timing for byte reproducible output");
  bench->add_flag("--verify", opts.verify, "check every result while measuring");
  bench->add_option("--out", opts.out_path, "CSV path, stdout when omitted");
  bench->add_flag("--plot", opts.plot, "also write a gnuplot script next to --out");

  CLI::App* verify = app.add_subcommand("verify",
                                        "compare every structure to the linear scan");
  add_common(verify, opts);
  verify->add_option("--radius", opts.radius, "fixed radius instead of a sweep");
  verify->add_option("--fraction", opts.fraction, "single fraction");
  verify->add_option("--fractions", opts.fractions_spec,
                     "fraction sweep START:STOP:STEP");
  verify->add_option("--query-sets", opts.query_sets, "number of query sets");
  verify->add_option("--query-size", opts.query_size, "queries per set");
  verify->add_option("--threads", opts.threads, "worker threads");

  // lighter defaults than the bench sweep; flags still override
  verify->parse_complete_callback([&]() {
    if (verify->count("--query-sets") == 0) opts.query_sets = 2;
    if (verify->count("--query-size") == 0) opts.query_size = 50;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 1;  // command line misuse is a configuration error
  }

  try {
    if (app.got_subcommand(build)) return run_build(opts);
    if (app.got_subcommand(query)) return run_query(opts);
    if (app.got_subcommand(bench)) return run_bench_cmd(opts);
    if (app.got_subcommand(verify)) return run_verify(opts);
  } catch (const mib::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const mib::VerificationError& e) {
    std::fprintf(stderr, "verification failed: %s\n", e.what());
    return 2;
  } catch (const mib::EmptyDatasetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const mib::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  }
  return 0;
}
