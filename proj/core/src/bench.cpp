#include "mib/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "mib/errors.hpp"
#include "mib/rng.hpp"

namespace mib {

std::vector<std::string> known_structures() {
  return {"bk",  "fq",       "fh",    "vp",     "mvp",
          "mtb", "bisector", "mtree", "bubble", "linear"};
}

std::unique_ptr<Index> make_index(const std::string& name, const Dataset& ds,
                                  const StructureParams& params,
                                  std::uint64_t seed) {
  std::uint64_t s = sub_seed(seed, name);
  if (name == "bk") return std::make_unique<BkTree>(ds, s, params.bucket_size);
  if (name == "fq") return std::make_unique<FqTree>(ds, s, params.bucket_size);
  if (name == "fh")
    return std::make_unique<FhTree>(ds, s, params.bucket_size, params.fh_height);
  if (name == "vp")
    return std::make_unique<VpTree>(ds, s, params.vp_candidates, params.vp_samples);
  if (name == "mvp") return std::make_unique<MvpTree>(ds, s, params.mvp);
  if (name == "bisector")
    return std::make_unique<BisectorTree>(ds, params.bisector_leaf_capacity);
  if (name == "mtree") return std::make_unique<MTree>(ds, params.mtree);
  if (name == "mtb") return std::make_unique<MtbTree>(ds, params.mtb);
  if (name == "bubble") return std::make_unique<BubbleIndex>(ds, params.bubble);
  if (name == "linear") return std::make_unique<LinearScan>(ds);
  throw ConfigError("unknown structure: " + name);
}

std::vector<std::vector<RecordId>> sample_queries(const Dataset& ds,
                                                  std::uint32_t count,
                                                  std::uint32_t sets,
                                                  std::uint64_t seed) {
  if (ds.empty()) throw ConfigError("cannot sample queries from an empty dataset");
  if (count < 1) throw ConfigError("query sample must hold at least one record");
  if (count > ds.size())
    throw ConfigError("query sample larger than the dataset");
  std::vector<std::vector<RecordId>> out;
  out.reserve(sets);
  for (std::uint32_t s = 0; s < sets; ++s) {
    Rng rng(sub_seed(seed, "queries/" + std::to_string(s)));
    out.push_back(sample_ids(static_cast<std::uint32_t>(ds.size()), count, rng));
  }
  return out;
}

namespace {

struct QueryStats {
  double pct = 0.0;
  double filter = 0.0;
  double time_ms = 0.0;
  double matches = 0.0;
  double radius = 0.0;
};

int radius_for(const Dataset& ds, RecordId query, double fraction,
               std::optional<int> fixed) {
  if (fixed) return *fixed;
  return static_cast<int>(
      std::ceil(fraction * static_cast<double>(ds.symbols(query).size())));
}

}  // namespace

BenchReport run_bench(const Dataset& ds, const BenchConfig& config) {
  std::vector<std::string> structures =
      config.structures.empty() ? known_structures() : config.structures;
  if (config.query_sets < 1 || config.query_size < 1)
    throw ConfigError("query sets and query size must be at least 1");
  if (config.fixed_radius && *config.fixed_radius < 0)
    throw ConfigError("radius must be non-negative");
  if (!config.fixed_radius) {
    if (config.fractions.empty()) throw ConfigError("no fractions given");
    for (double f : config.fractions)
      if (!(f > 0.0) || f > 1.0)
        throw ConfigError("fractions must lie in (0, 1]");
  }

  auto query_sets = sample_queries(ds, static_cast<std::uint32_t>(config.query_size),
                                   static_cast<std::uint32_t>(config.query_sets),
                                   config.seed);
  std::vector<RecordId> queries;
  for (const auto& set : query_sets)
    queries.insert(queries.end(), set.begin(), set.end());

  std::vector<bool> filter_variants;
  switch (config.bag_filter) {
    case BagFilterMode::Off:
      filter_variants = {false};
      break;
    case BagFilterMode::On:
      filter_variants = {true};
      break;
    case BagFilterMode::Both:
      filter_variants = {false, true};
      break;
  }

  std::vector<double> sweep =
      config.fixed_radius ? std::vector<double>{0.0} : config.fractions;

  const double n = static_cast<double>(ds.size());
  const int threads =
      std::max(1, std::min(config.threads,
                           static_cast<int>(std::thread::hardware_concurrency() > 0
                                                ? std::thread::hardware_concurrency()
                                                : 1)));

  BenchReport report;
  for (const std::string& name : structures) {
    std::unique_ptr<Index> index = make_index(name, ds, config.params, config.seed);

    for (bool filter_on : filter_variants) {
      for (double fraction : sweep) {
        std::vector<QueryStats> slots(queries.size());
        std::atomic<std::size_t> cursor{0};
        std::mutex error_mutex;
        std::string error;

        auto work = [&] {
          for (;;) {
            std::size_t qi = cursor.fetch_add(1);
            if (qi >= queries.size()) break;
            RecordId rid = queries[qi];
            RangeQuery rq;
            rq.text = ds.text(rid);
            rq.radius = radius_for(ds, rid, fraction, config.fixed_radius);

            DistanceCounter counter;
            counter.use_bag_filter = filter_on;
            auto t0 = std::chrono::steady_clock::now();
            QueryResult res;
            try {
              res = index->range_search(rq, counter);
            } catch (const std::exception& ex) {
              std::lock_guard<std::mutex> lock(error_mutex);
              if (error.empty()) error = ex.what();
              return;
            }
            auto t1 = std::chrono::steady_clock::now();

            if (config.verify) {
              DistanceCounter oracle_counter;
              QueryResult oracle = linear_scan(ds, rq, oracle_counter);
              if (oracle.matches != res.matches) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (error.empty())
                  error = "structure " + std::string(index->name()) +
                          (filter_on ? "+bag" : "") + " disagrees with the linear scan" +
                          " on query \"" + rq.text + "\" radius " +
                          std::to_string(rq.radius);
                return;
              }
            }

            QueryStats& slot = slots[qi];
            slot.pct = 100.0 * static_cast<double>(res.primary_evals) / n;
            slot.filter = static_cast<double>(res.filter_evals);
            slot.time_ms =
                config.measure_time
                    ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                    : 0.0;
            slot.matches = static_cast<double>(res.matches.size());
            slot.radius = static_cast<double>(rq.radius);
          }
        };

        if (threads == 1) {
          work();
        } else {
          std::vector<std::thread> pool;
          pool.reserve(static_cast<std::size_t>(threads));
          for (int t = 0; t < threads; ++t) pool.emplace_back(work);
          for (auto& t : pool) t.join();
        }
        if (!error.empty()) throw VerificationError(error);

        BenchRow row;
        row.structure = name + (filter_on ? "+bag" : "");
        row.fraction = fraction;
        double k = static_cast<double>(slots.size());
        for (const QueryStats& s : slots) {
          row.radius += s.radius;
          row.pct_scanned += s.pct;
          row.filter_evals += s.filter;
          row.time_ms += s.time_ms;
          row.matches += s.matches;
        }
        row.radius /= k;
        row.pct_scanned /= k;
        row.filter_evals /= k;
        row.time_ms /= k;
        row.matches /= k;
        report.rows.push_back(std::move(row));
      }
    }
  }

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const BenchRow& a, const BenchRow& b) {
                     if (a.structure != b.structure) return a.structure < b.structure;
                     return a.fraction < b.fraction;
                   });
  return report;
}

std::string csv_string(const BenchReport& report) {
  std::vector<const BenchRow*> rows;
  rows.reserve(report.rows.size());
  for (const BenchRow& r : report.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow* a, const BenchRow* b) {
    if (a->structure != b->structure) return a->structure < b->structure;
    return a->fraction < b->fraction;
  });

  std::string out = "structure,fraction,radius,pct_scanned,filter_evals,time_ms,matches\n";
  char buf[256];
  for (const BenchRow* r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n",
                  r->structure.c_str(), r->fraction, r->radius, r->pct_scanned,
                  r->filter_evals, r->time_ms, r->matches);
    out += buf;
  }
  return out;
}

void emit_csv(const BenchReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write: " + path);
  out << csv_string(report);
  out.flush();
  if (!out) throw IoError("write failure: " + path);
}

void emit_gnuplot(const BenchReport& report, const std::string& csv_path,
                  const std::string& script_path) {
  std::vector<std::string> structures;
  for (const BenchRow& r : report.rows)
    if (std::find(structures.begin(), structures.end(), r.structure) ==
        structures.end())
      structures.push_back(r.structure);
  std::sort(structures.begin(), structures.end());

  std::ofstream out(script_path);
  if (!out) throw IoError("cannot write: " + script_path);
  out << "# scanned-percentage curves, one per structure\n"
      << "set datafile separator ','\n"
      << "set key outside right\n"
      << "set xlabel 'radius as fraction of query length'\n"
      << "set ylabel 'database scanned (%)'\n"
      << "set xrange [0:1.05]\n"
      << "set yrange [0:105]\n"
      << "set grid\n"
      << "set term pngcairo size 960,640\n"
      << "set output '" << script_path << ".png'\n";
  out << "plot \\\n";
  for (std::size_t i = 0; i < structures.size(); ++i) {
    out << "  '" << csv_path << "' using 2:(strcol(1) eq '" << structures[i]
        << "' ? column(4) : NaN) with linespoints title '" << structures[i] << "'";
    out << (i + 1 < structures.size() ? ", \\\n" : "\n");
  }
  out.flush();
  if (!out) throw IoError("write failure: " + script_path);
}

}  // namespace mib
