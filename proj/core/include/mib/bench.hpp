#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mib/ball_trees.hpp"
#include "mib/bubble.hpp"
#include "mib/index.hpp"
#include "mib/pivot_trees.hpp"
#include "mib/vp_trees.hpp"

namespace mib {

// Construction parameters for every structure the factory can build.
struct StructureParams {
  int bucket_size = 512;                // bk, fq, fh
  std::optional<int> fh_height;
  int vp_candidates = 10;
  int vp_samples = 100;
  MvpParams mvp;
  int bisector_leaf_capacity = 256;
  MTreeParams mtree;
  MtbParams mtb;
  BubbleParams bubble;
};

// Names understood by make_index, in the default benchmark order.
std::vector<std::string> known_structures();

// Builds a structure by name; the per-structure seed is derived from `seed`
// and the name. Throws ConfigError for an unknown name.
std::unique_ptr<Index> make_index(const std::string& name, const Dataset& ds,
                                  const StructureParams& params, std::uint64_t seed);

enum class BagFilterMode { Off, On, Both };

struct BenchConfig {
  std::vector<std::string> structures;  // empty = known_structures()
  std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5,
                                   0.6, 0.7, 0.8, 0.9, 1.0};
  // A fixed radius replaces the fraction sweep; such rows carry fraction 0.
  std::optional<int> fixed_radius;
  int query_sets = 6;
  int query_size = 500;
  BagFilterMode bag_filter = BagFilterMode::Off;
  std::uint64_t seed = 0;
  // Compare every result against the linear scan; mismatch throws
  // VerificationError.
  bool verify = false;
  // With timing off the time_ms column is 0.0000 and the CSV is
  // byte-reproducible for a fixed (dataset, config) pair.
  bool measure_time = true;
  int threads = 1;
  StructureParams params;
};

// One output row: means over every query of every query set.
struct BenchRow {
  std::string structure;  // bag-filtered variants carry a "+bag" suffix
  double fraction = 0.0;
  double radius = 0.0;
  double pct_scanned = 0.0;   // 100 * primary_evals / dataset size
  double filter_evals = 0.0;
  double time_ms = 0.0;
  double matches = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

// `sets` independent seeded draws of `count` record ids each, without
// replacement within a set. count == size gives a full permutation.
std::vector<std::vector<RecordId>> sample_queries(const Dataset& ds,
                                                  std::uint32_t count,
                                                  std::uint32_t sets,
                                                  std::uint64_t seed);

// Runs the sweep: per structure, per bag-filter variant, per fraction (or
// the fixed radius), over every sampled query. Query radius is
// ceil(fraction * query length in symbols).
BenchReport run_bench(const Dataset& ds, const BenchConfig& config);

// CSV with the fixed header
// structure,fraction,radius,pct_scanned,filter_evals,time_ms,matches
// rows sorted by (structure, fraction), numbers to four decimals.
std::string csv_string(const BenchReport& report);
void emit_csv(const BenchReport& report, const std::string& path);

// gnuplot companion script plotting pct_scanned against fraction, one curve
// per structure, reading the CSV at `csv_path`.
void emit_gnuplot(const BenchReport& report, const std::string& csv_path,
                  const std::string& script_path);

}  // namespace mib
