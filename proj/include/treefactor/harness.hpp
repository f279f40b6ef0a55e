#pragma once

// Orchestration layer: prime sweeps over the catalog, three-way comparison of
// cycle-structure distributions (exact model law, group cycle data, empirical
// factorization frequencies), the dimension table of the group towers, and
// the command-line surface.
//
// Sweeps visit primes p ≡ 1 (mod 3) by default so the residue field always
// contains a square root of -3, matching the field the seed classifier works
// over; the census sweep can opt into all primes ≥ 5.  Per-prime work is pure
// and merged in prime order, so every run is deterministic given its seed.

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <nlohmann/json.hpp>

#include "treefactor/fpfactor.hpp"
#include "treefactor/groupforge.hpp"
#include "treefactor/typedyn.hpp"

namespace treefactor {

struct SweepOptions {
  long prime_bound = 100000;
  int level = 1;
  bool with_labels = true;
  bool all_primes = false;  // default: p ≡ 1 (mod 3) only
  int max_level = 4;
  uint64_t seed = 1;
  std::ostream* records = nullptr;  // per-prime JSON lines when set
};

struct SweepResult {
  int level = 1;
  int m = 0;  // 0 for shape-only sweeps of plain cubics
  long considered = 0;
  long used = 0;
  std::map<CycleStructure, long> shapes;
  std::map<TypedPartition, long> partitions;  // labeled sweeps only
  std::map<std::string, long> skips;

  // exact frequencies with denominator `used`
  CycleData shape_frequencies() const;
  Data partition_frequencies() const;
};

// Labeled sweep of a postcritically finite cubic.  Every labeled run
// re-checks the child-label dependence law (children of each top-level factor
// multiply to its shifted label; at level 1 the parent is x - t itself) and
// throws std::logic_error on a violation.
SweepResult sweep_pcf(const PCFCubic& f, const mpq_class& t, const SweepOptions& opt);

// Shape-only sweep of an arbitrary rational cubic (a3, a2, a1, a0).
SweepResult sweep_shapes(const std::array<mpq_class, 4>& coeffs, const mpq_class& t,
                         const SweepOptions& opt);

struct ExperimentConfig {
  std::string poly = "f1";  // catalog id or display form
  std::array<mpq_class, 4> coeffs{};  // direct coefficients when poly is empty
  bool has_coeffs = false;
  mpq_class t = 3;
  int level = 2;
  long prime_bound = 100000;
  int model = 0;  // 0: choose from the seed data
  int m = 1;
  long samples = 0;  // 0: exact where possible
  uint64_t seed = 1;
  long max_support = 1000000;
  std::string out;
  std::string records;
  std::string format = "json";
};

struct ComparisonReport {
  std::string poly_id;
  std::string t;
  int m = 1;
  int model = 0;
  int level = 1;
  CycleData model_dist;
  CycleData group_dist;
  bool group_exact = true;
  long group_samples = 0;
  CycleData empirical;  // exact counts over used primes
  long primes_used = 0;
  long primes_considered = 0;
  std::map<std::string, long> skips;
  std::optional<mpq_class> tv_model_group;  // exact when both sides exact
  double tv_model_group_value = 0;
  std::optional<double> tv_model_empirical;
  std::optional<double> tv_group_empirical;
  bool containment = true;
  std::vector<CycleStructure> escapees;
};

// Assemble a report from the three finished sources; levels must agree.
ComparisonReport compare_sources(const Data& model_data, const CycleData& group,
                                 bool group_exact, const SweepResult& empirical);

// Full pipeline: propagate the model, measure the group, sweep the primes.
ComparisonReport compare_experiment(const ExperimentConfig& cfg);

nlohmann::json comparison_json(const ComparisonReport& r);
std::string comparison_csv(const ComparisonReport& r);

// One row of the dimension table: orders written as 3^a 2^b against the
// ambient 6^a, ratio = 1 - ((a-b)/a) log_6 2 with the tail kept exact.
// The m=2 column tabulates the closed-form exponent schedule (degenerate
// small levels from the actual orders); the measured stabilizer-chain
// orders grow faster and are annotated in the limits block of the report.
struct HausdorffRow {
  int n = 1;
  mpz_class exp3;  // a
  mpz_class exp2;  // b
  mpq_class tail;  // (a-b)/a
  double ratio = 1;
  bool from_formula = true;  // false: degenerate small level, actual order
};

std::vector<HausdorffRow> hausdorff_rows(int m, int max_level);
double hausdorff_limit(int m);
nlohmann::json hausdorff_json(int max_level);
std::string hausdorff_csv(int max_level);

// Command-line surface: model | group | factor | compare | hausdorff.
// Exit 0 on success, 1 when a hard check fails (containment, an enforced
// exact claim), 2 on unusable configuration or resource limits.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace treefactor
