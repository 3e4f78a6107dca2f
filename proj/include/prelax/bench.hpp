// Instance generation, a brute-force oracle, the triv tightness criterion and
// the benchmark runner.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prelax/io.hpp"
#include "prelax/models.hpp"

namespace prelax {

/// splitmix64; the generator behind every random instance.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [lo, hi) from the top 53 bits.
  double uniform(double lo, double hi);
  /// Uniform in [0, n) (n > 0), by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

/// C(n + d, d); throws past `cap`.
std::uint64_t dense_count(std::size_t n, int d, std::uint64_t cap = 5'000'000);

/// Tags: dense(n,d), S(n,d), A5, A6, A7, A8, Aex, custom:<instance.json>.
ExponentSet tag_support(const std::string& tag, std::uint64_t seed);

/// Coefficients uniform in [-1, 1] on the tagged support (constant term
/// included), box [0,1]^n unless the custom file says otherwise.
Instance gen_instance(const std::string& tag, std::uint64_t seed);

struct BruteForceOptions {
  int grid_points = 21;
  long long max_evaluations = 2'000'000;
  int starts = 10;
  int refine_steps = 200;
  std::uint64_t seed = 1;  // random sampling when n > 6
};

struct BruteForceResult {
  double value = 0.0;  // an upper bound on the minimum
  std::vector<double> x;
  bool budget_exceeded = false;
};

/// Grid search plus projected coordinate descent from the best grid points.
/// Infinite box sides are truncated to 10 units.
BruteForceResult brute_force_min(const Polynomial& f, const Box& box, const BruteForceOptions& opts = {});

/// f_0 + sum over alpha != 0 of min / max of f_alpha * [l_alpha, u_alpha].
Interval trivial_range(const Polynomial& f, const Box& box);

/// (max_relax - min_relax) / trivial width, clipped to [0, 1 + 1e-6]; 0 for
/// a zero-width trivial range.
double triv_value(double min_relax, double max_relax, const Polynomial& f, const Box& box);

/// Solves both senses; throws unless both are optimal.
double triv_criterion(const Polynomial& f, const Box& box, const PatternFamily& fam, const ModelPolicy& policy = {},
                      const SolverConfig& cfg = {});

/// Methods: M, C, S, H, MC, T, tree, tssos-sos, univariate-sparse, custom.
PatternFamily method_family(const std::string& method, const Instance& inst);
const std::vector<std::string>& known_methods();

/// Builds and solves one relaxation of the instance.
RelaxationResult relax_instance(const Instance& inst, const std::string& method, Sense sense,
                                const ModelPolicy& policy = {}, const SolverConfig& cfg = {});
ConicProgram build_instance_program(const Instance& inst, const std::string& method, Sense sense,
                                    const ModelPolicy& policy = {});

struct BenchConfig {
  std::vector<std::string> families;
  std::vector<std::string> methods;
  std::vector<std::string> senses = {"min", "max"};
  int samples = 20;
  std::uint64_t seed = 1;  // sample k uses seed + k
  int threads = 0;         // 0: PATTERN_RELAX_THREADS or the hardware count
  ModelPolicy policy;
  SolverConfig solver;
};

BenchConfig bench_config_from_json(const Json& j);
Json to_json(const BenchConfig& c);

struct BenchRecord {
  std::string instance_id;
  std::string family;
  std::string method;
  std::string sense;
  double value = 0.0;
  double triv = 0.0;  // NaN unless both senses are optimal
  SolveStatus status = SolveStatus::numerical_failure;
  int iters = 0;
  double time_s = 0.0;
  std::string error;  // construction failure, if any
};

struct BenchSummary {
  std::string family;
  std::string method;
  int count = 0;  // records with a finite triv (per instance)
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double mean_time = 0.0;
};

struct BenchOutput {
  std::vector<BenchRecord> records;
  std::vector<BenchSummary> summary;
};

/// Worker count: min of the request, PATTERN_RELAX_THREADS and the hardware.
int bench_threads(int requested);

BenchOutput run_benchmark(const BenchConfig& config);

std::string bench_csv(const std::vector<BenchRecord>& records);
std::string summary_csv(const std::vector<BenchSummary>& summary);

/// Linear-interpolated quantile of a non-empty sample.
double quantile(std::vector<double> v, double q);

}  // namespace prelax
