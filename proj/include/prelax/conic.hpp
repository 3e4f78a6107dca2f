// Conic programs over free variables with nonnegative rows, equality rows,
// PSD blocks with affine entries and (before lowering) geometric-mean cones.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prelax/patterns.hpp"
#include "prelax/poly.hpp"

namespace prelax {

/// sum_k coeffs[k].second * x[coeffs[k].first] + constant, indices sorted.
struct SparseAffine {
  std::vector<std::pair<int, double>> coeffs;
  double constant = 0.0;

  void add(int var, double c);
  void normalize();
  double eval(const Eigen::VectorXd& x) const;
  bool operator==(const SparseAffine&) const = default;
};

/// Polynomial origin of a constraint, used for certificates. A row equals
/// L_v(prod(factors) * x^(2b)) for basis {b} (or L_v(prod(factors)) for an empty
/// basis); a PSD block equals L_v(prod(factors) * x^B (x^B)^T).
struct CertOrigin {
  std::vector<Polynomial> factors;
  std::vector<Exponent> basis;
};

/// How a group of constraints with auxiliaries is certified as a whole.
struct GroupCheck {
  enum class Type { none, vertex, circuit };
  Type type = Type::none;
  // vertex: the aggregated multiplier is multilinear in y_i = x^coords[i] on the
  // box prod(ranges[i]), times x^shift.
  std::vector<Exponent> coords;
  std::vector<Interval> ranges;
  std::optional<Exponent> shift;
  // circuit
  CircuitInfo circuit;
  bool signed_beta = false;  // |f_beta| condition (odd beta on R^n)
};

struct ProgramRow {
  SparseAffine expr;  // expr >= 0, or expr == 0 for equalities
  int group = -1;
  std::optional<CertOrigin> origin;
};

struct PsdEntry {
  int i = 0;
  int j = 0;  // i <= j
  SparseAffine expr;
};

struct ProgramBlock {
  int size = 0;
  std::vector<PsdEntry> entries;
  int group = -1;
  std::optional<CertOrigin> origin;
};

/// 0 <= y <= prod t_i^lambda_i is required only through y <= prod t^lambda;
/// the builder adds y >= 0 separately when needed.
struct ProgramGmc {
  SparseAffine y;
  std::vector<SparseAffine> t;
  std::vector<double> lambda;
  int group = -1;
};

struct VariableLabel {
  std::optional<Exponent> monomial;
  std::string name;
};

struct ConstraintGroup {
  std::string label;
  GroupCheck check;
};

enum class Sense { min, max };

/// min objective(x). For relaxations of a maximization the objective holds -L_v(f).
struct ConicProgram {
  std::string id;
  Sense sense = Sense::min;
  std::optional<Polynomial> target;  // polynomial minimized (already sign-adjusted)
  std::optional<Box> domain;
  std::vector<VariableLabel> vars;
  SparseAffine objective;
  std::vector<ProgramRow> equalities;
  std::vector<ProgramRow> inequalities;
  std::vector<ProgramBlock> blocks;
  std::vector<ProgramGmc> gmcs;
  std::vector<ConstraintGroup> groups;
  std::vector<std::string> warnings;

  int num_vars() const { return static_cast<int>(vars.size()); }
  int add_variable(VariableLabel label);
  /// Index of v_alpha or -1.
  int monomial_index(const Exponent& alpha) const;
  bool lowered() const { return gmcs.empty(); }
  /// Throws on out-of-range indices or malformed blocks.
  void validate() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iter, numerical_failure };
std::string to_string(SolveStatus s);

struct SolverConfig {
  double feasibility_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.99;
  long long gmc_denominator_cap = 1LL << 16;
  bool verbose = false;  // per-iteration log on stderr
};

struct SolveResult {
  SolveStatus status = SolveStatus::numerical_failure;
  double primal_value = 0.0;  // objective of the (minimization) program
  double dual_value = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd equality_duals;    // y, one per equality row
  Eigen::VectorXd inequality_duals;  // z >= 0, one per inequality row
  std::vector<Eigen::MatrixXd> block_duals;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
};

/// Checks a point against rows and blocks; returns the largest violation
/// (negative slack or negative PSD eigenvalue).
double max_violation(const ConicProgram& prog, const Eigen::VectorXd& x);

/// Weak-duality-compatible summary used by the tests.
struct ResidualReport {
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
};
ResidualReport residuals(const ConicProgram& prog, const SolveResult& result);

// --- geometric mean cone lowering ---------------------------------------

/// Rational approximation p/q of x by continued fractions.
std::pair<long long, long long> rationalize(double x, double tol = 1e-12, long long max_den = 1LL << 30);

/// Replaces every GMC record by 2x2 PSD blocks and linear rows (binary tower).
ConicProgram lower_gmc(const ConicProgram& prog, const SolverConfig& cfg = {});

/// Tower feasibility test for y <= prod t^lambda, independent of the closed
/// form: propagates the largest admissible auxiliary values through the tower.
bool tower_feasible(double y, std::span<const double> t, std::span<const double> lambda,
                    long long denominator_cap = 1LL << 16);

// --- solver ----------------------------------------------------------------

/// Primal-dual interior point method (homogeneous self-dual embedding,
/// Nesterov-Todd scaling, Mehrotra predictor-corrector).
class ConicSolver {
 public:
  explicit ConicSolver(SolverConfig cfg = {}) : cfg_(cfg) {}
  SolveResult solve(const ConicProgram& prog);
  const SolverConfig& config() const { return cfg_; }

 private:
  SolverConfig cfg_;
};

SolveResult solve(const ConicProgram& prog, const SolverConfig& cfg = {});

// --- SDPA sparse format ------------------------------------------------------

std::string export_sdpa(const ConicProgram& prog);
/// Reads SDPA sparse input; diagonal blocks become inequality rows.
ConicProgram import_sdpa(const std::string& text);

std::string dump(const ConicProgram& prog);

}  // namespace prelax
