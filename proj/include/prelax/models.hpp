// Per-pattern convex models on shared monomial variables and the assembly of
// a full pattern relaxation into one conic program.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prelax/conic.hpp"
#include "prelax/patterns.hpp"
#include "prelax/poly.hpp"

namespace prelax {

class ModelError : public std::runtime_error {
 public:
  enum class Code { wrong_shape, pattern_too_wide, support_overlap, precondition, no_route };
  ModelError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// constant + sum mono[a] v_a + sum aux[j] w_j, with w_j local to one model.
/// The constant stands for constant * v_0.
struct AffineExpr {
  double constant = 0.0;
  std::map<Exponent, double> mono;
  std::map<int, double> aux;

  static AffineExpr from_polynomial(const Polynomial& p);
  AffineExpr& add_mono(const Exponent& a, double c);
  AffineExpr& add_aux(int j, double c);
  double eval(std::span<const double> x, std::span<const double> aux_values) const;
  bool operator==(const AffineExpr&) const = default;
};

struct ModelRow {
  AffineExpr expr;
  bool equality = false;  // expr == 0, otherwise expr >= 0
  std::optional<CertOrigin> origin;
};

/// Symmetric block; entries[i][j] for j >= i.
struct ModelLmi {
  int size = 0;
  std::vector<std::vector<AffineExpr>> upper;
  std::optional<CertOrigin> origin;

  const AffineExpr& at(int i, int j) const { return i <= j ? upper[i][j - i] : upper[j][i - j]; }
};

/// y <= prod t_i^lambda_i.
struct ModelGmc {
  AffineExpr y;
  std::vector<AffineExpr> t;
  std::vector<double> lambda;
};

struct MomentModel {
  std::string label;
  PatternKind kind = PatternKind::generic;
  ExponentSet index;
  int aux_count = 0;
  std::vector<ModelRow> rows;
  std::vector<ModelLmi> lmis;
  std::vector<ModelGmc> gmcs;
  GroupCheck check;
  std::vector<std::string> warnings;

  /// Recomputes index from the monomials referenced by rows, LMIs and GMCs.
  void refresh_index();
};

struct ModelPolicy {
  enum class Multilinear { vertex, mccormick };
  Multilinear multilinear = Multilinear::vertex;
  int vertex_max_coords = 6;   // larger multilinear patterns use product McCormick rows
  int vertex_cap = 12;         // hard limit for an explicitly requested vertex model
  bool generic_hull_fallback = true;
  int bound_factor_degree = 0;  // > 0 adds bound-factor rows of this degree on the box
};

// Builders.
MomentModel build_multilinear_model(const Pattern& p, const Box& box, int cap = 12);
MomentModel build_mccormick_model(const Pattern& p, const Box& box);
/// Recursive McCormick rows v_{q+r} against v_q and v_r for every point of p.
MomentModel build_product_mccormick_model(const Pattern& p, const Box& box);
/// One row L_v(g^beta) >= 0 per beta in b (b has dimension g.size()).
MomentModel build_bound_factor_model(const std::vector<Polynomial>& g, const ExponentSet& b);
MomentModel build_lasserre_model(const std::vector<Exponent>& gamma, int d, const Box& box);
/// One LMI L_v(g_i M_{B_i}) per i; g[0] is normally the constant 1.
MomentModel build_dense_moment_model(const std::vector<Polynomial>& g, const std::vector<ExponentSet>& b_list);
MomentModel build_shifted_model(const Exponent& eta, const MomentModel& base, const Box& box);

enum class CircuitDomain { r_plus, r_full };
MomentModel build_circuit_model(const Pattern& p, CircuitDomain domain);
/// L_v(x^m M_B) for every (B, m); multipliers default to 0.
MomentModel build_sparse_sos_moment_model(const std::vector<ExponentSet>& b_list,
                                          const std::vector<Exponent>& multipliers = {});

/// Dispatches on the pattern kind according to the policy.
MomentModel build_pattern_model(const Pattern& p, const Box& box, const ModelPolicy& policy = {});

/// Auxiliary values of the lift x -> (x^a) (vertex weights for vertex models).
std::vector<double> lift_auxiliaries(const MomentModel& m, std::span<const double> x, const Box& box);
/// Largest violation of the model at v_a = x^a with the given auxiliaries.
double model_violation(const MomentModel& m, std::span<const double> x, std::span<const double> aux);

std::string dump(const MomentModel& m);

// Assembly.

/// Minimizes f (or maximizes, by negation) over the intersection of the
/// per-pattern models, with monomial box bounds on the support of f.
ConicProgram assemble_relaxation(const Polynomial& f, const PatternFamily& fam, const Box& box,
                                 const ModelPolicy& policy = {}, Sense sense = Sense::min);

/// Merges explicit models (already built) into one program.
ConicProgram assemble_models(const Polynomial& f, const std::vector<MomentModel>& models, const Box& box,
                             Sense sense = Sense::min);

struct RelaxationResult {
  ConicProgram program;  // lowered
  SolveResult result;
  double value = 0.0;  // bound on f in the requested sense
};

RelaxationResult solve_relaxation(const ConicProgram& prog, const SolverConfig& cfg = {});

}  // namespace prelax
