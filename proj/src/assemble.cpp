#include <cmath>
#include <set>

#include "prelax/models.hpp"

namespace prelax {

namespace {

struct VarMap {
  std::map<Exponent, int> mono;
  std::vector<int> aux_offset;

  SparseAffine map(const AffineExpr& e, std::size_t model) const {
    SparseAffine out;
    out.constant = e.constant;
    for (const auto& [a, c] : e.mono) out.add(mono.at(a), c);
    for (const auto& [j, c] : e.aux) out.add(aux_offset[model] + j, c);
    out.normalize();
    return out;
  }
};

using RowKey = std::pair<std::vector<std::pair<int, double>>, double>;

bool trivially_true(const SparseAffine& a, bool equality) {
  if (!a.coeffs.empty()) return false;
  return equality ? a.constant == 0.0 : a.constant >= 0.0;
}

}  // namespace

ConicProgram assemble_models(const Polynomial& f, const std::vector<MomentModel>& models, const Box& box, Sense sense) {
  const std::size_t n = f.dim();
  if (box.dim() != n) throw InvalidArgument("assemble: box and polynomial dimensions differ");
  ConicProgram prog;
  prog.sense = sense;
  prog.target = sense == Sense::min ? f : -f;
  prog.domain = box;

  ExponentSet covered;
  for (const auto& m : models) covered.insert(m.index.begin(), m.index.end());
  ExponentSet monomials = covered;
  for (const auto& [a, c] : f.terms()) {
    if (a.is_zero()) continue;
    monomials.insert(a);
    if (!covered.count(a)) {
      prog.warnings.push_back("monomial " + to_string(a) + " is not covered by the family; only its box bounds apply");
    }
  }
  for (const auto& a : monomials) check_dimension({a}, n);

  VarMap vm;
  for (const auto& a : monomials) {
    if (a.is_zero()) continue;
    vm.mono[a] = prog.add_variable({a, "v" + to_string(a)});
  }
  for (std::size_t k = 0; k < models.size(); ++k) {
    vm.aux_offset.push_back(prog.num_vars());
    for (int j = 0; j < models[k].aux_count; ++j) {
      prog.add_variable({std::nullopt, "w" + std::to_string(k) + "_" + std::to_string(j)});
    }
  }

  std::set<std::pair<bool, RowKey>> seen;
  auto push_row = [&](SparseAffine expr, bool equality, int group, std::optional<CertOrigin> origin) {
    if (trivially_true(expr, equality)) return;
    if (group < 0 && !seen.insert({equality, {expr.coeffs, expr.constant}}).second) return;
    ProgramRow row{std::move(expr), group, std::move(origin)};
    (equality ? prog.equalities : prog.inequalities).push_back(std::move(row));
  };

  // Monomial box bounds on the support of f.
  for (const auto& [a, c] : f.terms()) {
    if (a.is_zero()) continue;
    const Interval r = monomial_range(a, box);
    const Polynomial x = Polynomial::monomial(a);
    if (std::isfinite(r.lo)) {
      const Polynomial g = x - Polynomial::constant(n, r.lo);
      push_row(vm.map(AffineExpr::from_polynomial(g), 0), false, -1, CertOrigin{{g}, {}});
    }
    if (std::isfinite(r.hi)) {
      const Polynomial g = Polynomial::constant(n, r.hi) - x;
      push_row(vm.map(AffineExpr::from_polynomial(g), 0), false, -1, CertOrigin{{g}, {}});
    }
  }

  for (std::size_t k = 0; k < models.size(); ++k) {
    const MomentModel& m = models[k];
    for (const auto& w : m.warnings) prog.warnings.push_back(w);
    int group = -1;
    if (m.aux_count > 0 || !m.gmcs.empty()) {
      group = static_cast<int>(prog.groups.size());
      prog.groups.push_back({m.label, m.check});
    }
    for (const auto& r : m.rows) push_row(vm.map(r.expr, k), r.equality, group, r.origin);
    for (const auto& l : m.lmis) {
      ProgramBlock blk;
      blk.size = l.size;
      blk.group = group;
      blk.origin = l.origin;
      for (int i = 0; i < l.size; ++i) {
        for (int j = i; j < l.size; ++j) {
          SparseAffine e = vm.map(l.at(i, j), k);
          if (e.coeffs.empty() && e.constant == 0.0) continue;
          blk.entries.push_back({i, j, std::move(e)});
        }
      }
      prog.blocks.push_back(std::move(blk));
    }
    for (const auto& g : m.gmcs) {
      ProgramGmc pg;
      pg.y = vm.map(g.y, k);
      for (const auto& t : g.t) pg.t.push_back(vm.map(t, k));
      pg.lambda = g.lambda;
      pg.group = group;
      prog.gmcs.push_back(std::move(pg));
    }
  }

  const LinearForm obj = linearize(*prog.target, Context::body);
  prog.objective.constant = obj.constant;
  for (const auto& [a, c] : obj.coeffs) prog.objective.add(vm.mono.at(a), c);
  prog.objective.normalize();
  return prog;
}

ConicProgram assemble_relaxation(const Polynomial& f, const PatternFamily& fam, const Box& box,
                                 const ModelPolicy& policy, Sense sense) {
  std::vector<MomentModel> models;
  for (const auto& p : fam.patterns) models.push_back(build_pattern_model(p, box, policy));
  if (policy.bound_factor_degree > 0) {
    std::vector<Polynomial> g;
    for (std::size_t i = 0; i < box.dim(); ++i) {
      const Polynomial xi = Polynomial::variable(box.dim(), i);
      if (std::isfinite(box.lower()[i])) g.push_back(xi - Polynomial::constant(box.dim(), box.lower()[i]));
      if (std::isfinite(box.upper()[i])) g.push_back(Polynomial::constant(box.dim(), box.upper()[i]) - xi);
    }
    if (!g.empty()) models.push_back(build_bound_factor_model(g, truncated_exponents(g.size(), policy.bound_factor_degree)));
  }
  return assemble_models(f, models, box, sense);
}

RelaxationResult solve_relaxation(const ConicProgram& prog, const SolverConfig& cfg) {
  RelaxationResult out;
  out.program = lower_gmc(prog, cfg);
  out.result = ConicSolver(cfg).solve(out.program);
  out.value = prog.sense == Sense::min ? out.result.primal_value : -out.result.primal_value;
  return out;
}

}  // namespace prelax
