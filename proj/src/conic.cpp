#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "prelax/conic.hpp"

namespace prelax {

void SparseAffine::add(int var, double c) {
  if (c == 0.0) return;
  coeffs.emplace_back(var, c);
}

void SparseAffine::normalize() {
  std::sort(coeffs.begin(), coeffs.end());
  std::vector<std::pair<int, double>> merged;
  for (const auto& [k, c] : coeffs) {
    if (!merged.empty() && merged.back().first == k) {
      merged.back().second += c;
    } else {
      merged.emplace_back(k, c);
    }
  }
  std::erase_if(merged, [](const auto& kc) { return std::abs(kc.second) < Polynomial::kDropTolerance; });
  coeffs = std::move(merged);
}

double SparseAffine::eval(const Eigen::VectorXd& x) const {
  double s = constant;
  for (const auto& [k, c] : coeffs) s += c * x(k);
  return s;
}

int ConicProgram::add_variable(VariableLabel label) {
  vars.push_back(std::move(label));
  return num_vars() - 1;
}

int ConicProgram::monomial_index(const Exponent& alpha) const {
  for (int k = 0; k < num_vars(); ++k) {
    if (vars[k].monomial && *vars[k].monomial == alpha) return k;
  }
  return -1;
}

void ConicProgram::validate() const {
  auto check = [&](const SparseAffine& a) {
    for (const auto& [k, c] : a.coeffs) {
      if (k < 0 || k >= num_vars()) throw InvalidArgument("constraint references unknown variable");
    }
  };
  check(objective);
  for (const auto& r : equalities) check(r.expr);
  for (const auto& r : inequalities) check(r.expr);
  for (const auto& b : blocks) {
    if (b.size <= 0) throw InvalidArgument("PSD block with nonpositive size");
    for (const auto& e : b.entries) {
      if (e.i < 0 || e.j < e.i || e.j >= b.size) throw InvalidArgument("PSD entry outside upper triangle");
      check(e.expr);
    }
  }
  for (const auto& g : gmcs) {
    check(g.y);
    if (g.t.size() != g.lambda.size() || g.t.empty()) throw InvalidArgument("malformed GMC record");
    for (const auto& t : g.t) check(t);
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "numerical_failure";
}

namespace {

Eigen::MatrixXd block_value(const ProgramBlock& b, const Eigen::VectorXd& x) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(b.size, b.size);
  for (const auto& e : b.entries) {
    const double v = e.expr.eval(x);
    m(e.i, e.j) += v;
    if (e.i != e.j) m(e.j, e.i) += v;
  }
  return m;
}

}  // namespace

double max_violation(const ConicProgram& prog, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (const auto& r : prog.equalities) worst = std::max(worst, std::abs(r.expr.eval(x)));
  for (const auto& r : prog.inequalities) worst = std::max(worst, -r.expr.eval(x));
  for (const auto& b : prog.blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block_value(b, x), Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues().minCoeff());
  }
  return worst;
}

ResidualReport residuals(const ConicProgram& prog, const SolveResult& res) {
  ResidualReport rep;
  rep.primal = max_violation(prog, res.x);
  // Dual residual: c + A^T y ... expressed through the Lagrangian gradient.
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(prog.num_vars());
  for (const auto& [k, c] : prog.objective.coeffs) grad(k) += c;
  for (std::size_t r = 0; r < prog.equalities.size(); ++r) {
    for (const auto& [k, c] : prog.equalities[r].expr.coeffs) grad(k) -= res.equality_duals(r) * c;
  }
  double comp = 0.0;
  for (std::size_t r = 0; r < prog.inequalities.size(); ++r) {
    const double z = res.inequality_duals(r);
    for (const auto& [k, c] : prog.inequalities[r].expr.coeffs) grad(k) -= z * c;
    comp += z * prog.inequalities[r].expr.eval(res.x);
  }
  for (std::size_t j = 0; j < prog.blocks.size(); ++j) {
    const auto& b = prog.blocks[j];
    const Eigen::MatrixXd& zmat = res.block_duals[j];
    for (const auto& e : b.entries) {
      const double w = e.i == e.j ? zmat(e.i, e.j) : 2.0 * zmat(e.i, e.j);
      for (const auto& [k, c] : e.expr.coeffs) grad(k) -= w * c;
    }
    comp += (zmat.cwiseProduct(block_value(b, res.x))).sum();
  }
  rep.dual = grad.lpNorm<Eigen::Infinity>();
  rep.complementarity = std::abs(comp);
  return rep;
}

std::string dump(const ConicProgram& prog) {
  std::ostringstream os;
  auto name = [&](int k) {
    const auto& v = prog.vars[k];
    return v.monomial ? "v" + to_string(*v.monomial) : v.name;
  };
  auto affine = [&](const SparseAffine& a) {
    std::ostringstream s;
    bool first = true;
    if (a.constant != 0.0 || a.coeffs.empty()) {
      s << a.constant;
      first = false;
    }
    for (const auto& [k, c] : a.coeffs) {
      if (!first) s << (c < 0 ? " - " : " + ");
      else if (c < 0) s << "-";
      const double m = std::abs(c);
      if (m != 1.0) s << m << "*";
      s << name(k);
      first = false;
    }
    return s.str();
  };
  os << "minimize " << affine(prog.objective) << "\n";
  for (const auto& r : prog.equalities) os << "  " << affine(r.expr) << " == 0\n";
  for (const auto& r : prog.inequalities) os << "  " << affine(r.expr) << " >= 0\n";
  for (const auto& b : prog.blocks) {
    os << "  PSD " << b.size << "x" << b.size << ":";
    for (const auto& e : b.entries) os << " [" << e.i << "," << e.j << "] " << affine(e.expr) << ";";
    os << "\n";
  }
  for (const auto& g : prog.gmcs) {
    os << "  GMC " << affine(g.y) << " <= prod(";
    for (std::size_t i = 0; i < g.t.size(); ++i) {
      if (i) os << ", ";
      os << "(" << affine(g.t[i]) << ")^" << g.lambda[i];
    }
    os << ")\n";
  }
  return os.str();
}

}  // namespace prelax
