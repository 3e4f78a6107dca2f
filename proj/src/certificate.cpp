#include <cmath>

#include "prelax/certificate.hpp"

namespace prelax {

namespace {

Polynomial product(const std::vector<Polynomial>& factors, std::size_t n) {
  Polynomial p = Polynomial::constant(n, 1.0);
  for (const auto& g : factors) p = p * g;
  return p;
}

/// Polynomial read of an affine expression over monomial variables; auxiliaries are dropped.
Polynomial as_polynomial(const SparseAffine& e, const ConicProgram& prog, std::size_t n) {
  Polynomial p = Polynomial::constant(n, e.constant);
  for (const auto& [j, c] : e.coeffs) {
    if (const auto& m = prog.vars[j].monomial) p.add_term(*m, c);
  }
  return p;
}

Eigen::MatrixXd clean_gram(const Eigen::MatrixXd& z) {
  const Eigen::MatrixXd q = 0.5 * (z + z.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  Eigen::VectorXd ev = es.eigenvalues();
  const double floor = -1e-7 * (1.0 + q.norm());
  bool clipped = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < 0.0 && ev[i] >= floor) {
      ev[i] = 0.0;
      clipped = true;
    }
  }
  if (!clipped) return q;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Json exponents_json(const std::vector<Exponent>& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back(to_json(e));
  return out;
}

Json polys_json(const std::vector<Polynomial>& v) {
  Json out = Json::array();
  for (const auto& p : v) out.push_back(to_json(p));
  return out;
}

std::vector<Exponent> exponents_from(const Json& j, std::size_t n, const std::string& where) {
  std::vector<Exponent> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(exponent_from_json(j[i], n, where + "/" + std::to_string(i)));
  return out;
}

std::vector<Polynomial> polys_from(const Json& j, const std::string& where) {
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(polynomial_from_json(j[i], where + "/" + std::to_string(i)));
  return out;
}

}  // namespace

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::sos: return "sos";
    case CertificateKind::handelman: return "handelman";
    case CertificateKind::circuit: return "circuit";
    case CertificateKind::mixed: return "mixed";
  }
  return "mixed";
}

CertificateKind certificate_kind_from_string(const std::string& s) {
  if (s == "sos") return CertificateKind::sos;
  if (s == "handelman") return CertificateKind::handelman;
  if (s == "circuit") return CertificateKind::circuit;
  if (s == "mixed") return CertificateKind::mixed;
  throw CertificateError("unknown certificate kind \"" + s + "\"");
}

Polynomial Certificate::expand(std::size_t n) const {
  Polynomial sum(n);
  for (const auto& t : sos) {
    Polynomial quad(n);
    const int m = static_cast<int>(t.basis.size());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) quad.add_term(t.basis[i] + t.basis[j], t.gram(i, j));
    sum += product(t.factors, n) * quad;
  }
  for (const auto& t : handelman) sum += product(t.factors, n) * t.coeff;
  for (const auto& t : vertex) sum += t.poly;
  for (const auto& t : circuits) sum += t.poly;
  return sum;
}

Certificate extract_certificate(const ConicProgram& prog, const SolveResult& result) {
  if (result.status != SolveStatus::optimal) {
    throw CertificateError("certificate needs an optimal solve, got " + to_string(result.status));
  }
  if (!prog.target) throw CertificateError("program carries no target polynomial");
  if (!prog.lowered()) throw CertificateError("program still has geometric mean cones");
  const std::size_t n = prog.target->dim();

  Certificate c;
  c.program_id = prog.id;
  c.sense = prog.sense;

  std::vector<Polynomial> group_poly(prog.groups.size(), Polynomial(n));
  double lambda = prog.objective.constant;

  for (std::size_t r = 0; r < prog.equalities.size(); ++r) {
    const auto& row = prog.equalities[r];
    const double mu = result.equality_duals[r];
    lambda -= mu * row.expr.constant;
    if (row.group < 0) {
      if (std::abs(mu) > 1e-12) throw CertificateError("equality row outside a constraint group");
      continue;
    }
    group_poly[row.group] += as_polynomial(row.expr, prog, n) * mu;
  }
  for (std::size_t r = 0; r < prog.inequalities.size(); ++r) {
    const auto& row = prog.inequalities[r];
    const double z = std::max(result.inequality_duals[r], 0.0);
    lambda -= z * row.expr.constant;
    if (row.group >= 0) {
      group_poly[row.group] += as_polynomial(row.expr, prog, n) * z;
      continue;
    }
    if (z <= 1e-14) continue;
    if (!row.origin) throw CertificateError("inequality row without polynomial origin");
    if (row.origin->basis.empty()) {
      c.handelman.push_back({row.origin->factors, z});
    } else {
      SosTerm t{row.origin->factors, row.origin->basis, Eigen::MatrixXd::Constant(1, 1, z)};
      c.sos.push_back(std::move(t));
    }
  }
  for (std::size_t k = 0; k < prog.blocks.size(); ++k) {
    const auto& blk = prog.blocks[k];
    const Eigen::MatrixXd& zmat = result.block_duals[k];
    for (const auto& e : blk.entries) lambda -= (e.i == e.j ? 1.0 : 2.0) * zmat(e.i, e.j) * e.expr.constant;
    if (blk.group >= 0) {
      for (const auto& e : blk.entries) {
        group_poly[blk.group] += as_polynomial(e.expr, prog, n) * ((e.i == e.j ? 1.0 : 2.0) * zmat(e.i, e.j));
      }
      continue;
    }
    if (!blk.origin) throw CertificateError("PSD block without polynomial origin");
    if (zmat.cwiseAbs().maxCoeff() <= 1e-14) continue;
    c.sos.push_back({blk.origin->factors, blk.origin->basis, clean_gram(zmat)});
  }
  for (std::size_t g = 0; g < prog.groups.size(); ++g) {
    if (group_poly[g].is_zero()) continue;
    const auto& check = prog.groups[g].check;
    switch (check.type) {
      case GroupCheck::Type::vertex:
        c.vertex.push_back({prog.groups[g].label, group_poly[g], check.coords, check.shift});
        break;
      case GroupCheck::Type::circuit:
        c.circuits.push_back({prog.groups[g].label, group_poly[g], check.circuit});
        break;
      case GroupCheck::Type::none:
        throw CertificateError("constraint group \"" + prog.groups[g].label + "\" has no certificate check");
    }
  }

  c.lambda = prog.sense == Sense::min ? lambda : -lambda;
  const bool has_sos = !c.sos.empty(), has_lp = !c.handelman.empty() || !c.vertex.empty(), has_circ = !c.circuits.empty();
  const int kinds = int(has_sos) + int(has_lp) + int(has_circ);
  if (kinds > 1) {
    c.kind = CertificateKind::mixed;
  } else if (has_sos) {
    c.kind = CertificateKind::sos;
  } else if (has_circ) {
    c.kind = CertificateKind::circuit;
  } else {
    c.kind = CertificateKind::handelman;
  }
  return c;
}

Json to_json(const Certificate& c) {
  Json blocks = Json::array();
  for (const auto& t : c.sos) {
    Json gram = Json::array();
    for (Eigen::Index i = 0; i < t.gram.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < t.gram.cols(); ++j) row.push_back(t.gram(i, j));
      gram.push_back(std::move(row));
    }
    blocks.push_back({{"type", "sos"}, {"factors", polys_json(t.factors)}, {"basis", exponents_json(t.basis)}, {"gram", gram}});
  }
  for (const auto& t : c.handelman) {
    blocks.push_back({{"type", "handelman"}, {"factors", polys_json(t.factors)}, {"coeff", t.coeff}});
  }
  for (const auto& t : c.vertex) {
    Json b = {{"type", "vertex"}, {"label", t.label}, {"poly", to_json(t.poly)}, {"coords", exponents_json(t.coords)}};
    b["shift"] = t.shift ? to_json(*t.shift) : Json(nullptr);
    blocks.push_back(std::move(b));
  }
  for (const auto& t : c.circuits) {
    blocks.push_back({{"type", "circuit"},
                      {"label", t.label},
                      {"poly", to_json(t.poly)},
                      {"beta", to_json(t.circuit.beta)},
                      {"gammas", exponents_json(t.circuit.gammas)},
                      {"weights", t.circuit.lambda}});
  }
  return {{"lambda", c.lambda},
          {"kind", to_string(c.kind)},
          {"sense", c.sense == Sense::min ? "min" : "max"},
          {"program_id", c.program_id},
          {"blocks", std::move(blocks)}};
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  const Json& lambda = require_field(j, "lambda", "");
  if (!lambda.is_number()) throw JsonError("/lambda: expected a number");
  c.lambda = lambda.get<double>();
  c.kind = certificate_kind_from_string(require_field(j, "kind", "").get<std::string>());
  if (j.contains("sense")) c.sense = j["sense"].get<std::string>() == "max" ? Sense::max : Sense::min;
  if (j.contains("program_id")) c.program_id = j["program_id"].get<std::string>();
  const Json& blocks = require_field(j, "blocks", "");
  if (!blocks.is_array()) throw JsonError("/blocks: expected an array");
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::string w = "/blocks/" + std::to_string(k);
    const Json& b = blocks[k];
    const std::string type = require_field(b, "type", w).get<std::string>();
    if (type == "sos") {
      SosTerm t;
      t.factors = polys_from(require_field(b, "factors", w), w + "/factors");
      const Json& basis = require_field(b, "basis", w);
      const std::size_t n = basis.empty() ? 0 : basis[0].size();
      t.basis = exponents_from(basis, n, w + "/basis");
      const Json& gram = require_field(b, "gram", w);
      const auto m = static_cast<Eigen::Index>(t.basis.size());
      if (!gram.is_array() || static_cast<Eigen::Index>(gram.size()) != m) throw JsonError(w + "/gram: expected a square matrix");
      t.gram.resize(m, m);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (!gram[i].is_array() || static_cast<Eigen::Index>(gram[i].size()) != m) {
          throw JsonError(w + "/gram/" + std::to_string(i) + ": expected " + std::to_string(m) + " entries");
        }
        for (Eigen::Index jj = 0; jj < m; ++jj) t.gram(i, jj) = gram[i][jj].get<double>();
      }
      c.sos.push_back(std::move(t));
    } else if (type == "handelman") {
      c.handelman.push_back({polys_from(require_field(b, "factors", w), w + "/factors"), require_field(b, "coeff", w).get<double>()});
    } else if (type == "vertex") {
      VertexTerm t;
      if (b.contains("label")) t.label = b["label"].get<std::string>();
      t.poly = polynomial_from_json(require_field(b, "poly", w), w + "/poly");
      t.coords = exponents_from(require_field(b, "coords", w), t.poly.dim(), w + "/coords");
      if (b.contains("shift") && !b["shift"].is_null()) t.shift = exponent_from_json(b["shift"], t.poly.dim(), w + "/shift");
      c.vertex.push_back(std::move(t));
    } else if (type == "circuit") {
      CircuitTerm t;
      if (b.contains("label")) t.label = b["label"].get<std::string>();
      t.poly = polynomial_from_json(require_field(b, "poly", w), w + "/poly");
      t.circuit.beta = exponent_from_json(require_field(b, "beta", w), t.poly.dim(), w + "/beta");
      t.circuit.gammas = exponents_from(require_field(b, "gammas", w), t.poly.dim(), w + "/gammas");
      t.circuit.lambda = require_field(b, "weights", w).get<std::vector<double>>();
      c.circuits.push_back(std::move(t));
    } else {
      throw JsonError(w + "/type: unknown block type \"" + type + "\"");
    }
  }
  return c;
}

}  // namespace prelax
