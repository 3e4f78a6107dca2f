#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "prelax/certificate.hpp"

namespace prelax {

namespace {

Polynomial gram_form(const std::vector<Exponent>& basis, const Eigen::MatrixXd& q, std::size_t n) {
  Polynomial p(n);
  const int m = static_cast<int>(basis.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) p.add_term(basis[i] + basis[j], q(i, j));
  return p;
}

double max_abs_coeff(const Polynomial& p) {
  double m = 0.0;
  for (const auto& [a, c] : p.terms()) m = std::max(m, std::abs(c));
  return m;
}

void check_identity(VerifyReport& rep, const Polynomial& lhs, const Polynomial& rhs, double tol) {
  const Polynomial diff = lhs - rhs;
  for (const auto& [a, c] : diff.terms()) {
    rep.max_coeff_residual = std::max(rep.max_coeff_residual, std::abs(c));
    if (std::abs(c) > tol) {
      std::ostringstream ss;
      ss << "coefficient of x^" << to_string(a) << " off by " << c;
      rep.fail(ss.str());
    }
  }
}

void check_gram(VerifyReport& rep, const Eigen::MatrixXd& q, double tol, const std::string& what) {
  if (q.rows() != q.cols()) throw CertificateError(what + ": Gram matrix is not square");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + q.norm())) rep.fail(what + ": Gram matrix is not symmetric");
  const Eigen::MatrixXd s = 0.5 * (q + q.transpose());
  const double lmin = s.size() ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues()[0] : 0.0;
  const double scaled = lmin / (1.0 + s.norm());
  rep.min_eigenvalue = std::min(rep.min_eigenvalue, scaled);
  if (scaled < -tol) {
    std::ostringstream ss;
    ss << what << ": eigenvalue " << lmin;
    rep.fail(ss.str());
  }
}

/// Factor c0 + c1 x^a, or c x^a, nonnegative on the box.
bool factor_nonnegative(const Polynomial& g, const Box& box, double tol, std::string& why) {
  double c0 = 0.0;
  std::vector<std::pair<Exponent, double>> rest;
  for (const auto& [a, c] : g.terms()) {
    if (a.is_zero()) {
      c0 = c;
    } else {
      rest.emplace_back(a, c);
    }
  }
  if (rest.size() > 1) {
    why = "factor " + to_string(g) + " is not affine in one monomial";
    return false;
  }
  if (rest.empty()) {
    if (c0 >= -tol) return true;
    why = "negative constant factor";
    return false;
  }
  const auto& [a, c1] = rest[0];
  const Interval r = monomial_range(a, box);
  const double t = c1 > 0.0 ? r.lo : r.hi;
  if (!std::isfinite(t)) {
    why = "factor " + to_string(g) + " is unbounded below on the box";
    return false;
  }
  if (c0 + c1 * t >= -tol * (1.0 + std::abs(c0) + std::abs(c1 * t))) return true;
  why = "factor " + to_string(g) + " is negative on the box";
  return false;
}

void check_factors(VerifyReport& rep, const std::vector<Polynomial>& factors, const Box& box, const std::string& what) {
  for (const auto& g : factors) {
    std::string why;
    if (!factor_nonnegative(g, box, 1e-12, why)) rep.fail(what + ": " + why);
  }
}

std::vector<double> sample_point(const Box& box, std::mt19937& gen) {
  std::vector<double> x(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    double lo = box.lower()[i], hi = box.upper()[i];
    if (!std::isfinite(lo)) lo = std::isfinite(hi) ? hi - 20.0 : -10.0;
    if (!std::isfinite(hi)) hi = lo < 0.0 ? 10.0 : lo + 10.0;
    x[i] = std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  return x;
}

void check_vertex(VerifyReport& rep, const VertexTerm& t, const Box& box, double tol) {
  const std::size_t n = box.dim();
  const std::string what = "vertex term " + t.label;
  Exponent shift = t.shift ? *t.shift : Exponent(n);
  if (monomial_range(shift, box).lo < 0.0) {
    rep.fail(what + ": shift monomial can be negative");
    return;
  }
  const std::size_t k = t.coords.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!t.coords[i].disjoint_support(t.coords[j])) {
        rep.fail(what + ": coordinates share variables");
        return;
      }
    }
  }
  std::vector<Interval> ranges;
  for (const auto& c : t.coords) {
    ranges.push_back(monomial_range(c, box));
    if (!ranges.back().bounded()) {
      rep.fail(what + ": unbounded coordinate range");
      return;
    }
  }
  // Multilinear coefficients indexed by subsets of coordinates.
  std::map<unsigned, double> q;
  for (const auto& [a, c] : t.poly.terms()) {
    Exponent rest(n);
    bool divisible = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] < shift[i]) divisible = false;
    }
    if (!divisible) {
      rep.fail(what + ": term x^" + to_string(a) + " misses the shift");
      return;
    }
    rest = a - shift;
    unsigned mask = 0;
    Exponent built(n);
    for (std::size_t i = 0; i < k; ++i) {
      bool hit = false;
      for (std::size_t v : t.coords[i].support()) hit = hit || rest[v] != 0;
      if (hit) {
        mask |= 1u << i;
        built = built + t.coords[i];
      }
    }
    if (built != rest) {
      rep.fail(what + ": term x^" + to_string(a) + " is not multilinear in the coordinates");
      return;
    }
    q[mask] += c;
  }
  const double scale = 1.0 + max_abs_coeff(t.poly);
  double worst = 0.0;
  for (unsigned v = 0; v < (1u << k); ++v) {
    double val = 0.0;
    for (const auto& [mask, c] : q) {
      double term = c;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (1u << i)) term *= (v & (1u << i)) ? ranges[i].hi : ranges[i].lo;
      }
      val += term;
    }
    worst = std::min(worst, val);
  }
  if (worst < -tol * scale) {
    std::ostringstream ss;
    ss << what << ": negative at a box vertex (" << worst << ")";
    rep.fail(ss.str());
  }
}

}  // namespace

void VerifyReport::fail(std::string what) {
  pass = false;
  failures.push_back(std::move(what));
}

std::string VerifyReport::summary() const {
  std::ostringstream ss;
  ss << (pass ? "PASS" : "FAIL") << " (max coefficient residual " << max_coeff_residual << ", min scaled eigenvalue "
     << min_eigenvalue << ")";
  for (const auto& f : failures) ss << "\n  " << f;
  return ss.str();
}

VerifyReport verify_sos(const Polynomial& f, double lambda, const std::vector<GramBlock>& blocks) {
  const std::size_t n = f.dim();
  VerifyReport rep;
  Polynomial sum(n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& [basis, q] = blocks[b];
    if (static_cast<Eigen::Index>(basis.size()) != q.rows()) throw CertificateError("Gram size differs from its basis");
    check_dimension(ExponentSet(basis.begin(), basis.end()), n);
    check_gram(rep, q, 1e-7, "block " + std::to_string(b));
    sum += gram_form(basis, q, n);
  }
  check_identity(rep, f - Polynomial::constant(n, lambda), sum, 1e-6);
  return rep;
}

VerifyReport verify_handelman(const Polynomial& f, double lambda, const std::vector<Polynomial>& g,
                              const std::map<std::vector<int>, double>& coeffs) {
  const std::size_t n = f.dim();
  VerifyReport rep;
  Polynomial sum(n);
  for (const auto& [beta, c] : coeffs) {
    if (beta.size() != g.size()) throw CertificateError("multi-index length differs from the factor count");
    if (c < -1e-10) throw CertificateError("negative Handelman coefficient");
    Polynomial term = Polynomial::constant(n, c);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (beta[i] < 0) throw CertificateError("negative multi-index entry");
      if (g[i].dim() != n) throw CertificateError("factor dimension differs from f");
      term = term * g[i].pow(beta[i]);
    }
    sum += term;
  }
  check_identity(rep, f - Polynomial::constant(n, lambda), sum, 1e-6);
  return rep;
}

VerifyReport verify_circuit(const Polynomial& f, const CircuitInfo& circuit, CircuitDomain domain, double tol) {
  VerifyReport rep;
  if (circuit.lambda.size() != circuit.gammas.size() || circuit.gammas.empty()) {
    throw CertificateError("circuit weights missing");
  }
  ExponentSet support(circuit.gammas.begin(), circuit.gammas.end());
  support.insert(circuit.beta);
  for (const auto& [a, c] : f.terms()) {
    if (!support.count(a) && std::abs(c) > tol) rep.fail("term x^" + to_string(a) + " outside the circuit");
  }
  double prod = 1.0;
  for (std::size_t i = 0; i < circuit.gammas.size(); ++i) {
    const double fg = f.coeff(circuit.gammas[i]);
    if (fg < -tol) rep.fail("negative vertex coefficient at x^" + to_string(circuit.gammas[i]));
    prod *= std::pow(std::max(fg, 0.0) / circuit.lambda[i], circuit.lambda[i]);
  }
  const double fb = f.coeff(circuit.beta);
  const bool signed_beta = domain == CircuitDomain::r_full && !circuit.beta.is_even();
  const double slack = (signed_beta ? -std::abs(fb) : fb) + prod;
  rep.min_eigenvalue = std::min(0.0, slack);
  if (slack < -tol) {
    std::ostringstream ss;
    ss << "circuit condition violated by " << -slack;
    rep.fail(ss.str());
  }
  return rep;
}

VerifyReport verify_certificate(const Certificate& c, const Polynomial& f, const Box& box, const VerifyOptions& opts) {
  const std::size_t n = f.dim();
  if (box.dim() != n) throw CertificateError("box and polynomial dimensions differ");
  VerifyReport rep;
  const Polynomial target = c.sense == Sense::min ? f - Polynomial::constant(n, c.lambda) : Polynomial::constant(n, c.lambda) - f;

  Polynomial sum(n);
  for (std::size_t k = 0; k < c.sos.size(); ++k) {
    const auto& t = c.sos[k];
    const std::string what = "sos term " + std::to_string(k);
    if (static_cast<Eigen::Index>(t.basis.size()) != t.gram.rows()) throw CertificateError(what + ": Gram size differs from its basis");
    check_gram(rep, t.gram, opts.eig_tol, what);
    check_factors(rep, t.factors, box, what);
    Polynomial m = Polynomial::constant(n, 1.0);
    for (const auto& g : t.factors) m = m * g;
    sum += m * gram_form(t.basis, t.gram, n);
  }
  for (std::size_t k = 0; k < c.handelman.size(); ++k) {
    const auto& t = c.handelman[k];
    const std::string what = "handelman term " + std::to_string(k);
    if (t.coeff < -1e-10) rep.fail(what + ": negative coefficient");
    check_factors(rep, t.factors, box, what);
    Polynomial m = Polynomial::constant(n, t.coeff);
    for (const auto& g : t.factors) m = m * g;
    sum += m;
  }
  for (const auto& t : c.vertex) {
    check_vertex(rep, t, box, opts.group_tol);
    sum += t.poly;
  }
  const bool nonneg = std::all_of(box.lower().begin(), box.lower().end(), [](double l) { return l >= 0.0; });
  for (const auto& t : c.circuits) {
    const auto r = verify_circuit(t.poly, t.circuit, nonneg ? CircuitDomain::r_plus : CircuitDomain::r_full,
                                  opts.group_tol * (1.0 + max_abs_coeff(t.poly)));
    for (const auto& why : r.failures) rep.fail("circuit term " + t.label + ": " + why);
    sum += t.poly;
  }
  check_identity(rep, target, sum, opts.coeff_tol);

  if (opts.samples > 0) {
    std::mt19937 gen(opts.seed);
    for (int s = 0; s < opts.samples; ++s) {
      const auto x = sample_point(box, gen);
      const double v = evaluate(target, x);
      if (v < -1e-5) {
        std::ostringstream ss;
        ss << "bound violated at a sample point by " << -v;
        rep.fail(ss.str());
        break;
      }
    }
  }
  return rep;
}

}  // namespace prelax
