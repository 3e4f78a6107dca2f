#include "prelax/models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace prelax {

namespace {

Polynomial mono_minus(const Exponent& a, double l) {
  return Polynomial::monomial(a) - Polynomial::constant(a.dim(), l);
}

Polynomial const_minus_mono(double u, const Exponent& a) {
  return Polynomial::constant(a.dim(), u) - Polynomial::monomial(a);
}

Polynomial product(const std::vector<Polynomial>& factors, std::size_t n) {
  Polynomial p = Polynomial::constant(n, 1.0);
  for (const auto& f : factors) p = p * f;
  return p;
}

/// Graded order: by degree, then by decreasing lexicographic order, so that
/// e_1 precedes e_2.
std::vector<Exponent> graded(const ExponentSet& s) {
  std::vector<Exponent> v(s.begin(), s.end());
  std::stable_sort(v.begin(), v.end(), [](const Exponent& a, const Exponent& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a > b;
  });
  return v;
}

ModelLmi moment_lmi(const std::vector<Exponent>& basis, const Polynomial& g) {
  ModelLmi lmi;
  lmi.size = static_cast<int>(basis.size());
  for (int i = 0; i < lmi.size; ++i) {
    std::vector<AffineExpr> row;
    for (int j = i; j < lmi.size; ++j) row.push_back(AffineExpr::from_polynomial(g.shifted(basis[i] + basis[j])));
    lmi.upper.push_back(std::move(row));
  }
  return lmi;
}

/// Adds L_v(prod(factors) * M_basis) >= 0 as a row when 1x1.
void add_lmi(MomentModel& m, const std::vector<Exponent>& basis, std::vector<Polynomial> factors, std::size_t n) {
  if (basis.empty()) return;
  const Polynomial g = product(factors, n);
  CertOrigin origin{std::move(factors), basis};
  if (basis.size() == 1) {
    m.rows.push_back({AffineExpr::from_polynomial(g.shifted(basis[0] * 2)), false, std::move(origin)});
    return;
  }
  ModelLmi lmi = moment_lmi(basis, g);
  lmi.origin = std::move(origin);
  m.lmis.push_back(std::move(lmi));
}

/// Coordinates of a pattern contained in {0, a_1} x ... x {0, a_n}.
Exponent multilinear_base(const Pattern& p) {
  const std::size_t n = p.dim();
  Exponent base(n);
  for (const auto& e : p.exponents) {
    for (std::size_t i = 0; i < n; ++i) base.set(i, std::max(base[i], e[i]));
  }
  for (const auto& e : p.exponents) {
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] != 0 && e[i] != base[i]) {
        throw ModelError(ModelError::Code::wrong_shape, "pattern is not contained in a multilinear product set");
      }
    }
  }
  return base;
}

Interval checked_range(const Exponent& a, const Box& box, const char* what) {
  const Interval r = monomial_range(a, box);
  if (!r.bounded()) throw ModelError(ModelError::Code::precondition, std::string(what) + " needs bounded monomial ranges");
  return r;
}

/// Four McCormick rows for y1 = x^a, y2 = x^b (disjoint supports), order UU, LU, UL, LL.
void add_mccormick_rows(MomentModel& m, const Exponent& a, const Interval& ra, const Exponent& b,
                        const Interval& rb) {
  const std::vector<std::pair<Polynomial, Polynomial>> pairs = {
      {const_minus_mono(ra.hi, a), const_minus_mono(rb.hi, b)},
      {mono_minus(a, ra.lo), const_minus_mono(rb.hi, b)},
      {const_minus_mono(ra.hi, a), mono_minus(b, rb.lo)},
      {mono_minus(a, ra.lo), mono_minus(b, rb.lo)},
  };
  for (const auto& [f1, f2] : pairs) {
    m.rows.push_back({AffineExpr::from_polynomial(f1 * f2), false, CertOrigin{{f1, f2}, {}}});
  }
}

std::string label_of(const Pattern& p) { return to_string(p.kind) + " " + to_string(p.exponents); }

AffineExpr shift_expr(const AffineExpr& e, const Exponent& eta) {
  AffineExpr out;
  out.aux = e.aux;
  if (e.constant != 0.0) out.add_mono(eta, e.constant);
  for (const auto& [a, c] : e.mono) out.add_mono(a + eta, c);
  return out;
}

bool all_nonnegative(const Box& box) {
  return std::all_of(box.lower().begin(), box.lower().end(), [](double l) { return l >= 0.0; });
}

}  // namespace

AffineExpr AffineExpr::from_polynomial(const Polynomial& p) {
  AffineExpr e;
  for (const auto& [a, c] : p.terms()) {
    if (a.is_zero()) {
      e.constant += c;
    } else {
      e.add_mono(a, c);
    }
  }
  return e;
}

AffineExpr& AffineExpr::add_mono(const Exponent& a, double c) {
  if (a.is_zero()) {
    constant += c;
    return *this;
  }
  const double v = (mono[a] += c);
  if (v == 0.0) mono.erase(a);
  return *this;
}

AffineExpr& AffineExpr::add_aux(int j, double c) {
  const double v = (aux[j] += c);
  if (v == 0.0) aux.erase(j);
  return *this;
}

double AffineExpr::eval(std::span<const double> x, std::span<const double> aux_values) const {
  double s = constant;
  for (const auto& [a, c] : mono) s += c * monomial_value(a, x);
  for (const auto& [j, c] : aux) s += c * aux_values[j];
  return s;
}

void MomentModel::refresh_index() {
  index.clear();
  auto scan = [&](const AffineExpr& e) {
    for (const auto& [a, c] : e.mono) index.insert(a);
  };
  for (const auto& r : rows) scan(r.expr);
  for (const auto& l : lmis) {
    for (const auto& row : l.upper) {
      for (const auto& e : row) scan(e);
    }
  }
  for (const auto& g : gmcs) {
    scan(g.y);
    for (const auto& t : g.t) scan(t);
  }
}

MomentModel build_multilinear_model(const Pattern& p, const Box& box, int cap) {
  const std::size_t n = p.dim();
  if (box.dim() != n) throw InvalidArgument("multilinear model: box dimension mismatch");
  const Exponent base = multilinear_base(p);
  const auto coords = base.support();
  const int k = static_cast<int>(coords.size());
  if (k > cap) {
    throw ModelError(ModelError::Code::pattern_too_wide,
                     "multilinear pattern uses " + std::to_string(k) + " coordinates (cap " + std::to_string(cap) + ")");
  }
  MomentModel m;
  m.label = label_of(p);
  m.kind = PatternKind::multilinear;
  m.check.type = GroupCheck::Type::vertex;
  std::vector<Interval> ranges;
  for (std::size_t i : coords) {
    const Exponent y = Exponent::unit(n, i, base[i]);
    ranges.push_back(checked_range(y, box, "multilinear model"));
    m.check.coords.push_back(y);
  }
  m.check.ranges = ranges;

  const int vertices = 1 << k;
  m.aux_count = vertices;
  AffineExpr sum;
  sum.constant = -1.0;
  for (int q = 0; q < vertices; ++q) sum.add_aux(q, 1.0);
  m.rows.push_back({sum, true, std::nullopt});
  for (const auto& e : p.exponents) {
    if (e.is_zero()) continue;
    AffineExpr row;
    row.add_mono(e, 1.0);
    for (int q = 0; q < vertices; ++q) {
      double val = 1.0;
      for (int t = 0; t < k; ++t) {
        if (e[coords[t]] == 0) continue;
        val *= (q >> t) & 1 ? ranges[t].hi : ranges[t].lo;
      }
      row.add_aux(q, -val);
    }
    m.rows.push_back({row, true, std::nullopt});
  }
  for (int q = 0; q < vertices; ++q) {
    AffineExpr nonneg;
    nonneg.add_aux(q, 1.0);
    m.rows.push_back({nonneg, false, std::nullopt});
  }
  m.refresh_index();
  return m;
}

MomentModel build_mccormick_model(const Pattern& p, const Box& box) {
  const std::size_t n = p.dim();
  const Exponent base = multilinear_base(p);
  const auto coords = base.support();
  if (coords.size() != 2 || !p.exponents.count(base)) {
    throw ModelError(ModelError::Code::wrong_shape, "McCormick model needs a two-coordinate product pattern");
  }
  const Exponent a = Exponent::unit(n, coords[0], base[coords[0]]);
  const Exponent b = Exponent::unit(n, coords[1], base[coords[1]]);
  MomentModel m;
  m.label = label_of(p);
  m.kind = PatternKind::multilinear;
  add_mccormick_rows(m, a, checked_range(a, box, "McCormick model"), b, checked_range(b, box, "McCormick model"));
  m.refresh_index();
  return m;
}

MomentModel build_product_mccormick_model(const Pattern& p, const Box& box) {
  MomentModel m;
  m.label = label_of(p);
  m.kind = PatternKind::multilinear;
  std::vector<Exponent> work(p.exponents.begin(), p.exponents.end());
  ExponentSet done;
  while (!work.empty()) {
    const Exponent e = work.back();
    work.pop_back();
    const auto nz = e.support();
    if (nz.size() < 2 || !done.insert(e).second) continue;
    const Exponent r = Exponent::unit(e.dim(), nz.back(), e[nz.back()]);
    const Exponent q = e - r;
    add_mccormick_rows(m, q, checked_range(q, box, "McCormick model"), r, checked_range(r, box, "McCormick model"));
    work.push_back(q);
  }
  m.refresh_index();
  return m;
}

MomentModel build_bound_factor_model(const std::vector<Polynomial>& g, const ExponentSet& b) {
  if (g.empty()) throw ModelError(ModelError::Code::precondition, "bound-factor model needs factors");
  const std::size_t n = g.front().dim();
  for (const auto& gi : g) {
    if (gi.dim() != n || gi.degree() > 1) {
      throw ModelError(ModelError::Code::precondition, "bound factors must be affine polynomials of one dimension");
    }
  }
  check_dimension(b, g.size());
  MomentModel m;
  m.label = "bound-factor " + to_string(b);
  for (const auto& beta : b) {
    std::vector<Polynomial> factors;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (int t = 0; t < beta[i]; ++t) factors.push_back(g[i]);
    }
    m.rows.push_back({AffineExpr::from_polynomial(product(factors, n)), false, CertOrigin{factors, {}}});
  }
  m.refresh_index();
  return m;
}

MomentModel build_lasserre_model(const std::vector<Exponent>& gamma, int d, const Box& box) {
  if (gamma.empty()) throw ModelError(ModelError::Code::precondition, "Lasserre model needs Gamma columns");
  if (d < 0) throw ModelError(ModelError::Code::precondition, "negative relaxation degree");
  const std::size_t n = gamma.front().dim();
  const std::size_t k = gamma.size();
  gamma_image(gamma, truncated_exponents(k, 0));  // rank check
  auto basis_of = [&](int deg) {
    std::vector<Exponent> out;
    for (const auto& b : graded(truncated_exponents(k, deg))) {
      Exponent e(n);
      for (std::size_t j = 0; j < k; ++j) e = e + gamma[j] * b[j];
      out.push_back(e);
    }
    return out;
  };
  MomentModel m;
  m.kind = k == 1 ? PatternKind::chain : PatternKind::submonoid;
  std::ostringstream label;
  label << "lasserre d=" << d << " Gamma=[";
  for (std::size_t j = 0; j < k; ++j) label << (j ? "," : "") << to_string(gamma[j]);
  label << "]";
  m.label = label.str();

  add_lmi(m, basis_of(d), {}, n);
  if (d >= 1) {
    const auto loc = basis_of(d - 1);
    for (const auto& g : gamma) {
      const Interval r = monomial_range(g, box);
      std::vector<Polynomial> factors;
      if (std::isfinite(r.lo)) factors.push_back(mono_minus(g, r.lo));
      if (std::isfinite(r.hi)) factors.push_back(const_minus_mono(r.hi, g));
      if (factors.empty()) continue;
      add_lmi(m, loc, factors, n);
    }
  }
  m.refresh_index();
  return m;
}

MomentModel build_dense_moment_model(const std::vector<Polynomial>& g, const std::vector<ExponentSet>& b_list) {
  if (g.size() != b_list.size()) throw ModelError(ModelError::Code::precondition, "one basis per polynomial required");
  MomentModel m;
  m.label = "dense moment";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (b_list[i].empty()) continue;
    check_dimension(b_list[i], g[i].dim());
    std::vector<Polynomial> factors;
    if (!(g[i] == Polynomial::constant(g[i].dim(), 1.0))) factors.push_back(g[i]);
    add_lmi(m, graded(b_list[i]), factors, g[i].dim());
  }
  m.refresh_index();
  return m;
}

MomentModel build_shifted_model(const Exponent& eta, const MomentModel& base, const Box& box) {
  if (eta.is_zero()) return base;
  for (const auto& a : base.index) {
    if (!a.disjoint_support(eta)) {
      throw ModelError(ModelError::Code::support_overlap,
                       "shift " + to_string(eta) + " shares variables with " + to_string(a));
    }
  }
  const Interval r = monomial_range(eta, box);
  if (r.lo < 0.0) {
    throw ModelError(ModelError::Code::precondition, "shift monomial " + to_string(eta) + " can be negative on the box");
  }
  MomentModel m;
  m.label = "shift " + to_string(eta) + " of " + base.label;
  m.kind = base.kind == PatternKind::chain ? PatternKind::shifted_chain : base.kind;
  m.aux_count = base.aux_count;
  m.check = base.check;
  if (m.check.type == GroupCheck::Type::vertex) m.check.shift = base.check.shift ? *base.check.shift + eta : eta;
  m.warnings = base.warnings;
  const Polynomial xeta = Polynomial::monomial(eta);
  auto shift_origin = [&](const std::optional<CertOrigin>& o) -> std::optional<CertOrigin> {
    if (!o) return std::nullopt;
    CertOrigin s = *o;
    s.factors.push_back(xeta);
    return s;
  };
  for (const auto& row : base.rows) m.rows.push_back({shift_expr(row.expr, eta), row.equality, shift_origin(row.origin)});
  for (const auto& lmi : base.lmis) {
    ModelLmi s;
    s.size = lmi.size;
    for (const auto& row : lmi.upper) {
      std::vector<AffineExpr> out;
      for (const auto& e : row) out.push_back(shift_expr(e, eta));
      s.upper.push_back(std::move(out));
    }
    s.origin = shift_origin(lmi.origin);
    m.lmis.push_back(std::move(s));
  }
  for (const auto& g : base.gmcs) {
    ModelGmc s;
    s.y = shift_expr(g.y, eta);
    for (const auto& t : g.t) s.t.push_back(shift_expr(t, eta));
    s.lambda = g.lambda;
    m.gmcs.push_back(std::move(s));
  }
  if (std::isfinite(r.lo)) {
    m.rows.push_back({AffineExpr::from_polynomial(mono_minus(eta, r.lo)), false, CertOrigin{{mono_minus(eta, r.lo)}, {}}});
  }
  if (std::isfinite(r.hi)) {
    m.rows.push_back(
        {AffineExpr::from_polynomial(const_minus_mono(r.hi, eta)), false, CertOrigin{{const_minus_mono(r.hi, eta)}, {}}});
  }
  m.refresh_index();
  return m;
}

MomentModel build_circuit_model(const Pattern& p, CircuitDomain domain) {
  const CircuitInfo* c = p.circuit();
  if (!c) throw ModelError(ModelError::Code::precondition, "circuit model needs circuit metadata");
  if (domain == CircuitDomain::r_full) {
    for (const auto& g : c->gammas) {
      if (!g.is_even()) throw ModelError(ModelError::Code::precondition, "circuit vertices must be even on R^n");
    }
  }
  MomentModel m;
  m.label = label_of(p);
  m.kind = p.kind;
  m.check.type = GroupCheck::Type::circuit;
  m.check.circuit = *c;
  for (const auto& g : c->gammas) {
    m.rows.push_back({AffineExpr{}.add_mono(g, 1.0), false, CertOrigin{{Polynomial::monomial(g)}, {}}});
  }
  ModelGmc gmc;
  gmc.y.add_mono(c->beta, 1.0);
  for (const auto& g : c->gammas) gmc.t.push_back(AffineExpr{}.add_mono(g, 1.0));
  gmc.lambda = c->lambda;
  if (domain == CircuitDomain::r_plus || c->beta.is_even()) {
    m.rows.push_back({AffineExpr{}.add_mono(c->beta, 1.0), false, CertOrigin{{Polynomial::monomial(c->beta)}, {}}});
    m.gmcs.push_back(gmc);
  } else {
    m.check.signed_beta = true;
    m.gmcs.push_back(gmc);
    gmc.y = AffineExpr{}.add_mono(c->beta, -1.0);
    m.gmcs.push_back(gmc);
  }
  m.refresh_index();
  return m;
}

MomentModel build_sparse_sos_moment_model(const std::vector<ExponentSet>& b_list,
                                          const std::vector<Exponent>& multipliers) {
  if (b_list.empty()) throw ModelError(ModelError::Code::precondition, "sparse SOS model needs at least one block");
  if (!multipliers.empty() && multipliers.size() != b_list.size()) {
    throw ModelError(ModelError::Code::precondition, "one multiplier per block required");
  }
  MomentModel m;
  m.label = "sparse sos";
  m.kind = PatternKind::sos_block;
  for (std::size_t i = 0; i < b_list.size(); ++i) {
    if (b_list[i].empty()) continue;
    const std::size_t n = b_list[i].begin()->dim();
    std::vector<Polynomial> factors;
    if (!multipliers.empty() && !multipliers[i].is_zero()) factors.push_back(Polynomial::monomial(multipliers[i]));
    add_lmi(m, graded(b_list[i]), factors, n);
  }
  m.refresh_index();
  return m;
}

namespace {

/// Exponents in p that are all multiples of one primitive vector.
std::optional<std::pair<Exponent, int>> as_chain(const ExponentSet& p) {
  Exponent prim;
  int top = 0;
  for (const auto& e : p) {
    if (e.is_zero()) continue;
    int g = 0;
    for (int v : e.entries()) g = std::gcd(g, v);
    std::vector<int> q = e.entries();
    for (int& v : q) v /= g;
    const Exponent cand(q);
    if (prim.dim() == 0) prim = cand;
    if (!(cand == prim)) return std::nullopt;
    top = std::max(top, g);
  }
  if (prim.dim() == 0) return std::nullopt;
  return std::make_pair(prim, top);
}

MomentModel hull_fallback(const Pattern& p, const Box& box) {
  MomentModel m;
  if (auto chain = as_chain(p.exponents)) {
    m = build_lasserre_model({chain->first}, (chain->second + 1) / 2, box);
  } else {
    std::set<std::size_t> vars;
    int deg = 0;
    for (const auto& e : p.exponents) {
      for (std::size_t i : e.support()) vars.insert(i);
      deg = std::max(deg, e.degree());
    }
    std::vector<Exponent> cols;
    for (std::size_t i : vars) cols.push_back(Exponent::unit(p.dim(), i));
    if (cols.empty()) {
      m.label = label_of(p);
      return m;
    }
    m = build_lasserre_model(cols, (deg + 1) / 2, box);
  }
  m.label = label_of(p) + " via " + m.label;
  return m;
}

}  // namespace

MomentModel build_pattern_model(const Pattern& p, const Box& box, const ModelPolicy& policy) {
  if (p.dim() != box.dim()) throw InvalidArgument("pattern and box dimensions differ");
  switch (p.kind) {
    case PatternKind::multilinear: {
      const int k = static_cast<int>(multilinear_base(p).support().size());
      if (policy.multilinear == ModelPolicy::Multilinear::mccormick) {
        if (k == 2 && p.exponents.count(multilinear_base(p))) return build_mccormick_model(p, box);
        return build_product_mccormick_model(p, box);
      }
      if (k <= policy.vertex_max_coords) return build_multilinear_model(p, box, policy.vertex_cap);
      return build_product_mccormick_model(p, box);
    }
    case PatternKind::chain:
    case PatternKind::submonoid:
    case PatternKind::shifted_chain: {
      const GammaInfo* g = p.gamma();
      if (!g || g->half_degree < 0) break;
      MomentModel base = build_lasserre_model(g->columns, g->half_degree, box);
      base.label = label_of(p);
      if (!p.shift || p.shift->is_zero()) return base;
      if (monomial_range(*p.shift, box).lo < 0.0) {
        if (!policy.generic_hull_fallback) {
          throw ModelError(ModelError::Code::precondition, "shift monomial can be negative on the box");
        }
        MomentModel m = hull_fallback(p, box);
        m.warnings.push_back("shift " + to_string(*p.shift) + " can be negative; used the dense fallback");
        return m;
      }
      MomentModel m = build_shifted_model(*p.shift, base, box);
      m.label = label_of(p);
      return m;
    }
    case PatternKind::circuit:
    case PatternKind::sdsos:
      return build_circuit_model(p, all_nonnegative(box) ? CircuitDomain::r_plus : CircuitDomain::r_full);
    case PatternKind::sos_block: {
      const SosBlockInfo* s = p.sos_block();
      if (!s) break;
      MomentModel m = build_sparse_sos_moment_model({ExponentSet(s->basis.begin(), s->basis.end())}, {s->multiplier});
      m.label = label_of(p);
      return m;
    }
    case PatternKind::generic:
      break;
  }
  if (!policy.generic_hull_fallback) {
    throw ModelError(ModelError::Code::no_route, "no model for pattern " + label_of(p));
  }
  return hull_fallback(p, box);
}

std::vector<double> lift_auxiliaries(const MomentModel& m, std::span<const double> x, const Box& box) {
  std::vector<double> aux(m.aux_count, 0.0);
  if (m.check.type != GroupCheck::Type::vertex || m.aux_count == 0) return aux;
  (void)box;
  const std::size_t k = m.check.coords.size();
  std::vector<double> t(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Interval r = m.check.ranges[i];
    const double y = monomial_value(m.check.coords[i], x);
    t[i] = r.hi > r.lo ? std::clamp((y - r.lo) / (r.hi - r.lo), 0.0, 1.0) : 0.0;
  }
  const double scale = m.check.shift ? monomial_value(*m.check.shift, x) : 1.0;
  for (int q = 0; q < m.aux_count; ++q) {
    double w = scale;
    for (std::size_t i = 0; i < k; ++i) w *= (q >> i) & 1 ? t[i] : 1.0 - t[i];
    aux[q] = w;
  }
  return aux;
}

double model_violation(const MomentModel& m, std::span<const double> x, std::span<const double> aux) {
  double worst = 0.0;
  for (const auto& r : m.rows) {
    const double v = r.expr.eval(x, aux);
    worst = std::max(worst, r.equality ? std::abs(v) : -v);
  }
  for (const auto& l : m.lmis) {
    Eigen::MatrixXd mat(l.size, l.size);
    for (int i = 0; i < l.size; ++i) {
      for (int j = 0; j < l.size; ++j) mat(i, j) = l.at(i, j).eval(x, aux);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues().minCoeff());
  }
  for (const auto& g : m.gmcs) {
    double prod = 1.0;
    for (std::size_t i = 0; i < g.t.size(); ++i) {
      const double t = g.t[i].eval(x, aux);
      worst = std::max(worst, -t);
      prod *= std::pow(std::max(t, 0.0), g.lambda[i]);
    }
    worst = std::max(worst, g.y.eval(x, aux) - prod);
  }
  return worst;
}

namespace {

std::string expr_text(const AffineExpr& e) {
  std::ostringstream os;
  bool first = true;
  auto term = [&](double c, const std::string& name) {
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    const double a = std::abs(c);
    if (name.empty()) {
      os << a;
    } else {
      if (a != 1.0) os << a << "*";
      os << name;
    }
    first = false;
  };
  if (e.constant != 0.0) term(e.constant, "");
  for (const auto& [a, c] : e.mono) term(c, "v" + to_string(a));
  for (const auto& [j, c] : e.aux) term(c, "w" + std::to_string(j));
  if (first) os << "0";
  return os.str();
}

}  // namespace

std::string dump(const MomentModel& m) {
  std::ostringstream os;
  os << "model " << m.label << " (" << m.aux_count << " auxiliaries)\n";
  for (const auto& r : m.rows) os << "  " << expr_text(r.expr) << (r.equality ? " == 0" : " >= 0") << "\n";
  for (const auto& l : m.lmis) {
    os << "  [";
    for (int i = 0; i < l.size; ++i) {
      os << (i ? "; " : "");
      for (int j = 0; j < l.size; ++j) os << (j ? ", " : "") << expr_text(l.at(i, j));
    }
    os << "] >= 0\n";
  }
  for (const auto& g : m.gmcs) {
    os << "  " << expr_text(g.y) << " <= ";
    for (std::size_t i = 0; i < g.t.size(); ++i) os << (i ? " * " : "") << "(" << expr_text(g.t[i]) << ")^" << g.lambda[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace prelax
