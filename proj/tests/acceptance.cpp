// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "prelax/bench.hpp"
#include "prelax/certificate.hpp"

using namespace prelax;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

struct Solved {
  std::string label;
  Polynomial f;
  Box box;
  RelaxationResult relax;
};

// Optimal solves from criteria 3-6, checked again by criterion 7.
std::vector<Solved> pool;

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

AffineExpr ex(std::vector<std::pair<Exponent, double>> terms, double c = 0.0) {
  AffineExpr e;
  e.constant = c;
  for (const auto& [a, v] : terms) e.add_mono(a, v);
  return e;
}

bool has_row(const MomentModel& m, const AffineExpr& e) {
  return std::any_of(m.rows.begin(), m.rows.end(), [&](const ModelRow& r) { return !r.equality && r.expr == e; });
}

std::vector<double> sample_point(const Box& box, std::mt19937& gen) {
  std::vector<double> x(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const double lo = std::isfinite(box.lower()[i]) ? box.lower()[i] : -3.0;
    const double hi = std::isfinite(box.upper()[i]) ? box.upper()[i] : lo + 3.0 - std::min(lo, 0.0);
    x[i] = std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  return x;
}

double lifted_violation(const MomentModel& m, const Box& box, int samples, std::mt19937& gen) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = sample_point(box, gen);
    worst = std::max(worst, model_violation(m, x, lift_auxiliaries(m, x, box)));
  }
  return worst;
}

bool keep(const std::string& label, const Polynomial& f, const Box& box, const RelaxationResult& r) {
  if (r.result.status != SolveStatus::optimal) return false;
  pool.push_back({label, f, box, r});
  return true;
}

// --- 1 ----------------------------------------------------------------------

Outcome worked_examples() {
  Outcome o;
  {
    const auto m = build_mccormick_model(multilinear_pattern({1, 1}), Box({-1, -1}, {1, 1}));
    const std::vector<AffineExpr> want = {ex({{{1, 0}, -1}, {{0, 1}, -1}, {{1, 1}, 1}}, 1),
                                          ex({{{1, 0}, 1}, {{0, 1}, -1}, {{1, 1}, -1}}, 1),
                                          ex({{{1, 0}, -1}, {{0, 1}, 1}, {{1, 1}, -1}}, 1),
                                          ex({{{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 1}}, 1)};
    if (m.rows.size() != 4 || !m.lmis.empty()) o.fail("McCormick: expected exactly four rows");
    for (const auto& w : want)
      if (!has_row(m, w)) o.fail("McCormick: missing row " + std::to_string(&w - want.data()));
  }
  {
    const auto m = build_lasserre_model({{2, 0}, {0, 2}}, 1, Box({-1, -2}, {1, 2}));
    if (m.lmis.size() != 1 || m.lmis[0].size != 3) {
      o.fail("Lasserre: expected one 3x3 moment LMI");
    } else {
      const auto& l = m.lmis[0];
      const bool ok = l.at(0, 0) == ex({}, 1) && l.at(0, 1) == ex({{{2, 0}, 1}}) && l.at(0, 2) == ex({{{0, 2}, 1}}) &&
                      l.at(1, 1) == ex({{{4, 0}, 1}}) && l.at(1, 2) == ex({{{2, 2}, 1}}) &&
                      l.at(2, 2) == ex({{{0, 4}, 1}});
      if (!ok) o.fail("Lasserre: moment matrix entries differ");
    }
    if (m.rows.size() != 2 || !has_row(m, ex({{{2, 0}, 1}, {{4, 0}, -1}})) ||
        !has_row(m, ex({{{0, 2}, 4}, {{0, 4}, -1}})))
      o.fail("Lasserre: localizers differ");
  }
  {
    const Box box({0, 0, 1}, {1, 1, 2});
    const auto m = build_shifted_model({0, 0, 1}, build_mccormick_model(multilinear_pattern({1, 1, 0}), box), box);
    const std::vector<AffineExpr> want = {ex({{{1, 1, 1}, 1}}),
                                          ex({{{1, 0, 1}, 1}, {{1, 1, 1}, -1}}),
                                          ex({{{0, 1, 1}, 1}, {{1, 1, 1}, -1}}),
                                          ex({{{0, 0, 1}, 1}, {{1, 0, 1}, -1}, {{0, 1, 1}, -1}, {{1, 1, 1}, 1}}),
                                          ex({{{0, 0, 1}, 1}}, -1),
                                          ex({{{0, 0, 1}, -1}}, 2)};
    if (m.rows.size() != want.size()) o.fail("shifted: row count " + std::to_string(m.rows.size()));
    for (const auto& w : want)
      if (!has_row(m, w)) o.fail("shifted: missing row " + std::to_string(&w - want.data()));
  }
  if (o.pass) o.detail = "McCormick 4 rows, Lasserre 3x3 LMI + 2 localizers, shifted 4 rows + 1 <= v001 <= 2";
  return o;
}

// --- 2 ----------------------------------------------------------------------

Outcome lifted_points() {
  Outcome o;
  std::mt19937 gen(2);
  std::vector<std::pair<std::string, std::pair<MomentModel, Box>>> models;
  auto add = [&](const std::string& name, MomentModel m, const Box& box) { models.push_back({name, {std::move(m), box}}); };

  const std::vector<Box> boxes = {Box::unit(3), Box({-1, -2, 0.5}, {1, 1, 2}), Box({-1, -1, -1}, {2, 0.5, 1})};
  const ExponentSet a3 = {{1, 2, 0}, {2, 0, 1}, {0, 3, 2}, {1, 1, 1}, {4, 0, 0}, {0, 2, 2}};
  Polynomial f3(3);
  for (const auto& e : a3) f3.add_term(e, 1.0);
  ModelPolicy mc;
  mc.multilinear = ModelPolicy::Multilinear::mccormick;
  for (const auto& box : boxes) {
    const std::vector<std::pair<std::string, PatternFamily>> fams = {
        {"M", multilinear_family(a3)}, {"C", chain_family(a3)},     {"H", h_family(a3)},
        {"T", truncated_submonoid_family(a3)}, {"MC", mc_family(a3)}, {"tree", expression_tree_family(f3)}};
    for (const auto& [name, fam] : fams)
      for (const auto& p : fam.patterns) add(name, build_pattern_model(p, box), box);
    for (const auto& p : multilinear_family(a3).patterns) add("McCormick", build_pattern_model(p, box, mc), box);
    add("product McCormick", build_product_mccormick_model(multilinear_pattern({1, 2, 1}), box), box);
    add("Lasserre", build_lasserre_model({{1, 1, 0}, {0, 0, 1}}, 2, box), box);
    const auto x = Polynomial::variable(3, 0), one = Polynomial::constant(3, 1);
    const double l0 = box.lower()[0], u0 = box.upper()[0];
    const Polynomial g0 = x - one * l0, g1 = one * u0 - x;
    add("bound factor", build_bound_factor_model({g0, g1}, truncated_exponents(2, 3)), box);
    add("dense moment", build_dense_moment_model({one, g0 * g1}, {truncated_exponents(3, 2), truncated_exponents(3, 1)}), box);
  }
  for (const auto& p : shifted_chain_family(a3).patterns) add("S", build_pattern_model(p, Box::unit(3)), Box::unit(3));
  const Box shifted_box({-1, 0.5, 0}, {1, 2, 1});
  add("shifted Lasserre",
      build_shifted_model({0, 1, 1}, build_lasserre_model({{1, 0, 0}}, 2, shifted_box), shifted_box), shifted_box);

  const Box r3 = Box::whole_space(3), p2 = Box::nonnegative_orthant(2);
  add("circuit", build_circuit_model(make_circuit({2, 2, 2}, {{0, 0, 0}, {8, 0, 0}, {0, 8, 0}, {0, 0, 8}}), CircuitDomain::r_full), r3);
  add("circuit odd", build_circuit_model(make_circuit({1, 1, 0}, {{0, 0, 0}, {4, 0, 0}, {0, 2, 0}}), CircuitDomain::r_full), r3);
  add("circuit R+", build_circuit_model(make_circuit({1, 1}, {{0, 0}, {3, 0}, {0, 3}}), CircuitDomain::r_plus), p2);
  add("SDSOS even", build_circuit_model(make_sdsos({2, 0}, {0, 2}), CircuitDomain::r_full), Box::whole_space(2));
  add("SDSOS odd", build_circuit_model(make_sdsos({1, 0}, {0, 1}), CircuitDomain::r_full), Box::whole_space(2));
  const ExponentSet at = {{0, 0}, {4, 0}, {0, 4}, {1, 1}, {2, 1}};
  for (const auto& p : tssos_family(at, truncated_exponents(2, 2)).patterns)
    add("tssos", build_pattern_model(p, Box::whole_space(2)), Box::whole_space(2));
  for (const auto& p : univariate_sparse_family({{0}, {3}, {4}, {7}, {10}}).patterns)
    add("univariate sparse", build_pattern_model(p, Box::nonnegative_orthant(1)), Box::nonnegative_orthant(1));

  double worst = 0.0;
  for (const auto& [name, mb] : models) {
    const double v = lifted_violation(mb.first, mb.second, 200, gen);
    worst = std::max(worst, v);
    if (v > 1e-9) o.fail(name + fmt(": violation %.3g", v));
  }
  if (o.pass) o.detail = std::to_string(models.size()) + " models x 200 points, worst violation " + fmt("%.2g", worst);
  return o;
}

// --- 3 ----------------------------------------------------------------------

Outcome soundness() {
  Outcome o;
  const char* methods[] = {"M", "C", "H", "T"};
  double worst = -1e300;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + (i / 4) % 3;
    const int d = 2 + (i / 12) % 5;
    const std::string tag = std::string(i % 8 < 4 ? "dense" : "S") + "(" + std::to_string(n) + "," + std::to_string(d) + ")";
    const Instance inst = gen_instance(tag, 1000 + i);
    const std::string label = inst.id + ":" + methods[i % 4];
    RelaxationResult r;
    try {
      r = relax_instance(inst, methods[i % 4], Sense::min);
    } catch (const std::exception& e) {
      o.fail(label + ": " + e.what());
      continue;
    }
    if (!keep(label, inst.f, inst.box, r)) {
      o.fail(label + ": status " + to_string(r.result.status));
      continue;
    }
    const double bf = brute_force_min(inst.f, inst.box).value;
    worst = std::max(worst, r.value - bf);
    if (r.value > bf + 1e-6) o.fail(label + fmt(": relaxation %.9g above brute force %.9g", r.value, bf));
  }
  if (o.pass) o.detail = "100 instances, max(relaxation - brute force) = " + fmt("%.3g", worst);
  return o;
}

// --- 4 ----------------------------------------------------------------------

Outcome exactness() {
  Outcome o;
  std::mt19937 gen(4);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst_a = 0.0, worst_b = 0.0;
  for (int s = 0; s < 20; ++s) {
    const int d = 1 + s % 6;
    const int half = (d + 1) / 2;
    Polynomial f(1);
    for (int k = 0; k <= d; ++k) f.add_term(Exponent{k}, u(gen));
    const Box box = Box::unit(1);
    const PatternFamily fam{1, {chain_pattern({1}, half)}};
    const auto r = solve_relaxation(assemble_relaxation(f, fam, box));
    const std::string label = "univariate d=" + std::to_string(d) + " sample " + std::to_string(s);
    if (!keep(label, f, box, r)) {
      o.fail(label + ": status " + to_string(r.result.status));
      continue;
    }
    const double bf = brute_force_min(f, box).value;
    worst_a = std::max(worst_a, std::abs(r.value - bf));
    if (std::abs(r.value - bf) > 1e-5) o.fail(label + fmt(": %.9g vs %.9g", r.value, bf));
  }
  ModelPolicy mc;
  mc.multilinear = ModelPolicy::Multilinear::mccormick;
  for (int s = 0; s < 20; ++s) {
    Polynomial f(2);
    f.add_term({1, 1}, u(gen));
    f.add_term({1, 0}, u(gen));
    f.add_term({0, 1}, u(gen));
    f.add_term({0, 0}, u(gen));
    const Box box = Box::unit(2);
    const auto r = solve_relaxation(assemble_relaxation(f, multilinear_family(f.support()), box, mc));
    const std::string label = "bilinear sample " + std::to_string(s);
    if (!keep(label, f, box, r)) {
      o.fail(label + ": status " + to_string(r.result.status));
      continue;
    }
    const double bf = brute_force_min(f, box).value;
    worst_b = std::max(worst_b, std::abs(r.value - bf));
    if (std::abs(r.value - bf) > 1e-6) o.fail(label + fmt(": %.9g vs %.9g", r.value, bf));
  }
  if (o.pass) o.detail = fmt("univariate max gap %.2g, bilinear max gap %.2g", worst_a, worst_b);
  return o;
}

// --- 5 ----------------------------------------------------------------------

// Infimum over [0, inf) of a univariate polynomial with positive leading
// coefficient: compare f(0) with f at the positive real roots of f'.
double infimum_r_plus(const std::vector<double>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  auto f = [&](double x) {
    double v = 0.0;
    for (int k = d; k >= 0; --k) v = v * x + c[k];
    return v;
  };
  std::vector<double> dc(d);
  for (int k = 1; k <= d; ++k) dc[k - 1] = k * c[k];
  auto df = [&](double x) {
    double v = 0.0;
    for (int k = d - 1; k >= 0; --k) v = v * x + dc[k];
    return v;
  };
  auto ddf = [&](double x) {
    double v = 0.0;
    for (int k = d - 1; k >= 1; --k) v = v * x + k * dc[k];
    return v;
  };
  // drop the x^m factor of f' and build the companion matrix of the rest
  int lo = 0;
  while (lo < d - 1 && dc[lo] == 0.0) ++lo;
  const int m = d - 1 - lo;
  double best = f(0.0);
  if (m == 0) return best;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -dc[lo + i] / dc[d - 1];
  const Eigen::VectorXcd roots = Eigen::EigenSolver<Eigen::MatrixXd>(comp, false).eigenvalues();
  for (const auto& z : roots) {
    if (std::abs(z.imag()) > 1e-6 * (1 + std::abs(z)) || z.real() <= 0) continue;
    double x = z.real();
    for (int it = 0; it < 50; ++it) {
      const double h = ddf(x);
      if (h == 0.0) break;
      const double step = df(x) / h;
      x = std::max(x - step, 0.0);
      if (std::abs(step) <= 1e-15 * (1 + x)) break;
    }
    best = std::min(best, f(x));
  }
  return best;
}

Outcome univariate_sparse() {
  Outcome o;
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const int k = 1 + s % 2;
    const int d = std::uniform_int_distribution<int>(2 * k + 1, 12)(gen);
    std::vector<int> pick(d - 1);
    std::iota(pick.begin(), pick.end(), 1);
    std::shuffle(pick.begin(), pick.end(), gen);
    pick.resize(2 * k - 1);
    pick.push_back(d);
    pick.push_back(0);
    std::vector<double> coef(d + 1, 0.0);
    ExponentSet a;
    Polynomial f(1);
    for (int e : pick) {
      coef[e] = e == d ? std::abs(u(gen)) + 0.1 : u(gen);
      a.insert(Exponent{e});
      f.add_term(Exponent{e}, coef[e]);
    }
    const Box box = Box::nonnegative_orthant(1);
    const std::string label = "univariate sparse sample " + std::to_string(s);
    RelaxationResult r;
    try {
      r = solve_relaxation(assemble_relaxation(f, univariate_sparse_family(a), box));
    } catch (const std::exception& e) {
      o.fail(label + ": " + e.what());
      continue;
    }
    if (!keep(label, f, box, r)) {
      o.fail(label + ": status " + to_string(r.result.status));
      continue;
    }
    const double inf = infimum_r_plus(coef);
    worst = std::max(worst, std::abs(r.value - inf));
    if (std::abs(r.value - inf) > 1e-5) o.fail(label + fmt(": %.9g vs infimum %.9g", r.value, inf));
  }
  if (o.pass) o.detail = fmt("20 samples, max gap to the root-finding infimum %.2g", worst);
  return o;
}

// --- 6 ----------------------------------------------------------------------

Outcome tssos_equivalence() {
  Outcome o;
  std::mt19937 gen(6);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const std::size_t n = 1 + s % 2;
    const ExponentSet b = truncated_exponents(n, 2);
    Polynomial f(n);
    ExponentSet a;
    for (const auto& e : truncated_exponents(n, 4)) {
      const bool corner = e.is_zero() || (e.degree() == 4 && e.support().size() == 1);
      if (corner) {
        f.add_term(e, e.is_zero() ? u(gen) : 1.0 + std::abs(u(gen)));
      } else if (gen() % 2) {
        f.add_term(e, e.degree() == 4 ? 0.5 * u(gen) : u(gen));
      } else {
        continue;
      }
      a.insert(e);
    }
    const Box box = Box::whole_space(n);
    const std::string label = "tssos sample " + std::to_string(s);
    const auto sparse = solve_relaxation(assemble_models(f, {build_sparse_sos_moment_model(tssos_partition(a, b).blocks)}, box));
    const auto dense = solve_relaxation(assemble_models(f, {build_sparse_sos_moment_model({b})}, box));
    const bool ok_s = keep(label + " sparse", f, box, sparse);
    const bool ok_d = keep(label + " dense", f, box, dense);
    if (!ok_s || !ok_d) {
      o.fail(label + ": status " + to_string(sparse.result.status) + "/" + to_string(dense.result.status));
      continue;
    }
    worst = std::max(worst, std::abs(sparse.value - dense.value));
    if (std::abs(sparse.value - dense.value) > 1e-6) o.fail(label + fmt(": sparse %.9g dense %.9g", sparse.value, dense.value));
  }
  if (o.pass) o.detail = fmt("20 samples, max |sparse - dense| %.2g", worst);
  return o;
}

// --- 7 ----------------------------------------------------------------------

Outcome duality() {
  Outcome o;
  double worst_gap = 0.0, worst_lambda = 0.0;
  for (const auto& s : pool) {
    const auto& res = s.relax.result;
    const double gap = std::abs(res.primal_value - res.dual_value);
    worst_gap = std::max(worst_gap, gap / (1 + std::abs(res.primal_value)));
    if (gap > 1e-6 * (1 + std::abs(res.primal_value))) o.fail(s.label + fmt(": duality gap %.3g", gap));
    try {
      const Certificate c = extract_certificate(s.relax.program, res);
      VerifyOptions opts;
      opts.samples = 200;
      const VerifyReport rep = verify_certificate(c, s.f, s.box, opts);
      if (!rep.pass) o.fail(s.label + ": " + rep.summary());
      worst_lambda = std::max(worst_lambda, std::abs(c.lambda - s.relax.value));
      if (std::abs(c.lambda - s.relax.value) > 1e-6) o.fail(s.label + fmt(": lambda %.9g vs value %.9g", c.lambda, s.relax.value));
    } catch (const std::exception& e) {
      o.fail(s.label + ": " + e.what());
    }
  }
  if (o.pass) o.detail = std::to_string(pool.size()) + " solves, max relative gap " + fmt("%.2g", worst_gap) +
                         ", max |lambda - value| " + fmt("%.2g", worst_lambda);
  return o;
}

// --- 8 ----------------------------------------------------------------------

double eval_v(const AffineExpr& e, const std::map<Exponent, double>& v) {
  double s = e.constant;
  for (const auto& [a, c] : e.mono) s += c * v.at(a);
  return s;
}

double gmc_violation(const MomentModel& m, const std::map<Exponent, double>& v) {
  double worst = 0.0;
  for (const auto& r : m.rows) worst = std::max(worst, r.equality ? std::abs(eval_v(r.expr, v)) : -eval_v(r.expr, v));
  for (const auto& g : m.gmcs) {
    double prod = 1.0;
    for (std::size_t i = 0; i < g.t.size(); ++i) {
      const double t = eval_v(g.t[i], v);
      worst = std::max(worst, -t);
      prod *= std::pow(std::max(t, 0.0), g.lambda[i]);
    }
    worst = std::max(worst, eval_v(g.y, v) - prod);
  }
  return worst;
}

Outcome circuits() {
  Outcome o;
  Polynomial f(1);
  f.add_term({4}, 1.0);
  f.add_term({2}, -2.0);
  f.add_term({0}, 1.0);
  const Pattern c = make_circuit({2}, {{0}, {4}});
  const auto rep = verify_circuit(f, *c.circuit(), CircuitDomain::r_full);
  const auto& ci = *c.circuit();
  double prod = 1.0;
  for (std::size_t i = 0; i < ci.gammas.size(); ++i) prod *= std::pow(f.coeff(ci.gammas[i]) / ci.lambda[i], ci.lambda[i]);
  const double slack = f.coeff(ci.beta) + prod;
  if (!rep.pass || std::abs(slack) > 1e-9 || std::abs(rep.min_eigenvalue) > 1e-9)
    o.fail(fmt("(x^2-1)^2: slack %.3g", slack));

  std::mt19937 gen(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int accepted = 0, rejected = 0;
  for (bool odd : {false, true}) {
    const Pattern p = odd ? make_sdsos({1, 0}, {0, 1}) : make_sdsos({2, 0}, {0, 2});
    const auto m = build_circuit_model(p, CircuitDomain::r_full);
    const Box box({-2, -2}, {2, 2});
    for (int s = 0; s < 500; ++s) {
      const auto x = sample_point(box, gen);
      if (model_violation(m, x, lift_auxiliaries(m, x, box)) <= 1e-9) ++accepted;
    }
    const auto& info = *p.circuit();
    for (int s = 0; s < 500; ++s) {
      std::map<Exponent, double> v;
      for (const auto& e : m.index) v[e] = 0.0;
      double bound = 1.0;
      for (std::size_t i = 0; i < info.gammas.size(); ++i) {
        const double t = 1.0 - unit(gen);  // (0, 1]
        v[info.gammas[i]] = t;
        bound *= std::pow(t, info.lambda[i]);
      }
      const double sign = odd && (s % 2) ? -1.0 : 1.0;
      v[info.beta] = sign * 1.1 * bound;
      if (gmc_violation(m, v) > 1e-12) ++rejected;
    }
  }
  if (accepted != 1000) o.fail(std::to_string(1000 - accepted) + " lifted points rejected");
  if (rejected != 1000) o.fail(std::to_string(1000 - rejected) + " perturbations accepted");
  if (o.pass) o.detail = fmt("(x^2-1)^2 slack %.1g; 1000/1000 lifts accepted, 1000/1000 perturbations rejected", slack);
  return o;
}

// --- 9 ----------------------------------------------------------------------

Outcome figure_ordering() {
  Outcome o;
  BenchConfig cfg;
  cfg.families = {"A5", "A6"};
  cfg.methods = {"M", "C"};
  cfg.samples = 20;
  const BenchOutput out = run_benchmark(cfg);
  std::map<std::pair<std::string, std::string>, BenchSummary> med;
  for (const auto& s : out.summary) med[{s.family, s.method}] = s;
  std::ostringstream d;
  for (const std::string fam : {"A5", "A6"}) {
    const auto& m = med[{fam, "M"}];
    const auto& c = med[{fam, "C"}];
    if (m.count != 20 || c.count != 20) {
      o.fail(fam + ": only " + std::to_string(std::min(m.count, c.count)) + " of 20 seeds solved in both senses");
      continue;
    }
    if (c.median > m.median) o.fail(fam + fmt(": median triv(C) %.4g > median triv(M) %.4g", c.median, m.median));
    if (fam == "A5" && c.median > 0.5 * m.median) o.fail(fmt("A5: median triv(C) %.4g > half of median triv(M) %.4g", c.median, m.median));
    d << fam << " median triv M " << fmt("%.4f", m.median) << " C " << fmt("%.4f", c.median) << "; ";
  }
  if (o.pass) {
    o.detail = d.str();
    o.detail.resize(o.detail.size() - 2);
  }
  return o;
}

// --- 10 ---------------------------------------------------------------------

SparseAffine aff(std::vector<std::pair<int, double>> c, double k = 0.0) {
  SparseAffine a;
  a.coeffs = std::move(c);
  a.constant = k;
  a.normalize();
  return a;
}

ConicProgram program(int n) {
  ConicProgram p;
  for (int i = 0; i < n; ++i) p.add_variable({std::nullopt, "x" + std::to_string(i)});
  return p;
}

void ge(ConicProgram& p, SparseAffine a) { p.inequalities.push_back({std::move(a), -1, std::nullopt}); }
void eq(ConicProgram& p, SparseAffine a) { p.equalities.push_back({std::move(a), -1, std::nullopt}); }
void block(ConicProgram& p, int size, std::vector<PsdEntry> e) {
  ProgramBlock b;
  b.size = size;
  b.entries = std::move(e);
  p.blocks.push_back(std::move(b));
}

Eigen::MatrixXd random_sym(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(gen);
  return 0.5 * (a + a.transpose());
}

double lambda_max(const Eigen::MatrixXd& a) { return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().maxCoeff(); }

// Upper triangle of an n x n symmetric matrix variable, constrained PSD.
ConicProgram matrix_program(int n, std::function<int(int, int)>& index) {
  index = [n](int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  };
  ConicProgram p = program(n * (n + 1) / 2);
  std::vector<PsdEntry> e;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) e.push_back({i, j, aff({{index(i, j), 1.0}})});
  block(p, n, e);
  return p;
}

struct SolverCase {
  std::string name;
  ConicProgram prog;
  SolveStatus status;
  double value = 0.0;
};

std::vector<SolverCase> solver_cases() {
  std::vector<SolverCase> cs;
  auto opt = [&](std::string name, ConicProgram p, double v) { cs.push_back({std::move(name), std::move(p), SolveStatus::optimal, v}); };
  auto bad = [&](std::string name, ConicProgram p, SolveStatus s) { cs.push_back({std::move(name), std::move(p), s, 0.0}); };
  {
    auto p = program(1);
    p.objective = aff({{0, 1.0}});
    ge(p, aff({{0, 1.0}}, -1.0));
    opt("single bound", p, 1.0);
    p.objective.constant = 5.0;
    opt("objective constant", p, 6.0);
  }
  {
    auto p = program(2);
    p.objective = aff({{0, 1.0}, {1, 1.0}});
    ge(p, aff({{0, 1.0}}));
    ge(p, aff({{1, 1.0}}));
    ge(p, aff({{0, 1.0}, {1, 1.0}}, -2.0));
    opt("sum constraint", p, 2.0);
  }
  {
    auto p = program(2);
    p.objective = aff({{0, 1.0}, {1, 2.0}});
    eq(p, aff({{0, 1.0}, {1, 1.0}}, -1.0));
    ge(p, aff({{0, 1.0}}));
    ge(p, aff({{1, 1.0}}));
    opt("simplex with equality", p, 1.0);
  }
  {
    auto p = program(2);
    p.objective = aff({{0, 2.0}, {1, 3.0}});
    ge(p, aff({{0, 1.0}, {1, 1.0}}, -4.0));
    ge(p, aff({{0, 1.0}, {1, 3.0}}, -6.0));
    ge(p, aff({{0, 1.0}}));
    ge(p, aff({{1, 1.0}}));
    opt("two cuts", p, 9.0);
  }
  {
    auto p = program(2);
    p.objective = aff({{0, 1.0}});
    eq(p, aff({{0, 1.0}, {1, -1.0}}, -1.0));
    ge(p, aff({{1, 1.0}}, 2.0));
    opt("free variable through equality", p, -1.0);
  }
  {
    auto p = program(1);
    ge(p, aff({{0, 1.0}}));
    opt("zero objective", p, 0.0);
    p.objective = aff({{0, 1.0}});
    ge(p, aff({{0, -1.0}}));
    opt("pinned by two inequalities", p, 0.0);
  }
  for (int n : {3, 5, 10}) {
    std::mt19937 gen(n);
    std::uniform_real_distribution<double> u(-1, 1);
    auto p = program(n);
    double expected = 0;
    for (int i = 0; i < n; ++i) {
      const double c = u(gen);
      p.objective.add(i, c);
      expected += std::min(c, 0.0);
      ge(p, aff({{i, 1.0}}));
      ge(p, aff({{i, -1.0}}, 1.0));
    }
    opt("unit box " + std::to_string(n), p, expected);
  }
  {
    auto p = program(3);
    p.objective = aff({{2, 1.0}});
    ge(p, aff({{2, 1.0}}));
    ge(p, aff({{0, -1.0}, {1, -1.0}, {2, 1.0}}, 1.0));
    ge(p, aff({{0, 1.0}, {2, -1.0}}));
    ge(p, aff({{1, 1.0}, {2, -1.0}}));
    for (int i = 0; i < 2; ++i) {
      ge(p, aff({{i, 1.0}}));
      ge(p, aff({{i, -1.0}}, 1.0));
    }
    opt("McCormick bilinear", p, 0.0);
  }
  {
    auto p = program(1);
    eq(p, aff({{0, 1.0}}, -1.0));
    ge(p, aff({{0, -1.0}}));
    bad("contradictory rows", p, SolveStatus::infeasible);
  }
  {
    auto p = program(1);
    p.objective = aff({{0, 1.0}});
    eq(p, aff({{0, 1.0}}, -1.0));
    eq(p, aff({{0, 1.0}}, -2.0));
    bad("contradictory equalities", p, SolveStatus::infeasible);
  }
  {
    auto p = program(2);
    ge(p, aff({{0, 1.0}, {1, 1.0}}, -3.0));
    ge(p, aff({{0, -1.0}}, 1.0));
    ge(p, aff({{1, -1.0}}, 1.0));
    bad("empty polytope", p, SolveStatus::infeasible);
  }
  {
    auto p = program(1);
    p.objective = aff({{0, 1.0}});
    ge(p, aff({{0, -1.0}}));
    bad("unbounded ray", p, SolveStatus::unbounded);
  }
  {
    auto p = program(2);
    p.objective = aff({{0, -1.0}, {1, -1.0}});
    eq(p, aff({{0, 1.0}, {1, -1.0}}));
    ge(p, aff({{0, 1.0}}));
    bad("unbounded with equality", p, SolveStatus::unbounded);
  }
  const std::vector<PsdEntry> moment = {{0, 0, aff({}, 1.0)}, {0, 1, aff({{0, 1.0}})}, {1, 1, aff({{1, 1.0}})}};
  const std::vector<PsdEntry> hyper = {{0, 0, aff({{0, 1.0}})}, {0, 1, aff({}, 1.0)}, {1, 1, aff({{1, 1.0}})}};
  {
    auto p = program(2);
    p.objective = aff({{1, 1.0}});
    block(p, 2, moment);
    opt("moment matrix", p, 0.0);
    p.objective = aff({{1, 1.0}, {0, -2.0}});
    opt("shifted parabola", p, -1.0);
  }
  {
    auto p = program(2);
    p.objective = aff({{0, 1.0}, {1, 1.0}});
    block(p, 2, hyper);
    opt("hyperbola", p, 2.0);
    p.objective = aff({{0, 1.0}});
    ge(p, aff({{1, -1.0}}, 4.0));
    opt("mixed LP and SDP", p, 0.25);
  }
  for (int n : {3, 4, 6}) {
    const auto a = random_sym(n, 10 + n);
    auto p = program(1);
    p.objective = aff({{0, 1.0}});
    std::vector<PsdEntry> e;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) e.push_back({i, j, i == j ? aff({{0, 1.0}}, -a(i, j)) : aff({}, -a(i, j))});
    block(p, n, e);
    opt("largest eigenvalue " + std::to_string(n), p, lambda_max(a));
  }
  {
    const int n = 4;
    const auto c = random_sym(n, 7);
    std::function<int(int, int)> idx;
    auto p = matrix_program(n, idx);
    SparseAffine tr;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) p.objective.add(idx(i, j), i == j ? c(i, j) : 2 * c(i, j));
      tr.add(idx(i, i), 1.0);
    }
    tr.constant = -1.0;
    eq(p, tr);
    opt("smallest eigenvalue over the spectraplex", p, -lambda_max(-c));
  }
  {
    auto p = program(1);
    p.objective = aff({{0, -1.0}});
    block(p, 2, {{0, 0, aff({}, 1.0)}, {0, 1, aff({{0, 1.0}})}, {1, 1, aff({}, 1.0)}});
    opt("elliptope 2x2", p, -1.0);
  }
  {
    auto p = program(3);
    p.objective = aff({{0, 1.0}, {1, 1.0}, {2, 1.0}});
    block(p, 3,
          {{0, 0, aff({}, 1.0)}, {1, 1, aff({}, 1.0)}, {2, 2, aff({}, 1.0)},
           {0, 1, aff({{0, 1.0}})}, {0, 2, aff({{1, 1.0}})}, {1, 2, aff({{2, 1.0}})}});
    opt("elliptope 3x3", p, -1.5);
  }
  {
    const int n = 5;
    std::function<int(int, int)> idx;
    auto p = matrix_program(n, idx);
    SparseAffine tr;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) p.objective.add(idx(i, j), i == j ? -1.0 : -2.0);
      tr.add(idx(i, i), 1.0);
    }
    tr.constant = -1.0;
    eq(p, tr);
    for (int i = 0; i < n; ++i) eq(p, aff({{idx(i, (i + 1) % n), 1.0}}));
    opt("Lovasz theta of the 5-cycle", p, -std::sqrt(5.0));
  }
  {
    auto p = program(1);
    block(p, 2, {{0, 0, aff({}, -1.0)}, {0, 1, aff({{0, 1.0}})}, {1, 1, aff({{0, 1.0}})}});
    bad("negative diagonal", p, SolveStatus::infeasible);
  }
  {
    auto p = program(1);
    p.objective = aff({{0, -1.0}});
    block(p, 2, {{0, 0, aff({{0, 1.0}})}, {0, 1, aff({}, 1.0)}, {1, 1, aff({{0, 1.0}})}});
    bad("unbounded along a PSD ray", p, SolveStatus::unbounded);
  }
  return cs;
}

Outcome solver_suite() {
  Outcome o;
  const auto cs = solver_cases();
  if (cs.size() != 30) o.fail("expected 30 programs, built " + std::to_string(cs.size()));
  double worst = 0.0;
  for (const auto& c : cs) {
    const SolveResult r = solve(c.prog);
    if (r.status != c.status) {
      o.fail(c.name + ": status " + to_string(r.status) + ", expected " + to_string(c.status));
      continue;
    }
    if (c.status != SolveStatus::optimal) continue;
    const double err = std::abs(r.primal_value - c.value);
    worst = std::max(worst, err / (1 + std::abs(c.value)));
    if (err > 1e-7 * (1 + std::abs(c.value))) o.fail(c.name + fmt(": %.12g, expected %.12g", r.primal_value, c.value));
  }
  if (o.pass) o.detail = std::to_string(cs.size()) + " programs, max relative value error " + fmt("%.2g", worst);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
    double budget_s;
  };
  const Criterion criteria[] = {
      {"worked examples", worked_examples, 1},
      {"lifted-point feasibility", lifted_points, 30},
      {"soundness vs brute force", soundness, 300},
      {"exactness cases", exactness, 120},
      {"univariate sparse exactness", univariate_sparse, 120},
      {"TSSOS equivalence", tssos_equivalence, 120},
      {"duality round trip", duality, 300},
      {"circuit checks", circuits, 30},
      {"A5/A6 triv ordering", figure_ordering, 300},
      {"solver unit suite", solver_suite, 60},
  };
  int failed = 0;
  int k = 0;
  for (const auto& c : criteria) {
    ++k;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (t > c.budget_s) o.fail(fmt("runtime %.1f s over the %.0f s budget", t, c.budget_s));
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", k, c.name, o.detail.c_str(), t);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
