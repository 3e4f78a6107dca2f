#include "prelax/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace prelax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 0 * inf is 0 here: a coordinate pinned at zero kills the monomial.
double mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

double ipow(double x, int k) {
  double result = 1.0;
  double base = x;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

}  // namespace

Exponent::Exponent(std::initializer_list<int> entries) : Exponent(std::vector<int>(entries)) {}

Exponent::Exponent(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_) {
    if (v < 0) throw InvalidArgument("exponent entries must be nonnegative");
  }
}

Exponent Exponent::unit(std::size_t n, std::size_t i, int k) {
  Exponent e(n);
  e.set(i, k);
  return e;
}

void Exponent::set(std::size_t i, int value) {
  if (value < 0) throw InvalidArgument("exponent entries must be nonnegative");
  e_.at(i) = value;
}

int Exponent::degree() const {
  int d = 0;
  for (int v : e_) d += v;
  return d;
}

bool Exponent::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](int v) { return v == 0; });
}

bool Exponent::is_even() const {
  return std::all_of(e_.begin(), e_.end(), [](int v) { return v % 2 == 0; });
}

std::vector<std::size_t> Exponent::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] != 0) s.push_back(i);
  }
  return s;
}

bool Exponent::disjoint_support(const Exponent& other) const {
  if (other.dim() != dim()) throw InvalidArgument("exponent dimension mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] != 0 && other.e_[i] != 0) return false;
  }
  return true;
}

Exponent Exponent::operator+(const Exponent& other) const {
  if (other.dim() != dim()) throw InvalidArgument("exponent dimension mismatch");
  Exponent r(*this);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += other.e_[i];
  return r;
}

Exponent Exponent::operator-(const Exponent& other) const {
  if (other.dim() != dim()) throw InvalidArgument("exponent dimension mismatch");
  Exponent r(*this);
  for (std::size_t i = 0; i < e_.size(); ++i) {
    r.e_[i] -= other.e_[i];
    if (r.e_[i] < 0) throw InvalidArgument("exponent difference is negative");
  }
  return r;
}

Exponent Exponent::operator*(int k) const {
  if (k < 0) throw InvalidArgument("negative exponent multiplier");
  Exponent r(*this);
  for (int& v : r.e_) v *= k;
  return r;
}

std::string to_string(const Exponent& e) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < e.dim(); ++i) {
    if (i) os << ',';
    os << e[i];
  }
  os << ')';
  return os.str();
}

void check_dimension(const ExponentSet& set, std::size_t n) {
  for (const auto& e : set) {
    if (e.dim() != n) {
      throw InvalidArgument("exponent " + to_string(e) + " does not have dimension " +
                            std::to_string(n));
    }
  }
}

std::string to_string(const ExponentSet& set) {
  std::string s = "{";
  bool first = true;
  for (const auto& e : set) {
    if (!first) s += ", ";
    s += to_string(e);
    first = false;
  }
  return s + "}";
}

ExponentSet truncated_exponents(std::size_t n, int d) {
  ExponentSet out;
  if (d < 0) return out;
  std::vector<int> cur(n, 0);
  // Odometer over coordinates with a running degree budget.
  auto rec = [&](auto&& self, std::size_t i, int budget) -> void {
    if (i == n) {
      out.insert(Exponent(cur));
      return;
    }
    for (int k = 0; k <= budget; ++k) {
      cur[i] = k;
      self(self, i + 1, budget - k);
    }
    cur[i] = 0;
  };
  rec(rec, 0, d);
  return out;
}

ExponentSet minkowski_sum(const ExponentSet& a, const ExponentSet& b) {
  ExponentSet out;
  for (const auto& x : a) {
    for (const auto& y : b) out.insert(x + y);
  }
  return out;
}

bool is_subset(const ExponentSet& a, const ExponentSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(std::size_t n, const Terms& terms) : n_(n) {
  for (const auto& [alpha, c] : terms) add_term(alpha, c);
}

Polynomial Polynomial::constant(std::size_t n, double c) {
  Polynomial p(n);
  p.add_term(Exponent(n), c);
  return p;
}

Polynomial Polynomial::monomial(const Exponent& alpha, double c) {
  Polynomial p(alpha.dim());
  p.add_term(alpha, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t n, std::size_t i) {
  return monomial(Exponent::unit(n, i));
}

double Polynomial::coeff(const Exponent& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

ExponentSet Polynomial::support() const {
  ExponentSet s;
  for (const auto& [alpha, c] : terms_) s.insert(alpha);
  return s;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [alpha, c] : terms_) d = std::max(d, alpha.degree());
  return d;
}

void Polynomial::add_term(const Exponent& alpha, double c) {
  if (alpha.dim() != n_) throw InvalidArgument("term " + to_string(alpha) + " has wrong dimension");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(alpha, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kDropTolerance) terms_.erase(it);
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial r(*this);
  r += other;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.n_ != n_) throw InvalidArgument("polynomial dimension mismatch");
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.n_ != n_) throw InvalidArgument("polynomial dimension mismatch");
  Polynomial r(n_);
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) r.add_term(a + b, ca * cb);
  }
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(n_);
  for (const auto& [alpha, c] : terms_) r.add_term(alpha, c * s);
  return r;
}

Polynomial Polynomial::shifted(const Exponent& eta) const {
  Polynomial r(n_);
  for (const auto& [alpha, c] : terms_) r.add_term(alpha + eta, c);
  return r;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw InvalidArgument("negative polynomial power");
  Polynomial r = constant(n_, 1.0);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::string to_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [alpha, c] : f.terms()) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << '-';
    os << std::abs(c);
    if (!alpha.is_zero()) os << "*x^" << to_string(alpha);
    first = false;
  }
  return os.str();
}

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

Interval operator*(const Interval& a, const Interval& b) {
  const double c[4] = {mul(a.lo, b.lo), mul(a.lo, b.hi), mul(a.hi, b.lo), mul(a.hi, b.hi)};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw InvalidArgument("box bounds have different lengths");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || lower_[i] > upper_[i]) {
      throw InvalidArgument("box requires l_i <= u_i (coordinate " + std::to_string(i) + ")");
    }
  }
}

Box Box::unit(std::size_t n) { return Box(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)); }

Box Box::nonnegative_orthant(std::size_t n) {
  return Box(std::vector<double>(n, 0.0), std::vector<double>(n, kInf));
}

Box Box::whole_space(std::size_t n) {
  return Box(std::vector<double>(n, -kInf), std::vector<double>(n, kInf));
}

bool Box::bounded() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!coordinate(i).bounded()) return false;
  }
  return true;
}

bool Box::contains(std::span<const double> x, double tol) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!coordinate(i).contains(x[i], tol)) return false;
  }
  return true;
}

Interval power_range(Interval c, int k) {
  if (k == 0) return {1.0, 1.0};
  auto p = [k](double x) {
    if (std::isinf(x)) return (k % 2 == 1 && x < 0) ? -kInf : kInf;
    return ipow(x, k);
  };
  if (k % 2 == 1) return {p(c.lo), p(c.hi)};
  if (c.lo >= 0.0) return {p(c.lo), p(c.hi)};
  if (c.hi <= 0.0) return {p(c.hi), p(c.lo)};
  return {0.0, std::max(p(c.lo), p(c.hi))};
}

Interval monomial_range(const Exponent& alpha, const Box& box) {
  if (alpha.dim() != box.dim()) throw InvalidArgument("monomial_range: dimension mismatch");
  Interval r{1.0, 1.0};
  for (std::size_t i = 0; i < alpha.dim(); ++i) {
    if (alpha[i] == 0) continue;
    r = r * power_range(box.coordinate(i), alpha[i]);
  }
  return r;
}

double monomial_value(const Exponent& alpha, std::span<const double> x) {
  if (alpha.dim() != x.size()) throw InvalidArgument("evaluate: dimension mismatch");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (alpha[i] != 0) v *= ipow(x[i], alpha[i]);
  }
  return v;
}

double evaluate(const Polynomial& f, std::span<const double> x) {
  if (f.dim() != x.size()) throw InvalidArgument("evaluate: dimension mismatch");
  double s = 0.0;
  for (const auto& [alpha, c] : f.terms()) s += c * monomial_value(alpha, x);
  return s;
}

LinearForm linearize(const Polynomial& f, Context context) {
  LinearForm form;
  for (const auto& [alpha, c] : f.terms()) {
    if (alpha.is_zero() && context == Context::body) {
      form.constant += c;
    } else {
      form.coeffs[alpha] += c;
    }
  }
  return form;
}

}  // namespace prelax
