// Exponent vectors, sparse real polynomials, boxes and the linearization map.
#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace prelax {

/// Raised for malformed inputs (dimension mismatch, negative exponents, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point of N^n. Ordered lexicographically.
class Exponent {
 public:
  Exponent() = default;
  explicit Exponent(std::size_t n) : e_(n, 0) {}
  Exponent(std::initializer_list<int> entries);
  explicit Exponent(std::vector<int> entries);

  static Exponent zero(std::size_t n) { return Exponent(n); }
  static Exponent unit(std::size_t n, std::size_t i, int k = 1);

  std::size_t dim() const { return e_.size(); }
  int operator[](std::size_t i) const { return e_[i]; }
  void set(std::size_t i, int value);
  const std::vector<int>& entries() const { return e_; }

  int degree() const;
  bool is_zero() const;
  bool is_even() const;
  /// Indices with a nonzero entry.
  std::vector<std::size_t> support() const;
  /// True when no coordinate is used by both exponents.
  bool disjoint_support(const Exponent& other) const;

  Exponent operator+(const Exponent& other) const;
  /// Entrywise difference; throws if any entry would be negative.
  Exponent operator-(const Exponent& other) const;
  Exponent operator*(int k) const;

  auto operator<=>(const Exponent&) const = default;
  bool operator==(const Exponent&) const = default;

 private:
  std::vector<int> e_;
};

std::string to_string(const Exponent& e);

using ExponentSet = std::set<Exponent>;

/// Throws unless every member has dimension n.
void check_dimension(const ExponentSet& set, std::size_t n);
std::string to_string(const ExponentSet& set);

/// All exponents of dimension n and total degree <= d, in lexicographic order.
ExponentSet truncated_exponents(std::size_t n, int d);

ExponentSet minkowski_sum(const ExponentSet& a, const ExponentSet& b);
bool is_subset(const ExponentSet& a, const ExponentSet& b);

/// Sparse polynomial with real coefficients. Coefficients with magnitude
/// below kDropTolerance are never stored.
class Polynomial {
 public:
  using Terms = std::map<Exponent, double>;
  static constexpr double kDropTolerance = 1e-14;

  explicit Polynomial(std::size_t n = 0) : n_(n) {}
  Polynomial(std::size_t n, const Terms& terms);

  static Polynomial constant(std::size_t n, double c);
  static Polynomial monomial(const Exponent& alpha, double c = 1.0);
  static Polynomial variable(std::size_t n, std::size_t i);

  std::size_t dim() const { return n_; }
  const Terms& terms() const { return terms_; }
  double coeff(const Exponent& alpha) const;
  ExponentSet support() const;
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c to the coefficient of x^alpha.
  void add_term(const Exponent& alpha, double c);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const { return *this * -1.0; }
  Polynomial& operator+=(const Polynomial& other);

  /// x^eta * f.
  Polynomial shifted(const Exponent& eta) const;
  Polynomial pow(int k) const;

  bool operator==(const Polynomial& other) const = default;

 private:
  std::size_t n_ = 0;
  Terms terms_;
};

std::string to_string(const Polynomial& f);

/// Closed interval; lo may be -inf and hi may be +inf.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  bool bounded() const;
  bool operator==(const Interval&) const = default;
};

Interval operator*(const Interval& a, const Interval& b);

/// Product of coordinate intervals. Infinite bounds describe R^n or R_+^n.
class Box {
 public:
  Box() = default;
  Box(std::vector<double> lower, std::vector<double> upper);

  static Box unit(std::size_t n);
  static Box nonnegative_orthant(std::size_t n);
  static Box whole_space(std::size_t n);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  Interval coordinate(std::size_t i) const { return {lower_[i], upper_[i]}; }
  bool bounded() const;
  bool contains(std::span<const double> x, double tol = 0.0) const;

  bool operator==(const Box&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Exact range of x_i^k for x_i in [lo, hi].
Interval power_range(Interval coordinate, int k);

/// Exact range of x^alpha over the box (coordinates vary independently).
Interval monomial_range(const Exponent& alpha, const Box& box);

double evaluate(const Polynomial& f, std::span<const double> x);
double monomial_value(const Exponent& alpha, std::span<const double> x);

/// Affine functional in the monomial variables v_alpha.
struct LinearForm {
  double constant = 0.0;
  std::map<Exponent, double> coeffs;

  bool operator==(const LinearForm&) const = default;
};

/// body: v_0 is pinned to 1 and folded into the constant.
/// conic: v_0 is an ordinary variable and the constant stays 0.
enum class Context { body, conic };

LinearForm linearize(const Polynomial& f, Context context = Context::body);

}  // namespace prelax
