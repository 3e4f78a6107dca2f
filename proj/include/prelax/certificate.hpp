// Lower-bound certificates read off the dual of a solved relaxation, and
// verifiers that check them using polynomial arithmetic only.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prelax/conic.hpp"
#include "prelax/io.hpp"
#include "prelax/models.hpp"
#include "prelax/poly.hpp"

namespace prelax {

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// multiplier(x) * (x^B)^T Q x^B with multiplier = prod(factors).
struct SosTerm {
  std::vector<Polynomial> factors;
  std::vector<Exponent> basis;
  Eigen::MatrixXd gram;
};

/// coeff * prod(factors).
struct HandelmanTerm {
  std::vector<Polynomial> factors;
  double coeff = 0.0;
};

/// poly = x^shift * q(x^coords[0], ..., x^coords[k-1]) with q multilinear.
struct VertexTerm {
  std::string label;
  Polynomial poly;
  std::vector<Exponent> coords;
  std::optional<Exponent> shift;
};

/// poly supported on the circuit.
struct CircuitTerm {
  std::string label;
  Polynomial poly;
  CircuitInfo circuit;
};

enum class CertificateKind { sos, handelman, circuit, mixed };
std::string to_string(CertificateKind k);
CertificateKind certificate_kind_from_string(const std::string& s);

/// For sense min: f - lambda = sum of terms, each nonnegative on the domain.
/// For sense max: lambda - f = sum of terms.
struct Certificate {
  std::string program_id;
  Sense sense = Sense::min;
  double lambda = 0.0;
  CertificateKind kind = CertificateKind::mixed;
  std::vector<SosTerm> sos;
  std::vector<HandelmanTerm> handelman;
  std::vector<VertexTerm> vertex;
  std::vector<CircuitTerm> circuits;

  /// Sum of all terms, expanded.
  Polynomial expand(std::size_t n) const;
};

/// Requires an optimal result of the program as assembled (lowered) by
/// solve_relaxation, with target polynomial and constraint groups present.
Certificate extract_certificate(const ConicProgram& prog, const SolveResult& result);

Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

struct VerifyReport {
  bool pass = true;
  double max_coeff_residual = 0.0;
  double min_eigenvalue = 0.0;  // scaled by 1 + ||Q||, over all Gram blocks
  std::vector<std::string> failures;

  void fail(std::string what);
  std::string summary() const;
};

using GramBlock = std::pair<std::vector<Exponent>, Eigen::MatrixXd>;

/// f - lambda == sum_i (x^B_i)^T Q_i x^B_i with every Q_i PSD.
VerifyReport verify_sos(const Polynomial& f, double lambda, const std::vector<GramBlock>& blocks);

/// f - lambda == sum_beta c_beta g^beta. Coefficients below -1e-10 throw.
VerifyReport verify_handelman(const Polynomial& f, double lambda, const std::vector<Polynomial>& g,
                              const std::map<std::vector<int>, double>& coeffs);

/// Nonnegativity of f (supported on the circuit) on R_+^n or R^n.
VerifyReport verify_circuit(const Polynomial& f, const CircuitInfo& circuit, CircuitDomain domain, double tol = 1e-9);

struct VerifyOptions {
  double coeff_tol = 1e-6;
  double eig_tol = 1e-7;
  double group_tol = 1e-7;  // vertex and circuit terms from numerical duals
  int samples = 0;          // extra spot check of f - lambda >= -1e-5 on the box
  unsigned seed = 1;
};

/// Checks the identity, the PSD and sign conditions, and the nonnegativity of
/// every multiplier and grouped term on the box.
VerifyReport verify_certificate(const Certificate& c, const Polynomial& f, const Box& box, const VerifyOptions& opts = {});

}  // namespace prelax
