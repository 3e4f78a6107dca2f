// Pattern families: finite exponent sets whose monomial variables are linked
// by one convex model, plus the constructions used by the relaxation methods.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prelax/poly.hpp"

namespace prelax {

class PatternError : public std::runtime_error {
 public:
  enum class Code {
    precondition,
    rank_deficient,
    affinely_dependent,
    not_in_relative_interior,
    too_large,
  };
  PatternError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

enum class PatternKind { multilinear, chain, shifted_chain, submonoid, circuit, sdsos, sos_block, generic };

std::string to_string(PatternKind kind);
PatternKind pattern_kind_from_string(const std::string& s);

/// The image Gamma * N^k_{2 half_degree}; half_degree < 0 when the base set is
/// not a full truncated set.
struct GammaInfo {
  std::vector<Exponent> columns;
  int half_degree = -1;

  bool operator==(const GammaInfo&) const = default;
};

/// Circuit {beta, gamma(0), ..., gamma(k)} with barycentric weights lambda.
struct CircuitInfo {
  Exponent beta;
  std::vector<Exponent> gammas;
  std::vector<double> lambda;

  bool operator==(const CircuitInfo&) const = default;
};

/// Block L_v(x^multiplier M_basis) of a sparse SOS relaxation.
struct SosBlockInfo {
  std::vector<Exponent> basis;
  Exponent multiplier;

  bool operator==(const SosBlockInfo&) const = default;
};

struct Pattern {
  ExponentSet exponents;
  PatternKind kind = PatternKind::generic;
  std::optional<Exponent> shift;
  std::variant<std::monostate, GammaInfo, CircuitInfo, SosBlockInfo> info;

  std::size_t dim() const { return exponents.empty() ? 0 : exponents.begin()->dim(); }
  const GammaInfo* gamma() const { return std::get_if<GammaInfo>(&info); }
  const CircuitInfo* circuit() const { return std::get_if<CircuitInfo>(&info); }
  const SosBlockInfo* sos_block() const { return std::get_if<SosBlockInfo>(&info); }

  bool operator==(const Pattern&) const = default;
};

struct PatternFamily {
  std::size_t dim = 0;
  std::vector<Pattern> patterns;

  ExponentSet covered() const;

  bool operator==(const PatternFamily&) const = default;
};

/// Disjoint blocks covering a base set.
struct Partition {
  std::vector<ExponentSet> blocks;

  bool operator==(const Partition&) const = default;
};

/// Limits applied while constructing families.
struct PatternLimits {
  std::size_t max_cardinality = 5000;
};

// Basic construction helpers.
Pattern make_pattern(ExponentSet exponents, PatternKind kind = PatternKind::generic);
Pattern multilinear_pattern(const Exponent& alpha);
/// Chain {0, gamma, ..., 2 half_degree * gamma} shifted by eta (if given).
Pattern chain_pattern(const Exponent& gamma, int half_degree,
                      const std::optional<Exponent>& shift = std::nullopt);

PatternFamily prune_inclusion_maximal(const PatternFamily& family);
/// Concatenation of the pattern lists, pruned.
PatternFamily union_families(const PatternFamily& a, const PatternFamily& b);

PatternFamily multilinear_family(const ExponentSet& a, const PatternLimits& limits = {});
PatternFamily chain_family(const ExponentSet& a);
PatternFamily shifted_chain_family(const ExponentSet& a);
PatternFamily h_family(const ExponentSet& a, const PatternLimits& limits = {});
PatternFamily mc_family(const ExponentSet& a, const PatternLimits& limits = {});
PatternFamily truncated_submonoid_family(const ExponentSet& a, const PatternLimits& limits = {});
PatternFamily expression_tree_family(const Polynomial& f);
PatternFamily univariate_sparse_family(const ExponentSet& a);

/// Pattern Gamma * base. Gamma is given by its k columns (each in N^n).
Pattern gamma_image(const std::vector<Exponent>& columns, const ExponentSet& base);

Pattern make_circuit(const Exponent& beta, const std::vector<Exponent>& gammas);
/// Circuit {alpha + beta, 2 alpha, 2 beta} with weights (1/2, 1/2).
Pattern make_sdsos(const Exponent& alpha, const Exponent& beta);

Partition tssos_partition(const ExponentSet& a, const ExponentSet& b);
/// Every intermediate partition, ending with the stabilized one.
std::vector<Partition> tssos_partition_trace(const ExponentSet& a, const ExponentSet& b);
/// One sos_block pattern per block of the partition.
PatternFamily tssos_family(const ExponentSet& a, const ExponentSet& b);

}  // namespace prelax
