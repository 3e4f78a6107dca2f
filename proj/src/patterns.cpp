#include "prelax/patterns.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace prelax {

namespace {

int ceil_half(int x) { return (x + 1) / 2; }

int entry_gcd(const Exponent& alpha) {
  int g = 0;
  for (int v : alpha.entries()) g = std::gcd(g, v);
  return g;
}

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  // C(n, k) saturating at cap + 1.
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(static_cast<double>(r)));
}

std::size_t common_dim(const ExponentSet& a) {
  if (a.empty()) throw PatternError(PatternError::Code::precondition, "exponent set is empty");
  const std::size_t n = a.begin()->dim();
  check_dimension(a, n);
  return n;
}

void check_cap(const Pattern& p, const PatternLimits& limits) {
  if (p.exponents.size() > limits.max_cardinality) {
    throw PatternError(PatternError::Code::too_large,
                       "pattern with " + std::to_string(p.exponents.size()) +
                           " exponents exceeds the cardinality cap");
  }
}

}  // namespace

std::string to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::multilinear: return "multilinear";
    case PatternKind::chain: return "chain";
    case PatternKind::shifted_chain: return "shifted_chain";
    case PatternKind::submonoid: return "submonoid";
    case PatternKind::circuit: return "circuit";
    case PatternKind::sdsos: return "sdsos";
    case PatternKind::sos_block: return "sos_block";
    case PatternKind::generic: return "generic";
  }
  return "generic";
}

PatternKind pattern_kind_from_string(const std::string& s) {
  static const std::map<std::string, PatternKind> kinds = {
      {"multilinear", PatternKind::multilinear}, {"chain", PatternKind::chain},
      {"shifted_chain", PatternKind::shifted_chain}, {"submonoid", PatternKind::submonoid},
      {"circuit", PatternKind::circuit}, {"sdsos", PatternKind::sdsos},
      {"sos_block", PatternKind::sos_block}, {"generic", PatternKind::generic}};
  auto it = kinds.find(s);
  if (it == kinds.end()) throw InvalidArgument("unknown pattern kind '" + s + "'");
  return it->second;
}

ExponentSet PatternFamily::covered() const {
  ExponentSet all;
  for (const auto& p : patterns) all.insert(p.exponents.begin(), p.exponents.end());
  return all;
}

Pattern make_pattern(ExponentSet exponents, PatternKind kind) {
  if (exponents.empty()) throw PatternError(PatternError::Code::precondition, "pattern is empty");
  check_dimension(exponents, exponents.begin()->dim());
  Pattern p;
  p.exponents = std::move(exponents);
  p.kind = kind;
  return p;
}

Pattern multilinear_pattern(const Exponent& alpha) {
  ExponentSet points{Exponent(alpha.dim())};
  for (std::size_t i : alpha.support()) {
    ExponentSet next = points;
    for (const auto& p : points) {
      Exponent q = p;
      q.set(i, alpha[i]);
      next.insert(q);
    }
    points = std::move(next);
  }
  return make_pattern(std::move(points), PatternKind::multilinear);
}

Pattern chain_pattern(const Exponent& gamma, int half_degree, const std::optional<Exponent>& shift) {
  if (half_degree < 0) throw PatternError(PatternError::Code::precondition, "negative chain degree");
  ExponentSet points;
  for (int k = 0; k <= 2 * half_degree; ++k) {
    Exponent e = gamma * k;
    if (shift) e = e + *shift;
    points.insert(e);
  }
  Pattern p = make_pattern(std::move(points), shift ? PatternKind::shifted_chain : PatternKind::chain);
  p.shift = shift;
  p.info = GammaInfo{{gamma}, half_degree};
  return p;
}

PatternFamily prune_inclusion_maximal(const PatternFamily& family) {
  PatternFamily out;
  out.dim = family.dim;
  const auto& ps = family.patterns;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < ps.size() && !dominated; ++j) {
      if (i == j) continue;
      const auto& a = ps[i].exponents;
      const auto& b = ps[j].exponents;
      if (a.size() > b.size() || !is_subset(a, b)) continue;
      // Equal sets: the earlier one survives.
      dominated = a.size() < b.size() || j < i;
    }
    if (!dominated) out.patterns.push_back(ps[i]);
  }
  return out;
}

PatternFamily union_families(const PatternFamily& a, const PatternFamily& b) {
  PatternFamily u;
  u.dim = a.dim ? a.dim : b.dim;
  u.patterns = a.patterns;
  u.patterns.insert(u.patterns.end(), b.patterns.begin(), b.patterns.end());
  return prune_inclusion_maximal(u);
}

PatternFamily multilinear_family(const ExponentSet& a, const PatternLimits& limits) {
  PatternFamily fam;
  fam.dim = common_dim(a);
  for (const auto& alpha : a) {
    if (alpha.support().size() > 40) {
      throw PatternError(PatternError::Code::too_large, "multilinear pattern too wide");
    }
    if ((std::size_t{1} << alpha.support().size()) > limits.max_cardinality) {
      throw PatternError(PatternError::Code::too_large,
                         "multilinear pattern for " + to_string(alpha) + " exceeds the cardinality cap");
    }
    fam.patterns.push_back(multilinear_pattern(alpha));
  }
  return prune_inclusion_maximal(fam);
}

PatternFamily chain_family(const ExponentSet& a) {
  PatternFamily fam;
  fam.dim = common_dim(a);
  for (const auto& alpha : a) {
    if (alpha.is_zero()) continue;
    const int g = entry_gcd(alpha);
    Exponent primitive(alpha.dim());
    for (std::size_t i = 0; i < alpha.dim(); ++i) primitive.set(i, alpha[i] / g);
    fam.patterns.push_back(chain_pattern(primitive, ceil_half(g)));
  }
  return prune_inclusion_maximal(fam);
}

PatternFamily shifted_chain_family(const ExponentSet& a) {
  PatternFamily fam;
  fam.dim = common_dim(a);
  for (const auto& alpha : a) {
    for (std::size_t i = 0; i < alpha.dim(); ++i) {
      Exponent eta = alpha;
      eta.set(i, 0);
      fam.patterns.push_back(chain_pattern(Exponent::unit(alpha.dim(), i), ceil_half(alpha[i]), eta));
    }
  }
  return prune_inclusion_maximal(fam);
}

PatternFamily h_family(const ExponentSet& a, const PatternLimits& limits) {
  PatternFamily fam;
  fam.dim = common_dim(a);
  const std::size_t n = fam.dim;
  int max_entry = 0;
  for (const auto& alpha : a) {
    for (int v : alpha.entries()) max_entry = std::max(max_entry, v);
  }
  const int d = ceil_half(max_entry);
  for (std::size_t i = 0; i < n; ++i) fam.patterns.push_back(chain_pattern(Exponent::unit(n, i), d));
  fam.patterns.push_back(chain_pattern(Exponent(std::vector<int>(n, 1)), d));
  for (int k = 1; k <= 2 * d; ++k) {
    Pattern cube = multilinear_pattern(Exponent(std::vector<int>(n, k)));
    check_cap(cube, limits);
    fam.patterns.push_back(std::move(cube));
  }
  for (auto& p : multilinear_family(a, limits).patterns) fam.patterns.push_back(std::move(p));
  return prune_inclusion_maximal(fam);
}

PatternFamily mc_family(const ExponentSet& a, const PatternLimits& limits) {
  return union_families(multilinear_family(a, limits), chain_family(a));
}

PatternFamily truncated_submonoid_family(const ExponentSet& a, const PatternLimits& limits) {
  PatternFamily fam;
  fam.dim = common_dim(a);
  const std::size_t n = fam.dim;
  int deg = 0;
  for (const auto& alpha : a) deg = std::max(deg, alpha.degree());

  const int even_half = (deg + 3) / 4;  // ceil(deg / 4)
  std::vector<Exponent> doubled;
  for (std::size_t i = 0; i < n; ++i) doubled.push_back(Exponent::unit(n, i, 2));
  if (binomial_capped(n + 2 * even_half, n, limits.max_cardinality) > limits.max_cardinality) {
    throw PatternError(PatternError::Code::too_large, "even submonoid pattern exceeds the cardinality cap");
  }
  Pattern even = gamma_image(doubled, truncated_exponents(n, 2 * even_half));
  fam.patterns.push_back(even);

  const int half = ceil_half(deg);
  for (const auto& alpha : a) {
    if (even.exponents.count(alpha)) continue;
    std::vector<Exponent> cols;
    for (std::size_t i : alpha.support()) cols.push_back(Exponent::unit(n, i));
    const std::size_t size = binomial_capped(cols.size() + 2 * half, cols.size(), limits.max_cardinality);
    if (size > limits.max_cardinality) {
      throw PatternError(PatternError::Code::too_large,
                         "submonoid pattern for " + to_string(alpha) + " exceeds the cardinality cap");
    }
    fam.patterns.push_back(gamma_image(cols, truncated_exponents(cols.size(), 2 * half)));
  }
  return prune_inclusion_maximal(fam);
}

Pattern gamma_image(const std::vector<Exponent>& columns, const ExponentSet& base) {
  if (columns.empty()) throw PatternError(PatternError::Code::precondition, "Gamma has no columns");
  const std::size_t n = columns.front().dim();
  const std::size_t k = columns.size();
  Eigen::MatrixXd g(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    if (columns[j].dim() != n) throw InvalidArgument("Gamma columns have different dimensions");
    for (std::size_t i = 0; i < n; ++i) g(i, j) = columns[j][i];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (static_cast<std::size_t>(lu.rank()) != k) {
    throw PatternError(PatternError::Code::rank_deficient, "Gamma does not have full column rank");
  }
  check_dimension(base, k);

  ExponentSet image;
  for (const auto& b : base) {
    Exponent e(n);
    for (std::size_t j = 0; j < k; ++j) e = e + columns[j] * b[j];
    image.insert(e);
  }
  int top = 0;
  for (const auto& b : base) top = std::max(top, b.degree());
  int half = -1;
  if (top % 2 == 0 && base == truncated_exponents(k, top)) half = top / 2;

  PatternKind kind = PatternKind::generic;
  if (half >= 0) kind = k == 1 ? PatternKind::chain : PatternKind::submonoid;
  Pattern p = make_pattern(std::move(image), kind);
  p.info = GammaInfo{columns, half};
  return p;
}

PatternFamily expression_tree_family(const Polynomial& f) {
  if (f.degree() == 0) throw PatternError(PatternError::Code::precondition, "expression tree needs a nonconstant polynomial");
  PatternFamily fam;
  fam.dim = f.dim();
  const std::size_t n = f.dim();
  std::set<std::pair<std::size_t, int>> powers;
  for (const auto& [alpha, c] : f.terms()) {
    const auto nz = alpha.support();
    if (nz.size() >= 2) {
      ExponentSet node{alpha};
      for (std::size_t i : nz) node.insert(Exponent::unit(n, i, alpha[i]));
      fam.patterns.push_back(make_pattern(std::move(node), PatternKind::multilinear));
    }
    for (std::size_t i : nz) {
      if (alpha[i] >= 2) powers.insert({i, alpha[i]});
    }
  }
  for (const auto& [i, k] : powers) {
    fam.patterns.push_back(make_pattern({Exponent::unit(n, i, k), Exponent::unit(n, i)}));
  }
  return prune_inclusion_maximal(fam);
}

PatternFamily univariate_sparse_family(const ExponentSet& a) {
  if (a.empty() || a.begin()->dim() != 1) {
    throw PatternError(PatternError::Code::precondition, "univariate sparse family needs n = 1");
  }
  check_dimension(a, 1);
  if (!a.count(Exponent{0})) throw PatternError(PatternError::Code::precondition, "0 must belong to A");
  if (a.size() % 2 == 0) throw PatternError(PatternError::Code::precondition, "|A| must be odd");
  const int k = static_cast<int>(a.size() - 1) / 2;
  const int d = std::prev(a.end())->degree();
  if (d <= 2 * k) throw PatternError(PatternError::Code::precondition, "max(A) must exceed |A| - 1");

  std::vector<Exponent> basis;
  for (int b = 0; b <= k; ++b) basis.push_back(Exponent{b});
  PatternFamily fam;
  fam.dim = 1;
  for (int i = 0; i <= d - 2 * k; ++i) {
    ExponentSet span;
    for (int j = i; j <= i + 2 * k; ++j) span.insert(Exponent{j});
    Pattern p = make_pattern(std::move(span), PatternKind::sos_block);
    p.info = SosBlockInfo{basis, Exponent{i}};
    fam.patterns.push_back(std::move(p));
  }
  return fam;
}

Pattern make_circuit(const Exponent& beta, const std::vector<Exponent>& gammas) {
  if (gammas.empty()) throw PatternError(PatternError::Code::precondition, "circuit needs vertices");
  const std::size_t n = beta.dim();
  const std::size_t k = gammas.size();
  Eigen::MatrixXd m(n + 1, k);
  Eigen::VectorXd rhs(n + 1);
  for (std::size_t j = 0; j < k; ++j) {
    if (gammas[j].dim() != n) throw InvalidArgument("circuit vertices have different dimensions");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = gammas[j][i];
    m(n, j) = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) rhs(i) = beta[i];
  rhs(n) = 1.0;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  if (static_cast<std::size_t>(qr.rank()) != k) {
    throw PatternError(PatternError::Code::affinely_dependent, "circuit vertices are affinely dependent");
  }
  const Eigen::VectorXd lambda = qr.solve(rhs);
  const double residual = (m * lambda - rhs).lpNorm<Eigen::Infinity>();
  if (residual > 1e-10) {
    throw PatternError(PatternError::Code::not_in_relative_interior,
                       to_string(beta) + " is not in the affine hull of the circuit vertices");
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (lambda(j) <= 1e-10) {
      throw PatternError(PatternError::Code::not_in_relative_interior,
                         to_string(beta) + " is not in the relative interior of the simplex");
    }
  }

  ExponentSet points(gammas.begin(), gammas.end());
  points.insert(beta);
  Pattern p = make_pattern(std::move(points), PatternKind::circuit);
  CircuitInfo info{beta, gammas, {}};
  for (std::size_t j = 0; j < k; ++j) info.lambda.push_back(lambda(j));
  p.info = std::move(info);
  return p;
}

Pattern make_sdsos(const Exponent& alpha, const Exponent& beta) {
  Pattern p = make_circuit(alpha + beta, {alpha * 2, beta * 2});
  p.kind = PatternKind::sdsos;
  return p;
}

std::vector<Partition> tssos_partition_trace(const ExponentSet& a, const ExponentSet& b) {
  if (b.empty()) throw PatternError(PatternError::Code::precondition, "TSSOS basis is empty");
  const std::size_t n = common_dim(b);
  if (!a.empty()) check_dimension(a, n);
  if (!is_subset(a, minkowski_sum(b, b))) {
    throw PatternError(PatternError::Code::precondition, "A must be contained in B + B");
  }
  const std::vector<Exponent> nodes(b.begin(), b.end());
  const std::size_t m = nodes.size();

  ExponentSet s = a;
  for (const auto& beta : b) s.insert(beta * 2);

  std::vector<Partition> trace;
  for (std::size_t iter = 0; iter <= m + 1; ++iter) {
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (s.count(nodes[i] + nodes[j])) parent[find(i)] = find(j);
      }
    }
    std::map<std::size_t, ExponentSet> comps;
    for (std::size_t i = 0; i < m; ++i) comps[find(i)].insert(nodes[i]);
    Partition part;
    for (auto& [root, block] : comps) part.blocks.push_back(std::move(block));
    std::sort(part.blocks.begin(), part.blocks.end());

    const bool repeated = !trace.empty() && trace.back() == part;
    if (repeated) return trace;
    trace.push_back(part);

    ExponentSet next;
    for (const auto& block : part.blocks) {
      for (const auto& x : block) {
        for (const auto& y : block) next.insert(x + y);
      }
    }
    s = std::move(next);
  }
  return trace;
}

Partition tssos_partition(const ExponentSet& a, const ExponentSet& b) {
  return tssos_partition_trace(a, b).back();
}

PatternFamily tssos_family(const ExponentSet& a, const ExponentSet& b) {
  const Partition part = tssos_partition(a, b);
  PatternFamily fam;
  fam.dim = b.begin()->dim();
  for (const auto& block : part.blocks) {
    Pattern p = make_pattern(minkowski_sum(block, block), PatternKind::sos_block);
    p.info = SosBlockInfo{std::vector<Exponent>(block.begin(), block.end()), Exponent(fam.dim)};
    fam.patterns.push_back(std::move(p));
  }
  return fam;
}

}  // namespace prelax
