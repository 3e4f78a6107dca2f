#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "prelax/patterns.hpp"

using namespace prelax;

namespace {

bool contains_pattern(const PatternFamily& fam, const ExponentSet& s) {
  return std::any_of(fam.patterns.begin(), fam.patterns.end(), [&](const Pattern& p) { return p.exponents == s; });
}

bool pruned(const PatternFamily& fam) {
  for (std::size_t i = 0; i < fam.patterns.size(); ++i)
    for (std::size_t j = 0; j < fam.patterns.size(); ++j)
      if (i != j && is_subset(fam.patterns[i].exponents, fam.patterns[j].exponents)) return false;
  return true;
}

ExponentSet random_support(std::size_t n, int deg, int k, std::mt19937& gen) {
  std::uniform_int_distribution<int> e(0, deg);
  ExponentSet a;
  while (static_cast<int>(a.size()) < k) {
    Exponent x(n);
    for (std::size_t i = 0; i < n; ++i) x.set(i, e(gen));
    if (x.degree() >= 1 && x.degree() <= deg) a.insert(x);
  }
  return a;
}

}  // namespace

TEST_CASE("multilinear family") {
  const auto f = multilinear_family({{3, 3}});
  REQUIRE(f.patterns.size() == 1);
  CHECK(f.patterns[0].exponents == ExponentSet{{0, 0}, {3, 0}, {0, 3}, {3, 3}});
  CHECK(f.patterns[0].kind == PatternKind::multilinear);
  CHECK(multilinear_family({{0, 0}}).patterns[0].exponents == ExponentSet{{0, 0}});
  const auto g = multilinear_family({{1, 1}, {1, 0}});
  REQUIRE(g.patterns.size() == 1);
  CHECK(g.patterns[0].exponents == ExponentSet{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

TEST_CASE("chain family") {
  CHECK(chain_family({{2, 2}}).patterns[0].exponents == ExponentSet{{0, 0}, {1, 1}, {2, 2}});
  CHECK(chain_family({{1, 2}}).patterns[0].exponents == ExponentSet{{0, 0}, {1, 2}, {2, 4}});
  CHECK(chain_family({{3, 0}}).patterns[0].exponents == ExponentSet{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
  const auto p = chain_pattern({1, 2}, 1);
  REQUIRE(p.gamma());
  CHECK(p.gamma()->columns == std::vector<Exponent>{{1, 2}});
  CHECK(p.gamma()->half_degree == 1);
}

TEST_CASE("shifted chain family") {
  const auto f = shifted_chain_family({{2, 3}});
  CHECK(contains_pattern(f, {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {2, 4}}));
  const auto g = shifted_chain_family({{1, 1}});
  CHECK(contains_pattern(g, {{0, 1}, {1, 1}, {2, 1}}));
  for (const auto& p : g.patterns) {
    REQUIRE(p.shift);
    CHECK(p.kind == PatternKind::shifted_chain);
  }
  const auto z = shifted_chain_family({{0, 0}});
  CHECK(z.patterns.size() == 1);
  CHECK(z.patterns[0].exponents == ExponentSet{{0, 0}});
}

TEST_CASE("H family") {
  const auto f = h_family({{2, 2}});
  CHECK(contains_pattern(f, {{0, 0}, {1, 0}, {2, 0}}));
  CHECK(contains_pattern(f, {{0, 0}, {0, 1}, {0, 2}}));
  CHECK(contains_pattern(f, {{0, 0}, {1, 1}, {2, 2}}));
  CHECK(contains_pattern(f, {{0, 0}, {2, 0}, {0, 2}, {2, 2}}));
  CHECK(contains_pattern(f, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  CHECK(pruned(f));
  const auto g = h_family({{1}});
  REQUIRE(g.patterns.size() == 1);
  CHECK(g.patterns[0].exponents == ExponentSet{{0}, {1}, {2}});
  const auto z = h_family({{0, 0}});
  REQUIRE(z.patterns.size() == 1);
  CHECK(z.patterns[0].exponents == ExponentSet{{0, 0}});
}

TEST_CASE("truncated submonoid family") {
  const auto f = truncated_submonoid_family({{4, 0}});
  REQUIRE(f.patterns.size() == 1);
  CHECK(f.patterns[0].exponents == ExponentSet{{0, 0}, {2, 0}, {0, 2}, {4, 0}, {2, 2}, {0, 4}});
  const auto g = truncated_submonoid_family({{1, 0}});
  CHECK(contains_pattern(g, {{0, 0}, {1, 0}, {2, 0}}));
  CHECK(pruned(g));
  const auto z = truncated_submonoid_family({{0, 0}});
  REQUIRE(z.patterns.size() == 1);
  CHECK(z.patterns[0].exponents == ExponentSet{{0, 0}});
  PatternLimits tiny;
  tiny.max_cardinality = 3;
  CHECK_THROWS_AS(truncated_submonoid_family({{3, 3}}, tiny), PatternError);
}

TEST_CASE("gamma image") {
  const auto p = gamma_image({{2, 0}, {0, 2}}, truncated_exponents(2, 2));
  CHECK(p.exponents == ExponentSet{{0, 0}, {2, 0}, {0, 2}, {4, 0}, {2, 2}, {0, 4}});
  CHECK(p.kind == PatternKind::submonoid);
  CHECK(gamma_image({{1, 2}}, {{0}, {1}, {2}}).exponents == ExponentSet{{0, 0}, {1, 2}, {2, 4}});
  const ExponentSet b{{0, 1}, {3, 2}, {1, 1}};
  CHECK(gamma_image({{1, 0}, {0, 1}}, b).exponents == b);
  try {
    (void)gamma_image({{1, 1}, {2, 2}}, {{0, 0}, {1, 0}});
    FAIL("rank-deficient Gamma accepted");
  } catch (const PatternError& e) {
    CHECK(e.code() == PatternError::Code::rank_deficient);
  }
}

TEST_CASE("expression tree family") {
  Polynomial f(3);
  f.add_term({1, 1, 4}, 1.0);
  const auto fam = expression_tree_family(f);
  CHECK(contains_pattern(fam, {{1, 0, 0}, {0, 1, 0}, {0, 0, 4}, {1, 1, 4}}));
  CHECK(contains_pattern(fam, {{0, 0, 4}, {0, 0, 1}}));
  Polynomial g(3);
  g.add_term({2, 0, 0}, 1.0);
  const auto gf = expression_tree_family(g);
  REQUIRE(gf.patterns.size() == 1);
  CHECK(gf.patterns[0].exponents == ExponentSet{{2, 0, 0}, {1, 0, 0}});
  Polynomial h(3);
  h.add_term({1, 0, 0}, 1.0);
  h.add_term({0, 0, 0}, 2.0);
  CHECK(expression_tree_family(h).patterns.empty());
}

TEST_CASE("circuits") {
  const auto c = make_circuit({1, 1}, {{0, 0}, {3, 0}, {0, 3}});
  REQUIRE(c.circuit());
  for (double l : c.circuit()->lambda) CHECK(std::abs(l - 1.0 / 3.0) <= 1e-12);
  try {
    (void)make_circuit({3, 0}, {{0, 0}, {3, 0}, {0, 3}});
    FAIL("vertex accepted");
  } catch (const PatternError& e) {
    CHECK(e.code() == PatternError::Code::not_in_relative_interior);
  }
  try {
    (void)make_circuit({1, 1}, {{0, 0}, {1, 1}, {2, 2}});
    FAIL("dependent accepted");
  } catch (const PatternError& e) {
    CHECK(e.code() == PatternError::Code::affinely_dependent);
  }
  const auto s = make_sdsos({1, 0}, {0, 1});
  CHECK(s.kind == PatternKind::sdsos);
  CHECK(s.exponents == ExponentSet{{1, 1}, {2, 0}, {0, 2}});
  CHECK(s.circuit()->beta == Exponent{1, 1});
  for (double l : s.circuit()->lambda) CHECK(std::abs(l - 0.5) <= 1e-12);

  std::mt19937 gen(7);
  std::uniform_int_distribution<int> e(0, 6);
  int built = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Exponent> g;
    for (int i = 0; i < 3; ++i) g.push_back(Exponent{2 * e(gen), 2 * e(gen)});
    const Exponent beta{e(gen), e(gen)};
    try {
      const auto p = make_circuit(beta, g);
      ++built;
      double sum = 0.0, b0 = 0.0, b1 = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double l = p.circuit()->lambda[i];
        CHECK(l > 0.0);
        sum += l;
        b0 += l * g[i][0];
        b1 += l * g[i][1];
      }
      CHECK(std::abs(sum - 1) <= 1e-10);
      CHECK(std::abs(b0 - beta[0]) <= 1e-10);
      CHECK(std::abs(b1 - beta[1]) <= 1e-10);
    } catch (const PatternError&) {
    }
  }
  CHECK(built > 0);
}

TEST_CASE("TSSOS partition") {
  const auto p = tssos_partition({{0}, {4}}, {{0}, {1}, {2}});
  CHECK(p.blocks.size() == 2);
  CHECK(std::find(p.blocks.begin(), p.blocks.end(), ExponentSet{{0}, {2}}) != p.blocks.end());
  CHECK(std::find(p.blocks.begin(), p.blocks.end(), ExponentSet{{1}}) != p.blocks.end());
  const ExponentSet b = truncated_exponents(2, 1);
  CHECK(tssos_partition(minkowski_sum(b, b), b).blocks == std::vector<ExponentSet>{b});
  const auto q = tssos_partition({{0}}, {{0}, {1}});
  CHECK(q.blocks.size() == 2);
  CHECK_THROWS_AS(tssos_partition({{5}}, {{0}, {1}}), PatternError);
}

TEST_CASE("TSSOS partitions coarsen monotonically") {
  std::mt19937 gen(9);
  for (int trial = 0; trial < 30; ++trial) {
    const ExponentSet b = truncated_exponents(2, 2);
    const ExponentSet bb = minkowski_sum(b, b);
    ExponentSet a;
    for (const auto& x : bb)
      if (std::uniform_int_distribution<int>(0, 5)(gen) == 0) a.insert(x);
    a.insert(Exponent{0, 0});
    const auto trace = tssos_partition_trace(a, b);
    CHECK(trace.size() <= b.size() + 1);
    for (std::size_t t = 0; t + 1 < trace.size(); ++t) {
      for (const auto& blk : trace[t].blocks) {
        CHECK(std::any_of(trace[t + 1].blocks.begin(), trace[t + 1].blocks.end(),
                          [&](const ExponentSet& big) { return is_subset(blk, big); }));
      }
    }
    ExponentSet uni;
    for (const auto& blk : trace.back().blocks) uni.insert(blk.begin(), blk.end());
    CHECK(uni == b);
  }
}

TEST_CASE("univariate sparse family") {
  const auto f = univariate_sparse_family({{0}, {2}, {6}});
  REQUIRE(f.patterns.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(f.patterns[i].exponents == ExponentSet{{i}, {i + 1}, {i + 2}});
    REQUIRE(f.patterns[i].sos_block());
    CHECK(f.patterns[i].sos_block()->multiplier == Exponent{i});
  }
  CHECK_THROWS_AS(univariate_sparse_family({{0}, {1}, {2}}), PatternError);
  CHECK_THROWS_AS(univariate_sparse_family({{0}, {3}}), PatternError);
  const auto g = univariate_sparse_family({{0}, {3}, {4}, {7}, {10}});
  REQUIRE(g.patterns.size() == 7);
  CHECK(g.patterns[6].exponents == ExponentSet{{6}, {7}, {8}, {9}, {10}});
}

TEST_CASE("pruning") {
  PatternFamily f{1, {make_pattern({{0}, {1}}), make_pattern({{0}, {1}, {2}})}};
  auto p = prune_inclusion_maximal(f);
  REQUIRE(p.patterns.size() == 1);
  CHECK(p.patterns[0].exponents == ExponentSet{{0}, {1}, {2}});
  PatternFamily g{1, {make_pattern({{0}, {1}}), make_pattern({{1}, {2}})}};
  CHECK(prune_inclusion_maximal(g).patterns.size() == 2);
  PatternFamily h{1, {make_pattern({{0}, {1}}), make_pattern({{0}, {1}})}};
  CHECK(prune_inclusion_maximal(h).patterns.size() == 1);
}

TEST_CASE("families are pruned, dimensioned and cover A") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_support(3, 4, 6, gen);
    Polynomial f(3);
    for (const auto& e : a) f.add_term(e, 1.0);
    const std::vector<PatternFamily> fams = {multilinear_family(a), chain_family(a), shifted_chain_family(a), h_family(a),
                                             truncated_submonoid_family(a), mc_family(a), expression_tree_family(f)};
    for (const auto& fam : fams) {
      CHECK(fam.patterns.size() <= 200);
      CHECK(pruned(fam));
      for (const auto& p : fam.patterns) {
        CHECK_FALSE(p.exponents.empty());
        check_dimension(p.exponents, 3);
      }
    }
    for (std::size_t k = 0; k + 1 < fams.size(); ++k) {
      const auto cov = fams[k].covered();
      for (const auto& e : a) CHECK(cov.count(e));
    }
    for (const auto& p : chain_family(a).patterns) {
      CHECK(p.exponents.count(Exponent(3)));
    }
  }
}
