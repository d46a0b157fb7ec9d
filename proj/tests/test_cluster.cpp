#include <gtest/gtest.h>

#include <random>

#include "icecluster/generators.hpp"
#include "icecluster/laurent.hpp"
#include "icecluster/seed.hpp"

using namespace icecluster;

namespace {

LaurentPoly x(std::size_t n, std::size_t i) { return LaurentPoly::variable(n, i); }
LaurentPoly one(std::size_t n) { return LaurentPoly::constant(n, 1); }

Seed e1_seed() { return initial_seed(triangle_example().quiver); }

Seed a2_seed() {
  return initial_seed(IceQuiver({{1, false}, {2, false}}, {{"a", 1, 2, false}}));
}

LaurentPoly random_poly(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> exp(-2, 2), coeff(-3, 3), count(1, 4);
  LaurentPoly p(n);
  for (int t = count(rng); t > 0; --t) {
    Exponent e(n);
    for (auto& v : e) v = exp(rng);
    p.add_term(e, coeff(rng));
  }
  return p;
}

// Random acyclic-free quiver on n vertices with the last f frozen; arrows
// only go from lower to higher ids, so there are no 2-cycles.
IceQuiver random_quiver(std::mt19937& rng, int n, int f) {
  std::vector<Vertex> vs;
  for (int i = 1; i <= n; ++i) vs.push_back({i, i > n - f});
  std::vector<Arrow> as;
  std::uniform_int_distribution<int> mult(0, 2);
  int id = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (i > n - f && j > n - f) continue;
      for (int k = mult(rng); k > 0; --k) {
        as.push_back({"r" + std::to_string(++id), i, j, false});
      }
    }
  }
  return IceQuiver(vs, as);
}

}  // namespace

TEST(Laurent, MonomialDivision) {
  const std::size_t n = 3;
  LaurentPoly num = x(n, 1) + x(n, 2);
  LaurentPoly q = num.exact_div(x(n, 0));
  EXPECT_EQ(q.to_string(default_variable_names(3, 1)), "x1^-1*p1 + x1^-1*p2");
  EXPECT_EQ(q.to_fraction_string(default_variable_names(3, 1)),
            "(p1 + p2)/x1");
  EXPECT_EQ(q * x(n, 0), num);
}

TEST(Laurent, CancellationLeavesEmptyTerms) {
  LaurentPoly p = x(2, 0) * x(2, 1) - x(2, 0) * x(2, 1);
  EXPECT_TRUE(p.is_zero());
  EXPECT_TRUE(p.terms().empty());
}

TEST(Laurent, DivisionRecoversFactor) {
  LaurentPoly a = x(1, 0) + one(1);
  LaurentPoly b = x(1, 0) - one(1);
  EXPECT_EQ((a * b).exact_div(a), b);
  EXPECT_THROW((a * b).exact_div(x(1, 0) + one(1).scaled(2)), InexactDivision);
  EXPECT_THROW(a.exact_div(one(1).scaled(2)), InexactDivision);
}

TEST(Laurent, RandomProductsDivideBack) {
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    LaurentPoly a = random_poly(rng, 3);
    LaurentPoly b = random_poly(rng, 3);
    if (b.is_zero()) continue;
    EXPECT_EQ((a * b).exact_div(b), a);
  }
}

TEST(Laurent, SpecializeCollapsesFrozen) {
  const std::size_t n = 4;  // x1, x2, p1, p2
  LaurentPoly p = x(n, 0) * x(n, 2) + x(n, 1) * x(n, 3).pow(2);
  EXPECT_EQ(specialize_frozen(p, 2), x(2, 0) + x(2, 1));
  EXPECT_EQ(specialize_frozen(x(n, 2) * x(n, 3), 2), one(2));
}

TEST(Seed, TriangleExchange) {
  Seed s = mutate_seed(e1_seed(), 1);
  EXPECT_EQ(s.cluster[0].to_fraction_string(s.names()), "(p1 + p2)/x1");
  EXPECT_EQ(s.cluster[0] * x(3, 0), x(3, 1) + x(3, 2));
  EXPECT_EQ(s.tree_address, std::vector<int>{1});
  EXPECT_EQ(mutate_seed(s, 1), e1_seed());
  EXPECT_THROW(mutate_seed(e1_seed(), 2), DomainError);
}

TEST(Seed, RankTwoExchange) {
  Seed s = mutate_seed(a2_seed(), 1);
  EXPECT_EQ(s.cluster[0] * x(2, 0), x(2, 1) + one(2));
}

TEST(Seed, HattedY) {
  EXPECT_EQ(hatted_y(e1_seed(), 1), x(3, 1) * x(3, 2).monomial_inverse());
  Seed lone = initial_seed(IceQuiver::with_vertices(2, 0));
  EXPECT_EQ(hatted_y(lone, 1), one(2));
  // b_21 = #(2 -> 1) - #(1 -> 2) = -1 for the single arrow 1 -> 2
  EXPECT_EQ(hatted_y(a2_seed(), 1), x(2, 1).monomial_inverse());
  EXPECT_THROW(hatted_y(e1_seed(), 2), DomainError);
}

TEST(Seed, TrianglePatternHasTwoVariables) {
  auto reg = enumerate_pattern(e1_seed(), 4);
  EXPECT_EQ(reg.seeds.size(), 2u);
  ASSERT_EQ(reg.cluster_variables.size(), 2u);
  EXPECT_EQ(reg.cluster_variables[0], x(3, 0));
  EXPECT_EQ(reg.cluster_variables[1] * x(3, 0), x(3, 1) + x(3, 2));
  EXPECT_TRUE(reg.stabilized);
}

TEST(Seed, RankTwoPatternMatchesPentagonRecurrence) {
  // u_{k+1} = (u_k + 1) / u_{k-1} starting from x1, x2
  std::vector<LaurentPoly> seq{x(2, 0), x(2, 1)};
  for (int k = 0; k < 5; ++k) {
    const auto& a = seq[seq.size() - 2];
    const auto& b = seq.back();
    seq.push_back((b + one(2)).exact_div(a));
  }
  EXPECT_EQ(seq[5], seq[0]);
  std::set<std::string> expect;
  for (int k = 0; k < 5; ++k) expect.insert(seq[k].key());
  auto reg = enumerate_pattern(a2_seed(), 6);
  std::set<std::string> got;
  for (const auto& v : reg.cluster_variables) got.insert(v.key());
  EXPECT_EQ(got, expect);
  EXPECT_TRUE(reg.stabilized);
}

TEST(Seed, DepthZeroAndGuard) {
  auto reg = enumerate_pattern(e1_seed(), 0);
  EXPECT_EQ(reg.seeds.size(), 1u);
  EXPECT_THROW(enumerate_pattern(e1_seed(), 9), GuardError);
}

TEST(Seed, RandomInvolution) {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 5)(rng);
    const int f = std::uniform_int_distribution<int>(0, n - 1)(rng);
    Seed s = initial_seed(random_quiver(rng, n, f));
    const int steps = std::uniform_int_distribution<int>(0, 4)(rng);
    std::uniform_int_distribution<int> pick(1, n - f);
    for (int i = 0; i < steps; ++i) s = mutate_seed(s, pick(rng));
    const int k = pick(rng);
    EXPECT_EQ(mutate_seed(mutate_seed(s, k), k), s);
  }
}

TEST(Seed, SpecializationCommutesWithMutation) {
  for (const auto& entry : catalog()) {
    if (entry.degenerate) continue;
    auto reg = enumerate_pattern(initial_seed(entry.quiver), 3);
    for (const Seed& s : reg.seeds) {
      for (int k : s.quiver.unfrozen_ids()) {
        Seed a = specialize_seed(mutate_seed(s, k));
        Seed b = mutate_seed(specialize_seed(s), k);
        EXPECT_EQ(a.cluster, b.cluster) << entry.name;
      }
    }
  }
}

TEST(Seed, LaurentPhenomenonOnRandomQuivers) {
  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    Seed s = initial_seed(random_quiver(rng, n, 0));
    EXPECT_NO_THROW(enumerate_pattern(s, 4));
  }
}

TEST(Seed, FrozenExponentsStayNonnegative) {
  for (const auto& entry : catalog()) {
    if (entry.degenerate) continue;
    auto reg = enumerate_pattern(initial_seed(entry.quiver), 4);
    const std::size_t r = entry.quiver.rank();
    for (const auto& v : reg.cluster_variables) {
      for (const auto& [e, c] : v.terms()) {
        for (std::size_t i = r; i < e.size(); ++i) EXPECT_GE(e[i], 0) << entry.name;
      }
    }
  }
}

TEST(Generators, PolygonAndGridPatternSizes) {
  auto p5 = polygon_ice_quiver(5, fan_triangulation(5));
  auto reg = enumerate_pattern(initial_seed(p5.quiver), 6);
  EXPECT_TRUE(reg.stabilized);
  EXPECT_EQ(reg.cluster_variables.size(), 5u);
  auto g25 = grid_ice_quiver(2, 5);
  auto reg2 = enumerate_pattern(initial_seed(g25.quiver), 6);
  EXPECT_TRUE(reg2.stabilized);
  EXPECT_EQ(reg2.cluster_variables.size(), 5u);
}

TEST(Seed, PatternFromMutatedRootWalksBack) {
  Seed s = mutate_seed(e1_seed(), 1);
  auto reg = enumerate_pattern(s, 3);
  EXPECT_EQ(reg.cluster_variables.size(), 2u);
  EXPECT_EQ(reg.seeds.size(), 2u);
  EXPECT_EQ(reg.seeds[1].tree_address, (std::vector<int>{1, 1}));
}
