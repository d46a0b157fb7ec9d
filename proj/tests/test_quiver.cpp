#include <gtest/gtest.h>

#include <functional>

#include "icecluster/generators.hpp"
#include "icecluster/jacobian.hpp"
#include "icecluster/mutation.hpp"
#include "icecluster/potential.hpp"
#include "icecluster/quiver.hpp"

using namespace icecluster;

namespace {

IceQuiver e1() { return triangle_example().quiver; }
Potential w_abc() { return triangle_example().potential; }

// Counts paths of length <= cap avoiding the given two-letter factors, by
// walking the quiver directly.
std::size_t count_paths_avoiding(const IceQuiver& q, std::size_t cap,
                                 const std::set<Word>& forbidden) {
  std::size_t total = q.size();
  std::function<void(const Word&, int, std::size_t)> walk =
      [&](const Word& w, int at, std::size_t len) {
        if (len == cap) return;
        for (const Arrow& a : q.arrows()) {
          if (a.src != at) continue;
          if (!w.empty() && forbidden.contains(Word{a.id, w.front()})) continue;
          Word next{a.id};
          next.insert(next.end(), w.begin(), w.end());
          ++total;
          walk(next, a.tgt, len + 1);
        }
      };
  for (const Vertex& v : q.vertices()) walk({}, v.id, 0);
  return total;
}

}  // namespace

TEST(Quiver, TriangleValidates) {
  EXPECT_TRUE(validate(e1()).empty());
  EXPECT_EQ(e1().rank(), 1u);
  EXPECT_TRUE(e1().is_conventional());
}

TEST(Quiver, FrozenArrowNeedsFrozenEnds) {
  IceQuiver q({{1, false}, {2, true}}, {{"a", 1, 2, true}});
  auto d = validate(q);
  ASSERT_EQ(d.size(), 1u);
}

TEST(Quiver, ExchangeColumnOfTriangle) {
  ExchangeMatrix b = exchange_matrix(e1());
  EXPECT_EQ(b.at(1, 1), 0);
  EXPECT_EQ(b.at(2, 1), 1);
  EXPECT_EQ(b.at(3, 1), -1);
}

TEST(Quiver, NormalizedRenumbers) {
  IceQuiver q({{5, true}, {7, false}}, {{"x", 7, 5, false}});
  IceQuiver n = q.normalized();
  EXPECT_TRUE(n.is_conventional());
  EXPECT_EQ(n.original_labels(), (std::vector<int>{7, 5}));
  EXPECT_EQ(n.arrow("x").src, 1);
  EXPECT_EQ(n.arrow("x").tgt, 2);
}

TEST(Quiver, IsomorphismFindsRelabeling) {
  IceQuiver q = e1();
  IceQuiver r = relabel_vertices(q, {{1, 1}, {2, 3}, {3, 2}});
  // swapping the frozen vertices reverses the frozen arrow's role
  auto m = quiver_equal_up_to_labels(q, q);
  ASSERT_TRUE(m.has_value());
  IceQuiver rr({{1, false}, {2, true}, {3, true}},
               {{"u", 3, 1, false}, {"v", 2, 3, true}, {"w", 1, 2, false}});
  EXPECT_TRUE(quiver_equal_up_to_labels(q, rr).has_value());
  IceQuiver bad({{1, false}, {2, true}, {3, true}},
                {{"u", 3, 1, false}, {"v", 3, 2, true}, {"w", 1, 2, false}});
  EXPECT_FALSE(quiver_equal_up_to_labels(q, bad).has_value());
  EXPECT_TRUE(quiver_equal_up_to_labels(q, r).has_value());
}

TEST(Potential, CyclicNormalForm) {
  EXPECT_EQ(cyclic_normal_form({"c", "a", "b"}), (Word{"a", "b", "c"}));
  Potential w;
  w.add({"b", "c", "a"}, 2);
  w.add({"a", "b", "c"}, -2);
  EXPECT_TRUE(w.is_zero());
}

TEST(Potential, CyclicDerivativesOfAbc) {
  Potential w = w_abc();
  EXPECT_EQ(cyclic_derivative(w, "a"), PathPolynomial::word({"b", "c"}));
  EXPECT_EQ(cyclic_derivative(w, "b"), PathPolynomial::word({"c", "a"}));
  EXPECT_EQ(cyclic_derivative(w, "c"), PathPolynomial::word({"a", "b"}));
}

TEST(Potential, DegreeCapOverflowNamesTerm) {
  Potential w(2);
  try {
    w.add({"a", "b", "c"}, 1);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
  }
}

TEST(Potential, JacobianRelationsOnlyForUnfrozenArrows) {
  auto p = jacobian_presentation(e1(), w_abc());
  EXPECT_EQ(p.relations.size(), 2u);
  EXPECT_TRUE(p.relations.contains("a"));
  EXPECT_TRUE(p.relations.contains("c"));
}

TEST(Potential, RedundantPotentialRejected) {
  IceQuiver q({{1, true}, {2, true}}, {{"f", 1, 2, true}, {"g", 2, 1, true}});
  Potential w;
  w.add({"f", "g"}, 1);
  EXPECT_THROW(jacobian_presentation(q, w), DomainError);
}

TEST(Jacobian, TriangleDimensionMatchesPathCount) {
  auto dims = jacobian_dim_upto(jacobian_presentation(e1(), w_abc()), 4);
  // relations bc and ab are monomial, so a basis is the paths avoiding them
  std::size_t oracle = count_paths_avoiding(e1(), 4, {{"b", "c"}, {"a", "b"}});
  EXPECT_EQ(dims.total, oracle);
  EXPECT_EQ(dims.total, 7u);
  EXPECT_EQ(dims.per_length, (std::vector<long>{3, 3, 1, 0, 0}));
  EXPECT_TRUE(dims.stabilized);
}

TEST(Jacobian, ZeroPotentialCountsAllPaths) {
  auto dims = jacobian_dim_upto(jacobian_presentation(e1(), Potential()), 3);
  EXPECT_EQ(dims.total, count_paths_avoiding(e1(), 3, {}));
  EXPECT_EQ(dims.total, 12u);
  EXPECT_FALSE(dims.stabilized);
}

TEST(Jacobian, CapGuard) {
  EXPECT_THROW(jacobian_dim_upto(jacobian_presentation(e1(), w_abc()), 13),
               GuardError);
}

TEST(Mutation, FrozenRolesOfTriangle) {
  EXPECT_EQ(detect_frozen_role(e1(), 3), FrozenRole::source);
  EXPECT_EQ(detect_frozen_role(e1(), 2), FrozenRole::sink);
}

TEST(Mutation, AtOneKeepsCubicTerms) {
  auto r = mutate(e1(), w_abc(), 1);
  EXPECT_EQ(r.record.kind, MutationKind::unfrozen);
  ASSERT_EQ(r.record.composite_arrows.size(), 1u);
  EXPECT_EQ(r.record.composite_arrows[0].id, "[ca]");
  Potential expect;
  expect.add({"b", "[ca]"}, 1);
  expect.add({"[ca]", "a*", "c*"}, 1);
  EXPECT_EQ(r.potential, expect);
  EXPECT_TRUE(r.reduction.eliminated.empty());
  EXPECT_TRUE(validate(r.quiver).empty());
}

TEST(Mutation, AtThreeReducesToTwoArrows) {
  auto r = mutate(e1(), w_abc(), 3);
  EXPECT_EQ(r.record.kind, MutationKind::frozen_source);
  EXPECT_TRUE(r.potential.is_zero());
  IceQuiver expect({{1, false}, {2, true}, {3, true}},
                   {{"b*", 2, 3, true}, {"c*", 3, 1, false}});
  EXPECT_EQ(r.quiver, expect);
  EXPECT_TRUE(r.reduction.reduced);
}

TEST(Mutation, FrozenVertexNeitherSourceNorSinkRejected) {
  IceQuiver q({{1, false}, {2, true}},
              {{"a", 1, 2, false}, {"b", 2, 1, false}});
  EXPECT_THROW(mutate_quiver(q, 2), DomainError);
}

TEST(Mutation, TwoCycleAtUnfrozenRejected) {
  IceQuiver q({{1, false}, {2, false}},
              {{"a", 1, 2, false}, {"b", 2, 1, false}});
  EXPECT_THROW(mutate_quiver(q, 1), DomainError);
}

TEST(Mutation, DoubleMutationReturnsRelabeling) {
  for (const auto& entry : catalog()) {
    auto base = reduce_iqp(entry.quiver, entry.potential);
    for (int v : entry.quiver.unfrozen_ids()) {
      auto once = mutate(entry.quiver, entry.potential, v);
      auto twice = mutate(once.quiver, once.potential, v);
      auto eq = right_equivalent_by_relabeling(twice.quiver, twice.potential,
                                               base.quiver, base.potential);
      EXPECT_TRUE(eq.has_value()) << entry.name << " at " << v;
    }
  }
}

TEST(Generators, CatalogValidatesAndIsIrredundant) {
  for (const auto& e : catalog()) {
    EXPECT_TRUE(validate(e.quiver).empty()) << e.name;
    EXPECT_TRUE(is_irredundant(e.quiver, e.potential)) << e.name;
    EXPECT_TRUE(e.quiver.is_conventional()) << e.name;
  }
}

TEST(Generators, PolygonCounts) {
  auto p4 = polygon_ice_quiver(4, fan_triangulation(4));
  EXPECT_EQ(p4.quiver.rank(), 1u);
  EXPECT_EQ(p4.quiver.size(), 5u);
  EXPECT_THROW(polygon_ice_quiver(3, {}), DomainError);
  EXPECT_THROW(polygon_ice_quiver(6, {{1, 4}, {2, 5}, {1, 3}}), DomainError);
}

TEST(Generators, PolygonFlipMatchesMutation) {
  // each diagonal flip of a fan, compared with the generator output
  for (int n : {4, 5, 6}) {
    auto diags = fan_triangulation(n);
    auto base = polygon_ice_quiver(n, diags);
    for (std::size_t d = 0; d < diags.size(); ++d) {
      auto [i, j] = diags[d];
      // the quadrilateral around (i, j) in a fan at 1 is 1, j-1, j, j+1
      auto flipped = diags;
      flipped[d] = {j - 1, j + 1};
      auto expect = polygon_ice_quiver(n, flipped);
      IceQuiver mutated = mutate_quiver(base.quiver, static_cast<int>(d) + 1);
      EXPECT_TRUE(quiver_equal_up_to_labels(mutated, expect.quiver).has_value())
          << n << " flip (" << i << "," << j << ")";
    }
  }
}

TEST(Generators, GridShapes) {
  auto g24 = grid_ice_quiver(2, 4);
  EXPECT_EQ(g24.quiver.size(), 4u);
  EXPECT_EQ(g24.quiver.rank(), 1u);
  EXPECT_EQ(g24.quiver.arrows().size(), 4u);
  EXPECT_EQ(g24.potential.terms().size(), 1u);
  EXPECT_EQ(grid_ice_quiver(2, 5).quiver.rank(), 2u);
  EXPECT_TRUE(grid_ice_quiver(1, 5).degenerate);
  EXPECT_THROW(grid_ice_quiver(6, 12), GuardError);
}
