#include <gtest/gtest.h>

#include <random>

#include "icecluster/character.hpp"
#include "icecluster/generators.hpp"
#include "icecluster/seed.hpp"

using namespace icecluster;

namespace {

IceQuiver e1() { return triangle_example().quiver; }
Potential w_abc() { return triangle_example().potential; }
IceQuiver a2() { return IceQuiver({{1, false}, {2, false}}, {{"a", 1, 2, false}}); }

LaurentPoly x(std::size_t n, std::size_t i) { return LaurentPoly::variable(n, i); }

QuiverRep zero_module(std::size_t n) {
  return QuiverRep{std::vector<std::size_t>(n, 0), {}, Orientation::right};
}

QuiverRep simple(std::size_t n, std::size_t i) {
  QuiverRep m = zero_module(n);
  m.dims[i] = 1;
  return m;
}

// the right module of A2 with both spaces k and the arrow acting as 1
QuiverRep a2_projective_two() {
  RatMatrix one(1, 1);
  one(0, 0) = 1;
  return QuiverRep{{1, 1}, {{"a", one}}, Orientation::right};
}

QuiverRep direct_sum(const QuiverRep& a, const QuiverRep& b,
                     const IceQuiver& q) {
  QuiverRep ca = complete_rep(q, a), cb = complete_rep(q, b);
  QuiverRep out{{}, {}, a.orientation};
  for (std::size_t i = 0; i < a.dims.size(); ++i) out.dims.push_back(a.dims[i] + b.dims[i]);
  for (const Arrow& arr : q.arrows()) {
    const RatMatrix& x1 = ca.maps.at(arr.id);
    const RatMatrix& x2 = cb.maps.at(arr.id);
    RatMatrix m(x1.rows() + x2.rows(), x1.cols() + x2.cols());
    for (std::size_t i = 0; i < x1.rows(); ++i) {
      for (std::size_t j = 0; j < x1.cols(); ++j) m(i, j) = x1(i, j);
    }
    for (std::size_t i = 0; i < x2.rows(); ++i) {
      for (std::size_t j = 0; j < x2.cols(); ++j) m(x1.rows() + i, x1.cols() + j) = x2(i, j);
    }
    out.maps.emplace(arr.id, m);
  }
  return out;
}

// Character inputs of the A2 cluster variables: shifted projectives and the
// three indecomposable modules, each with the index computed from it.
std::vector<CharacterInput> a2_inputs() {
  std::vector<CharacterInput> out{{{1, 0}, zero_module(2)},
                                  {{0, 1}, zero_module(2)}};
  for (const QuiverRep& m : {simple(2, 0), simple(2, 1), a2_projective_two()}) {
    out.push_back({index_from_module(a2(), Potential(), m), m});
  }
  return out;
}

}  // namespace

TEST(Character, ProjectiveInputsGiveInitialVariables) {
  auto rule = CoefficientRule::of(e1());
  EXPECT_EQ(cc({{1, 0, 0}, zero_module(3)}, rule), x(3, 0));
  EXPECT_EQ(cc({{0, 1, 0}, zero_module(3)}, rule), x(3, 1));
  EXPECT_EQ(cc({{0, 0, 1}, zero_module(3)}, rule), x(3, 2));
}

TEST(Character, ExchangePartnerOfTriangle) {
  auto rule = CoefficientRule::of(e1());
  // module over the unfrozen part (length-r dims)
  LaurentPoly v = cc({{-1, 0, 1}, simple(1, 0)}, rule);
  EXPECT_EQ(v * x(3, 0), x(3, 1) + x(3, 2));
  EXPECT_EQ(v, mutate_seed(initial_seed(e1()), 1).cluster[0]);
  // the e = (1) term is x^g · yhat_1
  auto terms = character_terms(rule, simple(1, 0));
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[1].chi, 1);
  LaurentPoly y = detail::monomial_of(rule.minus_l(terms[1].e, Orientation::right));
  EXPECT_EQ(y, hatted_y(initial_seed(e1()), 1));
}

TEST(Character, FrozenDimensionRejected) {
  auto rule = CoefficientRule::of(e1());
  EXPECT_THROW(cc({{0, 0, 0}, simple(3, 1)}, rule), DomainError);
}

TEST(Character, IndexOfSimpleOverTriangle) {
  EXPECT_EQ(index_from_module(e1(), w_abc(), simple(3, 0)),
            (std::vector<long>{-1, 0, 1}));
  // the left-module reading gives a different index but the same character
  QuiverRep left = simple(3, 0);
  left.orientation = Orientation::left;
  auto g = index_from_module(e1(), w_abc(), left);
  auto rule = CoefficientRule::of(e1());
  EXPECT_EQ(cc({g, left}, rule), cc({{-1, 0, 1}, simple(3, 0)}, rule));
}

TEST(Character, MultiplicationFormulaOnTriangle) {
  auto rule = CoefficientRule::of(e1());
  CharacterInput l{{1, 0, 0}, zero_module(3)};
  CharacterInput m{{-1, 0, 1}, simple(3, 0)};
  CharacterInput e{{0, 1, 0}, zero_module(3)};
  CharacterInput e2{{0, 0, 1}, zero_module(3)};
  EXPECT_TRUE(multiplication_check(l, m, e, e2, rule).pass);
}

TEST(Character, MultiplicationFailureReturnsDifference) {
  auto rule = CoefficientRule::of(e1());
  CharacterInput unit{{0, 0, 0}, zero_module(3)};
  auto r = multiplication_check(unit, unit, unit, unit, rule);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.difference, LaurentPoly::constant(3, -1));
}

TEST(Character, RankTwoVariablesMatchPattern) {
  auto rule = CoefficientRule::of(a2());
  std::set<std::string> from_cc;
  for (const auto& in : a2_inputs()) from_cc.insert(cc(in, rule).key());
  auto reg = enumerate_pattern(initial_seed(a2()), 6);
  std::set<std::string> from_seeds;
  for (const auto& v : reg.cluster_variables) from_seeds.insert(v.key());
  EXPECT_EQ(from_cc, from_seeds);
}

TEST(Character, RankTwoExchangePairsMultiply) {
  auto rule = CoefficientRule::of(a2());
  auto inputs = a2_inputs();
  std::map<std::string, CharacterInput> by_value;
  for (const auto& in : inputs) by_value.emplace(cc(in, rule).key(), in);
  auto find = [&](const LaurentPoly& p) -> CharacterInput {
    auto it = by_value.find(p.key());
    if (it != by_value.end()) return it->second;
    // the exchange monomials are products of at most one variable here
    if (p == LaurentPoly::constant(2, 1)) return {{0, 0}, zero_module(2)};
    ADD_FAILURE() << "no input for " << p.to_string({"x1", "x2"});
    return {{0, 0}, zero_module(2)};
  };
  std::mt19937 rng(1);
  auto reg = enumerate_pattern(initial_seed(a2()), 6);
  for (int t = 0; t < 10; ++t) {
    const Seed& s = reg.seeds[rng() % reg.seeds.size()];
    const int k = 1 + static_cast<int>(rng() % 2);
    Seed s2 = mutate_seed(s, k);
    auto [out, in] = exchange_monomials(s, k);
    auto r = multiplication_check(find(s.var(k)), find(s2.var(k)), find(out),
                                  find(in), rule);
    EXPECT_TRUE(r.pass);
  }
}

TEST(Character, MultiplicativeOnDirectSums) {
  auto rule = CoefficientRule::of(a2());
  auto inputs = a2_inputs();
  for (std::size_t i = 2; i < inputs.size(); ++i) {
    for (std::size_t j = 2; j < inputs.size(); ++j) {
      const auto& a = inputs[i];
      const auto& b = inputs[j];
      std::vector<long> g{a.g[0] + b.g[0], a.g[1] + b.g[1]};
      CharacterInput sum{g, direct_sum(a.module, b.module, a2())};
      EXPECT_EQ(cc(sum, rule), cc(a, rule) * cc(b, rule));
    }
  }
}

TEST(Character, LocalizedCharacter) {
  auto rule = CoefficientRule::of(e1());
  // frozen class of P_2 alone
  LocalizedObject p{{1, 0}, {{0, 0, 0}, zero_module(3)}};
  EXPECT_EQ(cc_loc(p, rule), x(3, 1));
  CharacterInput partner{{-1, 0, 1}, simple(3, 0)};
  EXPECT_EQ(cc_loc({{0, 0}, partner}, rule), cc(partner, rule));
  // specializing frozen variables gives the coefficient-free character
  LocalizedObject obj{{2, -1}, partner};
  auto free_rule = CoefficientRule::of(e1().unfrozen_part());
  LaurentPoly bare = cc({{-1}, simple(1, 0)}, free_rule);
  EXPECT_EQ(specialize_frozen(cc_loc(obj, rule), 1), bare);
  EXPECT_THROW(cc_loc({{1, 0, 0}, partner}, rule), DomainError);
}

TEST(Character, ShiftedObjects) {
  auto rule = CoefficientRule::of(e1());
  // P1[1]: the suspension is zero and the injective class is that of p1
  LaurentPoly p1_shift = cc_shift({{0, 0, 0}, zero_module(3)}, {1, 0}, rule);
  EXPECT_EQ(p1_shift, x(3, 1).monomial_inverse());
  // S1[1]: suspension is the exchange partner, injective class that of p2
  CharacterInput partner{{-1, 0, 1}, simple(3, 0)};
  LaurentPoly s1_shift = cc_shift(partner, {0, 1}, rule);
  EXPECT_EQ(s1_shift * x(3, 2), cc(partner, rule));
  EXPECT_EQ(cc_shift(partner, {0, 0}, rule), cc(partner, rule));
}
