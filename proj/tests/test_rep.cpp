#include <gtest/gtest.h>

#include <random>
#include <set>

#include "icecluster/generators.hpp"
#include "icecluster/rep.hpp"

using namespace icecluster;

namespace {

IceQuiver e1() { return triangle_example().quiver; }
Potential w_abc() { return triangle_example().potential; }

IceQuiver a2() { return IceQuiver({{1, false}, {2, false}}, {{"a", 1, 2, false}}); }

RatMatrix scalar(long v) {
  RatMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

QuiverRep identity_a2(std::size_t d) {
  return QuiverRep{{d, d}, {{"a", RatMatrix::identity(d)}}, Orientation::left};
}

long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

using Vec = std::vector<long>;

// All e-dimensional subspaces of F_p^d as sorted vector sets, built from
// spans of e-tuples of vectors.
std::set<std::set<Vec>> all_subspaces(std::size_t d, std::size_t e, long p) {
  std::vector<Vec> vecs;
  long total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= p;
  for (long code = 0; code < total; ++code) {
    Vec v(d);
    long c = code;
    for (auto& x : v) {
      x = c % p;
      c /= p;
    }
    vecs.push_back(v);
  }
  std::set<std::set<Vec>> out;
  std::vector<std::size_t> pick(e, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == e) {
      std::set<Vec> span;
      long combos = 1;
      for (std::size_t i = 0; i < e; ++i) combos *= p;
      for (long code = 0; code < combos; ++code) {
        Vec v(d, 0);
        long c = code;
        for (std::size_t i = 0; i < e; ++i) {
          for (std::size_t j = 0; j < d; ++j) v[j] = (v[j] + (c % p) * vecs[pick[i]][j]) % p;
          c /= p;
        }
        span.insert(v);
      }
      if (static_cast<long>(span.size()) == combos) out.insert(span);
      return;
    }
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      pick[k] = i;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

// Subrep count for a left rep of a quiver with arrows between two vertices,
// by brute force over vector sets.
long brute_subreps_two(const RatMatrix& m, std::size_t d1, std::size_t d2,
                       std::size_t e1, std::size_t e2, long p) {
  long count = 0;
  for (const auto& u : all_subspaces(d1, e1, p)) {
    for (const auto& w : all_subspaces(d2, e2, p)) {
      bool ok = true;
      for (const auto& v : u) {
        Vec img(d2, 0);
        for (std::size_t i = 0; i < d2; ++i) {
          for (std::size_t j = 0; j < d1; ++j) {
            img[i] = (img[i] + reduce_mod(m(i, j), p) * v[j]) % p;
          }
        }
        if (!w.contains(img)) ok = false;
      }
      count += ok;
    }
  }
  return count;
}

}  // namespace

TEST(Rep, RelationsOfSimpleHold) {
  QuiverRep s1{{1, 0, 0}, {}, Orientation::left};
  EXPECT_FALSE(check_relations(e1(), w_abc(), s1).has_value());
}

TEST(Rep, RelationFailureNamesArrowA) {
  QuiverRep r{{1, 1, 1}, {{"a", scalar(1)}, {"b", scalar(1)}, {"c", scalar(1)}},
              Orientation::left};
  auto f = check_relations(e1(), w_abc(), r);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->arrow, "a");
}

TEST(Rep, ZeroPotentialAlwaysPasses) {
  QuiverRep r{{1, 1, 1}, {{"a", scalar(1)}, {"b", scalar(1)}, {"c", scalar(1)}},
              Orientation::left};
  EXPECT_FALSE(check_relations(e1(), Potential(), r).has_value());
  EXPECT_FALSE(is_nilpotent(e1(), r));
}

TEST(Rep, ShapeMismatchRejected) {
  QuiverRep r{{1, 1}, {{"a", RatMatrix(2, 1)}}, Orientation::left};
  EXPECT_THROW(complete_rep(a2(), r), DomainError);
}

TEST(Grassmannian, ProjectiveLinePoints) {
  IceQuiver q = IceQuiver::with_vertices(1, 0);
  QuiverRep r{{2}, {}, Orientation::left};
  EXPECT_EQ(count_subreps(q, r, {1}, 2), 3);
  EXPECT_EQ(count_subreps(q, r, {1}, 3), 4);
  EXPECT_EQ(euler_characteristic(q, r, {1}).chi, 2);
}

TEST(Grassmannian, IdentityRepOfA2) {
  for (long p : {2L, 3L, 5L}) {
    EXPECT_EQ(count_subreps(a2(), identity_a2(1), {1, 0}, p), 0);
    EXPECT_EQ(count_subreps(a2(), identity_a2(1), {0, 1}, p), 1);
  }
  EXPECT_EQ(euler_characteristic(a2(), identity_a2(1), {1, 0}).chi, 0);
  EXPECT_EQ(euler_characteristic(a2(), identity_a2(1), {0, 1}).chi, 1);
}

TEST(Grassmannian, EnumerationMatchesBruteForce) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int t = 0; t < 6; ++t) {
    RatMatrix m(2, 2);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) m(i, j) = entry(rng);
    }
    QuiverRep r{{2, 2}, {{"a", m}}, Orientation::left};
    for (long p : {2L, 3L}) {
      for (std::size_t e1 = 0; e1 <= 2; ++e1) {
        for (std::size_t e2 = 0; e2 <= 2; ++e2) {
          EXPECT_EQ(count_subreps(a2(), r, {e1, e2}, p),
                    brute_subreps_two(m, 2, 2, e1, e2, p));
        }
      }
    }
  }
}

TEST(Grassmannian, PlainSpacesGiveBinomials) {
  IceQuiver q = IceQuiver::with_vertices(1, 0);
  for (std::size_t d = 0; d <= 5; ++d) {
    for (std::size_t e = 0; e <= d; ++e) {
      QuiverRep r{{d}, {}, Orientation::left};
      EXPECT_EQ(euler_characteristic(q, r, {e}).chi,
                binomial(static_cast<long>(d), static_cast<long>(e)));
    }
  }
}

TEST(Grassmannian, FlagsThroughIdentity) {
  // subreps of k^d -> k^d (identity) are pairs U1 ⊆ U2
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t e2 = 0; e2 <= d; ++e2) {
      for (std::size_t e1 = 0; e1 <= e2; ++e1) {
        auto g = euler_characteristic(a2(), identity_a2(d), {e1, e2});
        EXPECT_EQ(g.chi, binomial(d, e2) * binomial(e2, e1));
        for (const auto& c : g.polynomial) EXPECT_GE(c, 0);
      }
    }
  }
}

TEST(Grassmannian, NonPolynomialCountIsReported) {
  // the rotation by 90 degrees has an invariant line iff -1 is a square
  IceQuiver q({{1, false}}, {{"l", 1, 1, false}});
  RatMatrix rot(2, 2);
  rot(0, 1) = -1;
  rot(1, 0) = 1;
  QuiverRep r{{2}, {{"l", rot}}, Orientation::left};
  try {
    euler_characteristic(q, r, {1});
    FAIL() << "expected a report";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("residuals"), std::string::npos);
  }
}

TEST(Grassmannian, GuardTrips) {
  IceQuiver q({{1, false}}, {{"l", 1, 1, false}});
  QuiverRep r{{12}, {{"l", RatMatrix::identity(12)}}, Orientation::left};
  EXPECT_THROW(count_subreps(q, r, {6}, 3), GuardError);
}

TEST(Presentation, SimpleAtOneOverTriangle) {
  // As a right module S1 is covered by e_1 J = span{e_1, a}; the kernel is
  // spanned by a, whose top sits at vertex 2.
  QuiverRep s1{{1, 0, 0}, {}, Orientation::right};
  auto p = minimal_presentation(e1(), w_abc(), s1);
  EXPECT_EQ(p.p0, (std::vector<long>{1, 0, 0}));
  EXPECT_EQ(p.p1, (std::vector<long>{0, 1, 0}));
  EXPECT_EQ(p.g, (std::vector<long>{1, -1, 0}));
  // as a left module the cover is J e_1 = span{e_1, c}
  s1.orientation = Orientation::left;
  EXPECT_EQ(minimal_presentation(e1(), w_abc(), s1).g,
            (std::vector<long>{1, 0, -1}));
}

TEST(Presentation, ZeroModule) {
  QuiverRep z{{0, 0, 0}, {}, Orientation::right};
  auto p = minimal_presentation(e1(), w_abc(), z);
  EXPECT_EQ(p.g, (std::vector<long>{0, 0, 0}));
  EXPECT_EQ(p.p0, (std::vector<long>{0, 0, 0}));
}

TEST(Presentation, ProjectivesGiveUnitVectors) {
  for (int i = 1; i <= 3; ++i) {
    QuiverRep pi = projective_module(e1(), w_abc(), i);
    EXPECT_FALSE(check_relations(e1(), w_abc(), pi).has_value());
    auto p = minimal_presentation(e1(), w_abc(), pi);
    std::vector<long> unit(3, 0);
    unit[static_cast<std::size_t>(i - 1)] = 1;
    EXPECT_EQ(p.g, unit) << i;
    EXPECT_EQ(p.p1, (std::vector<long>{0, 0, 0})) << i;
  }
}

TEST(Presentation, IndependentOfBasis) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int i = 1; i <= 3; ++i) {
    QuiverRep m = projective_module(e1(), w_abc(), i);
    const auto g = minimal_presentation(e1(), w_abc(), m).g;
    // random invertible change of basis at every vertex
    std::vector<RatMatrix> base, inv;
    for (std::size_t v = 0; v < 3; ++v) {
      const std::size_t d = m.dims[v];
      RatMatrix t;
      do {
        t = RatMatrix(d, d);
        for (std::size_t r = 0; r < d; ++r) {
          for (std::size_t c = 0; c < d; ++c) t(r, c) = entry(rng);
        }
      } while (t.rank() != d);
      RatMatrix aug = t.hconcat(RatMatrix::identity(d));
      aug.rref();
      RatMatrix ti(d, d);
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) ti(r, c) = aug(r, d + c);
      }
      base.push_back(t);
      inv.push_back(ti);
    }
    QuiverRep moved = m;
    const IceQuiver q = e1();
    for (const Arrow& a : q.arrows()) {
      auto [from, to] = map_ends(a, m.orientation);
      moved.maps[a.id] = base[static_cast<std::size_t>(to - 1)] * m.maps[a.id] *
                         inv[static_cast<std::size_t>(from - 1)];
    }
    EXPECT_EQ(minimal_presentation(e1(), w_abc(), moved).g, g);
  }
}
