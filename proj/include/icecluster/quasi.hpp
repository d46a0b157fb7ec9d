#pragma once

// Quasi-cluster morphisms: ring maps given by the images of the initial
// cluster, the frozen-mutation maps psi+ / psi-, twists assembled from
// shifted characters, and a depth-bounded check of the defining conditions.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/character.hpp"
#include "icecluster/error.hpp"
#include "icecluster/laurent.hpp"
#include "icecluster/mutation.hpp"
#include "icecluster/seed.hpp"

namespace icecluster {

struct QuasiMorphism {
  Seed source;
  Seed target;
  /// Images of the source's initial cluster, in the target's variables.
  std::vector<LaurentPoly> images;
};

inline void check_shape(const QuasiMorphism& m) {
  if (m.images.size() != m.source.n()) {
    throw DomainError("morphism needs " + std::to_string(m.source.n()) +
                      " images, got " + std::to_string(m.images.size()));
  }
  for (const auto& p : m.images) {
    if (p.nvars() != m.target.n()) {
      throw DomainError("image lives in " + std::to_string(p.nvars()) +
                        " variables, target has " +
                        std::to_string(m.target.n()));
    }
  }
}

/// Substitutes the images into p and expands exactly.
inline LaurentPoly apply(const QuasiMorphism& m, const LaurentPoly& p) {
  check_shape(m);
  if (p.nvars() != m.source.n()) {
    throw DomainError("polynomial is not over the source variables");
  }
  const std::size_t n = p.nvars();
  const std::size_t nt = m.target.n();
  // Negative powers of non-monomial images are cleared by one exact
  // division at the end.
  std::vector<bool> monomial(n);
  std::vector<LaurentPoly> inverse(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LaurentPoly& img = m.images[i];
    monomial[i] = img.is_monomial() && abs(img.leading_term().second) == 1;
    if (monomial[i]) inverse[i] = img.monomial_inverse();
    if (img.is_zero()) throw DomainError("an image is zero");
  }
  std::vector<int> clear(n, 0);
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!monomial[i]) clear[i] = std::max(clear[i], -e[i]);
    }
  }
  std::map<std::pair<std::size_t, int>, LaurentPoly> powers;
  auto power = [&](std::size_t i, int k) -> const LaurentPoly& {
    auto key = std::pair{i, k};
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    LaurentPoly v = k >= 0 ? m.images[i].pow(static_cast<unsigned>(k))
                           : inverse[i].pow(static_cast<unsigned>(-k));
    return powers.emplace(key, std::move(v)).first->second;
  };
  LaurentPoly num(nt);
  for (const auto& [e, c] : p.terms()) {
    LaurentPoly t = LaurentPoly::constant(nt, c);
    for (std::size_t i = 0; i < n; ++i) {
      const int k = e[i] + clear[i];
      if (k != 0) t *= power(i, k);
    }
    num += t;
  }
  LaurentPoly den = LaurentPoly::constant(nt, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (clear[i] > 0) den *= power(i, clear[i]);
  }
  return num.exact_div(den);
}

inline QuasiMorphism identity_morphism(const Seed& s) {
  return {s, s, s.cluster};
}

enum class PsiDirection { plus, minus };

/// psi+ (v a frozen source of q) or psi- (v a frozen sink), from the
/// pattern of mu_v(q) to that of q: x_v goes to the product of the x_k
/// over F-arrows v -> k (resp. k -> v), divided by x_v; every other
/// variable is fixed.
inline QuasiMorphism build_psi(const IceQuiver& q, int v, PsiDirection dir) {
  require_conventional(q);
  const FrozenRoles roles = frozen_roles(q, v);
  if (dir == PsiDirection::plus && !roles.source) {
    throw DomainError("psi+ needs a frozen source; vertex " +
                      std::to_string(v) + " is not one");
  }
  if (dir == PsiDirection::minus && !roles.sink) {
    throw DomainError("psi- needs a frozen sink; vertex " + std::to_string(v) +
                      " is not one");
  }
  Seed target = initial_seed(q);
  Seed source = initial_seed(mutate_quiver(q, v));
  QuasiMorphism m{source, target, target.cluster};
  LaurentPoly num = LaurentPoly::constant(q.size(), 1);
  for (const Arrow& a : q.arrows()) {
    if (!a.frozen) continue;
    if (dir == PsiDirection::plus && a.src == v) num *= target.var(a.tgt);
    if (dir == PsiDirection::minus && a.tgt == v) num *= target.var(a.src);
  }
  m.images[static_cast<std::size_t>(v - 1)] =
      num * target.var(v).monomial_inverse();
  return m;
}

/// u_i = cc(ΣT_i) · x^{-[I_i]} for each initial variable; the morphism
/// x_i -> u_i of the rule's own pattern.
inline QuasiMorphism twist_from_conflations(
    const std::vector<std::pair<CharacterInput, std::vector<long>>>& data,
    const CoefficientRule& rule) {
  if (data.size() != rule.n()) {
    throw DomainError("twist needs one conflation per initial variable: " +
                      std::to_string(rule.n()) + " expected, " +
                      std::to_string(data.size()) + " given");
  }
  Seed s = initial_seed(rule.quiver);
  QuasiMorphism m{s, s, {}};
  for (const auto& [susp, inj] : data) {
    m.images.push_back(cc_shift(susp, inj, rule));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Verification

enum class CheckStatus { pass, fail, inconclusive };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ConditionResult {
  CheckStatus status = CheckStatus::pass;
  std::string witness;
};

struct VerificationReport {
  ConditionResult a, b, c;
  int depth_checked = 0;
  /// The source registry stabilized, so every cluster variable was seen.
  bool complete = false;

  bool pass() const {
    return a.status == CheckStatus::pass && b.status == CheckStatus::pass &&
           c.status == CheckStatus::pass;
  }
};

/// A frozen Laurent monomial m with f = m·y, if one exists.
inline std::optional<LaurentPoly> frozen_quotient(const LaurentPoly& f,
                                                  const LaurentPoly& y,
                                                  std::size_t r) {
  if (f.is_zero() || y.is_zero() || f.size() != y.size()) return std::nullopt;
  const auto& [fe, fc] = f.leading_term();
  const auto& [ye, yc] = y.leading_term();
  if (fc != yc) return std::nullopt;
  Exponent e(fe.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = fe[i] - ye[i];
    if (i < r && e[i] != 0) return std::nullopt;
  }
  LaurentPoly m = LaurentPoly::monomial(e);
  if (!(m * y == f)) return std::nullopt;
  return m;
}

inline bool is_frozen_monomial(const LaurentPoly& p, std::size_t r) {
  if (!p.is_unit_monomial()) return false;
  const Exponent& e = p.leading_term().first;
  for (std::size_t i = 0; i < r; ++i) {
    if (e[i] != 0) return false;
  }
  return true;
}

namespace detail {

inline Seed seed_at(const Seed& root, const std::vector<int>& address) {
  Seed s = root;
  s.tree_address.clear();
  for (int k : address) s = mutate_seed(s, k);
  return s;
}

}  // namespace detail

/// Checks, to the given depth, that (a) frozen variables go to frozen
/// monomials and cluster variables to frozen multiples of cluster variables,
/// (b) the specialized initial cluster is a seed of the coefficient-free
/// target pattern with the same exchange matrix, and (c) hatted y's map to
/// hatted y's at that seed. Missing matches are inconclusive unless the
/// searched target registry is complete.
inline VerificationReport verify(const QuasiMorphism& m, int depth) {
  check_shape(m);
  if (depth < 0 || depth > 6) {
    throw GuardError("verification depth must be in [0, 6]");
  }
  const std::size_t n = m.source.n(), r = m.source.r();
  const std::size_t nt = m.target.n(), rt = m.target.r();
  const auto names = m.target.names();
  VerificationReport rep;
  rep.depth_checked = depth;
  if (r != rt) {
    rep.a = rep.b = rep.c = {CheckStatus::fail,
                             "source rank " + std::to_string(r) +
                                 " differs from target rank " +
                                 std::to_string(rt)};
    return rep;
  }
  const int target_depth = std::min(depth + 1, depth_guard());
  const PatternRegistry src = enumerate_pattern(m.source, depth);
  const PatternRegistry tgt = enumerate_pattern(m.target, target_depth);
  rep.complete = src.stabilized;
  const CheckStatus missing =
      tgt.stabilized ? CheckStatus::fail : CheckStatus::inconclusive;

  // (a)
  for (std::size_t i = r; i < n && rep.a.status == CheckStatus::pass; ++i) {
    if (!is_frozen_monomial(m.images[i], rt)) {
      rep.a = {CheckStatus::fail,
               "frozen variable " + m.source.names()[i] + " maps to " +
                   m.images[i].to_fraction_string(names) +
                   ", not a frozen monomial"};
    }
  }
  for (const LaurentPoly& f : src.cluster_variables) {
    if (rep.a.status != CheckStatus::pass) break;
    const LaurentPoly img = apply(m, f);
    bool found = false;
    for (const LaurentPoly& y : tgt.cluster_variables) {
      if (frozen_quotient(img, y, rt)) {
        found = true;
        break;
      }
    }
    if (!found) {
      rep.a = {missing, "image " + img.to_fraction_string(names) + " of " +
                            f.to_fraction_string(m.source.names()) +
                            " is no frozen multiple of a target cluster "
                            "variable within depth " +
                            std::to_string(target_depth)};
    }
  }

  // (b)
  std::vector<LaurentPoly> special;
  for (std::size_t i = 0; i < r; ++i) {
    special.push_back(specialize_frozen(m.images[i], rt));
  }
  const Seed bare_root = specialize_seed(m.target);
  const PatternRegistry bare = enumerate_pattern(bare_root, target_depth);
  const Seed* located = bare.find(special, rt);
  std::vector<std::size_t> perm(r);
  if (located == nullptr) {
    std::string img;
    for (const auto& s : special) img += " " + s.to_fraction_string(names);
    rep.b = {bare.stabilized ? CheckStatus::fail : CheckStatus::inconclusive,
             "specialized initial images" + img +
                 " form no seed of the coefficient-free target pattern"};
    rep.c = {rep.b.status, "no seed located for condition (c)"};
    return rep;
  }
  for (std::size_t i = 0; i < r; ++i) {
    const auto& cl = located->cluster;
    perm[i] = static_cast<std::size_t>(
        std::find(cl.begin(), cl.end(), special[i]) - cl.begin());
  }
  {
    const ExchangeMatrix b = exchange_matrix(m.source.quiver);
    const ExchangeMatrix bt = exchange_matrix(located->quiver);
    for (std::size_t i = 0; i < r && rep.b.status == CheckStatus::pass; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        if (b.b[i][j] != bt.b[perm[i]][perm[j]]) {
          rep.b = {CheckStatus::fail,
                   "exchange matrices differ at (" + std::to_string(i + 1) +
                       "," + std::to_string(j + 1) + "): " +
                       std::to_string(b.b[i][j]) + " vs " +
                       std::to_string(bt.b[perm[i]][perm[j]])};
          break;
        }
      }
    }
  }

  // (c), in exponents over the cluster of t'
  const Seed full = detail::seed_at(m.target, located->tree_address);
  std::vector<std::vector<long>> coords(n, std::vector<long>(nt, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (i < r) {
      auto q = frozen_quotient(m.images[i], full.cluster[perm[i]], rt);
      if (!q) {
        rep.c = {CheckStatus::fail,
                 "image of " + m.source.names()[i] +
                     " is no frozen multiple of the located cluster variable"};
        return rep;
      }
      coords[i][perm[i]] = 1;
      const Exponent& e = q->leading_term().first;
      for (std::size_t k = rt; k < nt; ++k) coords[i][k] = e[k];
    } else {
      if (!is_frozen_monomial(m.images[i], rt)) {
        rep.c = {CheckStatus::fail, "frozen image is not a frozen monomial"};
        return rep;
      }
      const Exponent& e = m.images[i].leading_term().first;
      for (std::size_t k = rt; k < nt; ++k) coords[i][k] = e[k];
    }
  }
  auto monomial_string = [&](const std::vector<long>& v) {
    Exponent e(v.begin(), v.end());
    // names of t': unfrozen positions are cluster variables of t'
    std::vector<std::string> nm = names;
    for (std::size_t i = 0; i < rt; ++i) nm[i] = "x" + std::to_string(i + 1) + "(t')";
    return LaurentPoly::monomial(e).to_fraction_string(nm);
  };
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<long> lhs(nt, 0);
    const std::vector<long> bj = hatted_y_exponents(m.source, static_cast<int>(j + 1));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < nt; ++k) lhs[k] += bj[i] * coords[i][k];
    }
    const std::vector<long> rhs =
        hatted_y_exponents(full, static_cast<int>(perm[j] + 1));
    if (lhs != rhs) {
      rep.c = {CheckStatus::fail,
               "yhat_" + std::to_string(j + 1) + " maps to " +
                   monomial_string(lhs) + " but yhat'_" +
                   std::to_string(perm[j] + 1) + "(t') = " +
                   monomial_string(rhs)};
      break;
    }
  }
  return rep;
}

}  // namespace icecluster
