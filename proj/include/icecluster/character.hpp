#pragma once

// Cluster characters x^g · sum_e chi(Gr_e(M)) x^{-l(e)}, their localized
// and shifted variants, indices from presentations, and the
// multiplication-formula check.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"
#include "icecluster/laurent.hpp"
#include "icecluster/quiver.hpp"
#include "icecluster/rep.hpp"

namespace icecluster {

/// The seed quiver and its extended exchange matrix. For a right module
/// l(e) = -B̃·e, so x^{-l(e)} = prod_j yhat_j^{e_j}; a left module is a right
/// module over the opposite quiver, whose matrix is -B̃.
struct CoefficientRule {
  IceQuiver quiver;
  ExchangeMatrix b_tilde;

  static CoefficientRule of(const IceQuiver& q) {
    require_valid(q);
    if (!q.is_conventional()) {
      throw DomainError("characters need conventional vertex numbering");
    }
    return {q, exchange_matrix(q)};
  }

  std::size_t n() const { return b_tilde.rows.size(); }
  std::size_t r() const { return b_tilde.cols.size(); }

  /// -l(e) for a module of the given orientation.
  std::vector<long> minus_l(const std::vector<std::size_t>& e,
                            Orientation o) const {
    std::vector<long> out(n(), 0);
    const long sign = o == Orientation::right ? 1 : -1;
    for (std::size_t i = 0; i < n(); ++i) {
      for (std::size_t j = 0; j < r(); ++j) {
        out[i] += sign * b_tilde.b[i][j] * static_cast<long>(e[j]);
      }
    }
    return out;
  }
};

/// Index vector g in Z^n and a module over the unfrozen part (dims of
/// length r, or of length n with zeros at frozen vertices).
struct CharacterInput {
  std::vector<long> g;
  QuiverRep module;
};

struct CharacterTerm {
  std::vector<std::size_t> e;
  Integer chi;
};

namespace detail {

/// The module as a rep of the unfrozen part.
inline QuiverRep reduced_module(const CoefficientRule& rule,
                                const QuiverRep& m) {
  const std::size_t n = rule.n(), r = rule.r();
  QuiverRep out;
  out.orientation = m.orientation;
  if (m.dims.size() == n) {
    for (std::size_t i = r; i < n; ++i) {
      if (m.dims[i] != 0) {
        throw DomainError("character modules vanish at frozen vertices; "
                          "vertex " + std::to_string(i + 1) + " has dimension " +
                          std::to_string(m.dims[i]));
      }
    }
    out.dims.assign(m.dims.begin(), m.dims.begin() + static_cast<long>(r));
  } else if (m.dims.size() == r) {
    out.dims = m.dims;
  } else {
    throw DomainError("module dimension vector has length " +
                      std::to_string(m.dims.size()) + ", expected " +
                      std::to_string(r) + " or " + std::to_string(n));
  }
  const IceQuiver qbar = rule.quiver.unfrozen_part();
  for (const auto& [id, mat] : m.maps) {
    if (qbar.find_arrow(id) != nullptr) {
      out.maps.emplace(id, mat);
    } else if (rule.quiver.find_arrow(id) == nullptr) {
      throw DomainError("module has a map for unknown arrow " + id);
    } else if (mat.rows() * mat.cols() != 0) {
      throw DomainError("arrow " + id + " touches a frozen vertex");
    }
  }
  return complete_rep(qbar, out);
}

inline LaurentPoly monomial_of(const std::vector<long>& e) {
  Exponent x(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) x[i] = static_cast<int>(e[i]);
  return LaurentPoly::monomial(std::move(x));
}

}  // namespace detail

/// chi(Gr_e) for every e in the box [0, dims], zero terms included.
inline std::vector<CharacterTerm> character_terms(const CoefficientRule& rule,
                                                  const QuiverRep& module) {
  const QuiverRep m = detail::reduced_module(rule, module);
  const IceQuiver qbar = rule.quiver.unfrozen_part();
  std::vector<CharacterTerm> out;
  std::vector<std::size_t> e(m.dims.size(), 0);
  for (;;) {
    out.push_back({e, euler_characteristic(qbar, m, e).chi});
    std::size_t k = 0;
    while (k < e.size() && e[k] == m.dims[k]) e[k++] = 0;
    if (k == e.size()) break;
    ++e[k];
  }
  return out;
}

inline LaurentPoly cc(const CharacterInput& in, const CoefficientRule& rule) {
  if (in.g.size() != rule.n()) {
    throw DomainError("index vector has length " + std::to_string(in.g.size()) +
                      ", expected " + std::to_string(rule.n()));
  }
  LaurentPoly sum(rule.n());
  for (const auto& t : character_terms(rule, in.module)) {
    if (t.chi == 0) continue;
    sum += detail::monomial_of(rule.minus_l(t.e, in.module.orientation))
               .scaled(t.chi);
  }
  return detail::monomial_of(in.g) * sum;
}

struct MultiplicationCheck {
  bool pass = false;
  /// cc(L)·cc(M) - cc(E) - cc(E'); zero on success.
  LaurentPoly difference;
};

/// cc(L)·cc(M) = cc(E) + cc(E'); the caller vouches that Ext^1(L, M) is
/// one-dimensional with middle terms E and E'.
inline MultiplicationCheck multiplication_check(const CharacterInput& l,
                                                const CharacterInput& m,
                                                const CharacterInput& e,
                                                const CharacterInput& e2,
                                                const CoefficientRule& rule) {
  LaurentPoly d = cc(l, rule) * cc(m, rule) - cc(e, rule) - cc(e2, rule);
  return {d.is_zero(), std::move(d)};
}

/// A frozen class (length n - r, or length n supported on frozen vertices)
/// and a reduced part.
struct LocalizedObject {
  std::vector<long> frozen_class;
  CharacterInput reduced;
};

namespace detail {

inline std::vector<long> frozen_vector(const CoefficientRule& rule,
                                       const std::vector<long>& v) {
  const std::size_t n = rule.n(), r = rule.r();
  if (v.size() == n - r) {
    std::vector<long> out(r, 0);
    out.insert(out.end(), v.begin(), v.end());
    return out;
  }
  if (v.size() != n) {
    throw DomainError("frozen class has length " + std::to_string(v.size()) +
                      ", expected " + std::to_string(n - r) + " or " +
                      std::to_string(n));
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (v[i] != 0) {
      throw DomainError("frozen class is nonzero at unfrozen vertex " +
                        std::to_string(i + 1));
    }
  }
  return v;
}

}  // namespace detail

/// x^{frozen class} · cc(reduced part).
inline LaurentPoly cc_loc(const LocalizedObject& obj,
                          const CoefficientRule& rule) {
  return detail::monomial_of(detail::frozen_vector(rule, obj.frozen_class)) *
         cc(obj.reduced, rule);
}

/// cc(ΣX) · x^{-[IX]} for the injective class [IX] of X.
inline LaurentPoly cc_shift(const CharacterInput& suspension,
                            const std::vector<long>& injective_class,
                            const CoefficientRule& rule) {
  std::vector<long> v = detail::frozen_vector(rule, injective_class);
  for (auto& x : v) x = -x;
  return cc(suspension, rule) * detail::monomial_of(v);
}

/// ind M = l(dim M) - g(M), g from the minimal projective presentation of
/// M over the Jacobian algebra of (Q, W).
inline std::vector<long> index_from_module(const IceQuiver& q,
                                           const Potential& w,
                                           const QuiverRep& m) {
  const CoefficientRule rule = CoefficientRule::of(q);
  QuiverRep full = m;
  if (full.dims.size() == rule.r()) full.dims.resize(rule.n(), 0);
  const QuiverRep reduced = detail::reduced_module(rule, full);
  const Presentation p = minimal_presentation(q, w, full);
  std::vector<long> ml = rule.minus_l(reduced.dims, m.orientation);
  std::vector<long> out(rule.n());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -ml[i] - p.g[i];
  return out;
}

}  // namespace icecluster
