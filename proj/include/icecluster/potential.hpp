#pragma once

// Potentials on the path algebra of an ice quiver, cyclic derivatives,
// substitutions, reduction of quadratic parts and the relative Jacobian
// presentation.
//
// Words are sequences of arrow ids composed right to left: the word
// {"a", "b", "c"} is the path that first follows c, then b, then a.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"
#include "icecluster/quiver.hpp"

namespace icecluster {

using Rational = mpq_class;
using Word = std::vector<std::string>;

inline Rational parse_rational(const std::string& s) {
  Rational out;
  if (s.empty() || out.set_str(s, 10) != 0) {
    throw DomainError("malformed rational '" + s + "'");
  }
  if (out.get_den() == 0) throw DomainError("zero denominator in '" + s + "'");
  out.canonicalize();
  return out;
}

inline std::string word_to_string(const Word& w) {
  std::string out;
  for (const auto& a : w) {
    if (a.size() > 1 && !out.empty()) out += "·";
    out += a;
  }
  return out;
}

/// Finite linear combination of (not necessarily cyclic) paths.
class PathPolynomial {
 public:
  PathPolynomial() = default;

  static PathPolynomial word(Word w, Rational c = 1) {
    PathPolynomial p;
    p.add(std::move(w), c);
    return p;
  }

  void add(const Word& w, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const std::map<Word, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& [w, c] : terms_) m = std::max(m, w.size());
    return m;
  }

  std::size_t min_length() const {
    std::size_t m = static_cast<std::size_t>(-1);
    for (const auto& [w, c] : terms_) m = std::min(m, w.size());
    return terms_.empty() ? 0 : m;
  }

  bool mentions(const std::string& arrow) const {
    for (const auto& [w, c] : terms_) {
      if (std::find(w.begin(), w.end(), arrow) != w.end()) return true;
    }
    return false;
  }

  PathPolynomial& operator+=(const PathPolynomial& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
  }

  PathPolynomial scaled(const Rational& s) const {
    PathPolynomial out;
    if (s == 0) return out;
    for (const auto& [w, c] : terms_) out.terms_.emplace(w, c * s);
    return out;
  }

  /// Concatenation product: (this)·(o), i.e. o is followed first.
  PathPolynomial operator*(const PathPolynomial& o) const {
    PathPolynomial out;
    for (const auto& [w1, c1] : terms_) {
      for (const auto& [w2, c2] : o.terms_) {
        Word w = w1;
        w.insert(w.end(), w2.begin(), w2.end());
        out.add(w, c1 * c2);
      }
    }
    return out;
  }

  friend PathPolynomial operator+(PathPolynomial a, const PathPolynomial& b) {
    a += b;
    return a;
  }

  friend bool operator==(const PathPolynomial& a, const PathPolynomial& b) {
    return a.terms_ == b.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : terms_) {
      if (!out.empty()) out += " + ";
      if (c != 1) out += "(" + c.get_str() + ")";
      out += word_to_string(w);
    }
    return out;
  }

 private:
  std::map<Word, Rational> terms_;
};

/// Lexicographically minimal rotation of a cyclic word.
inline Word cyclic_normal_form(const Word& w) {
  Word best = w;
  Word cur = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

inline constexpr std::size_t kDefaultDegreeCap = 10;

/// Finite rational combination of cyclic words in normal form.
class Potential {
 public:
  explicit Potential(std::size_t degree_cap = kDefaultDegreeCap)
      : degree_cap_(degree_cap) {
    if (degree_cap == 0) throw DomainError("degree cap must be positive");
  }

  std::size_t degree_cap() const { return degree_cap_; }
  const std::map<Word, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c times the cycle w, renormalizing the rotation. Terms beyond the
  /// cap raise a DomainError naming the term.
  void add(const Word& w, const Rational& c) {
    if (c == 0) return;
    if (w.size() > degree_cap_) {
      throw DomainError("degree-cap overflow: term " + word_to_string(w) +
                        " has degree " + std::to_string(w.size()) +
                        " > cap " + std::to_string(degree_cap_));
    }
    if (w.size() < 2) {
      throw DomainError("potential terms need degree at least 2: " +
                        word_to_string(w));
    }
    Word key = cyclic_normal_form(w);
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Potential& operator+=(const Potential& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
  }

  std::set<std::string> arrows_used() const {
    std::set<std::string> out;
    for (const auto& [w, c] : terms_) out.insert(w.begin(), w.end());
    return out;
  }

  friend bool operator==(const Potential& a, const Potential& b) {
    return a.terms_ == b.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : terms_) {
      if (!out.empty()) out += " + ";
      if (c != 1) out += "(" + c.get_str() + ")";
      out += word_to_string(w);
    }
    return out;
  }

 private:
  std::size_t degree_cap_;
  std::map<Word, Rational> terms_;
};

/// Checks that every term of w is a composable cycle of arrows of q and that
/// degree-2 terms are not loops.
inline void check_potential(const IceQuiver& q, const Potential& w) {
  for (const auto& [word, c] : w.terms()) {
    for (std::size_t i = 0; i < word.size(); ++i) {
      const Arrow& later = q.arrow(word[i]);
      const Arrow& earlier = q.arrow(word[(i + 1) % word.size()]);
      if (earlier.tgt != later.src) {
        throw DomainError("term " + word_to_string(word) +
                          " is not a composable cycle");
      }
    }
    if (word.size() == 2) {
      for (const auto& a : word) {
        const Arrow& arr = q.arrow(a);
        if (arr.src == arr.tgt) {
          throw DomainError("degree-2 term with a loop: " +
                            word_to_string(word));
        }
      }
    }
  }
}

/// Every term contains at least one unfrozen arrow.
inline bool is_irredundant(const IceQuiver& q, const Potential& w) {
  for (const auto& [word, c] : w.terms()) {
    bool has_unfrozen = std::any_of(word.begin(), word.end(), [&](auto& a) {
      return !q.arrow(a).frozen;
    });
    if (!has_unfrozen) return false;
  }
  return true;
}

/// Sum over occurrences of `arrow` in each cycle of the path obtained by
/// cutting the cycle open at that occurrence.
inline PathPolynomial cyclic_derivative(const Potential& w,
                                        const std::string& arrow) {
  PathPolynomial out;
  for (const auto& [word, c] : w.terms()) {
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (word[i] != arrow) continue;
      Word cut(word.begin() + static_cast<std::ptrdiff_t>(i) + 1, word.end());
      cut.insert(cut.end(), word.begin(),
                 word.begin() + static_cast<std::ptrdiff_t>(i));
      out.add(cut, c);
    }
  }
  return out;
}

inline PathPolynomial cyclic_derivative(const IceQuiver& q, const Potential& w,
                                        const std::string& arrow) {
  q.arrow(arrow);
  return cyclic_derivative(w, arrow);
}

struct JacobianPresentation {
  IceQuiver quiver;
  Potential potential;
  /// One relation per unfrozen arrow; it runs from tgt(a) to src(a).
  std::map<std::string, PathPolynomial> relations;
};

inline JacobianPresentation jacobian_presentation(const IceQuiver& q,
                                                  const Potential& w) {
  require_valid(q);
  check_potential(q, w);
  if (!w.is_zero() && !is_irredundant(q, w)) {
    throw DomainError(
        "potential is not irredundant: some term has only frozen arrows");
  }
  JacobianPresentation out{q, w, {}};
  for (const Arrow& a : q.arrows()) {
    if (!a.frozen) out.relations.emplace(a.id, cyclic_derivative(w, a.id));
  }
  return out;
}

namespace detail {

/// Expands the word with each arrow in `subst` replaced by its polynomial.
inline PathPolynomial expand_word(
    const Word& w, const std::map<std::string, PathPolynomial>& subst) {
  PathPolynomial acc = PathPolynomial::word({});
  for (const auto& a : w) {
    auto it = subst.find(a);
    acc = acc * (it == subst.end() ? PathPolynomial::word({a}) : it->second);
  }
  return acc;
}

inline PathPolynomial evaluate(
    const PathPolynomial& p,
    const std::map<std::string, PathPolynomial>& subst) {
  PathPolynomial out;
  for (const auto& [w, c] : p.terms()) out += expand_word(w, subst).scaled(c);
  return out;
}

}  // namespace detail

/// Simultaneous substitution of arrows by path polynomials, with cyclic
/// renormalization of the result.
inline Potential substitute(
    const Potential& w, const std::map<std::string, PathPolynomial>& subst) {
  Potential out(w.degree_cap());
  for (const auto& [word, c] : w.terms()) {
    PathPolynomial expanded = detail::expand_word(word, subst);
    for (const auto& [nw, nc] : expanded.terms()) {
      if (nw.size() > w.degree_cap()) {
        throw DomainError("degree-cap overflow: substituting into " +
                          word_to_string(word) + " produces " +
                          word_to_string(nw));
      }
      out.add(nw, c * nc);
    }
  }
  return out;
}

inline Potential substitute(const Potential& w, const std::string& arrow,
                            const PathPolynomial& replacement) {
  return substitute(w, {{arrow, replacement}});
}

/// Substitution with a parallelism check of the replacement against q.
inline Potential substitute(const IceQuiver& q, const Potential& w,
                            const std::string& arrow,
                            const PathPolynomial& replacement) {
  const Arrow& a = q.arrow(arrow);
  for (const auto& [word, c] : replacement.terms()) {
    if (word.empty()) {
      throw DomainError("replacement for " + arrow + " contains a trivial path");
    }
    if (q.arrow(word.front()).tgt != a.tgt ||
        q.arrow(word.back()).src != a.src) {
      throw DomainError("replacement path " + word_to_string(word) +
                        " is not parallel to " + arrow);
    }
  }
  return substitute(w, arrow, replacement);
}

struct ReductionReport {
  std::vector<std::pair<std::string, std::string>> eliminated;
  /// Quadratic terms left in the result (each involves a frozen arrow).
  std::vector<Word> surviving_quadratic;
  /// Irredundant and no relation has a linear term.
  bool reduced = false;
  int rounds = 0;
};

struct ReducedIqp {
  IceQuiver quiver;
  Potential potential;
  ReductionReport report;
};

inline constexpr int kReductionRoundLimit = 64;

/// Splits off quadratic terms c·uv whose arrows are both unfrozen. The pair
/// (u, v) is replaced by the solution of its own Jacobian relations
///   u = -(1/c) ∂_v (W - c·uv),  v = -(1/c) ∂_u (W - c·uv)
/// (found by fixed-point iteration), which is substituted into W.
inline ReducedIqp reduce_iqp(const IceQuiver& q, const Potential& w) {
  require_valid(q);
  check_potential(q, w);
  if (!is_irredundant(q, w)) {
    throw DomainError("reduction needs an irredundant potential");
  }
  IceQuiver cur_q = q;
  Potential cur_w = w;
  ReductionReport report;
  const std::size_t cap = w.degree_cap();

  for (;;) {
    const Word* pick = nullptr;
    Rational coeff;
    for (const auto& [word, c] : cur_w.terms()) {
      if (word.size() != 2 || word[0] == word[1]) continue;
      if (cur_q.arrow(word[0]).frozen || cur_q.arrow(word[1]).frozen) continue;
      pick = &word;
      coeff = c;
      break;
    }
    if (pick == nullptr) break;
    if (++report.rounds > kReductionRoundLimit) {
      throw DomainError(
          "reduction did not terminate in 64 rounds: potential likely a "
          "genuine power series");
    }
    const std::string u = (*pick)[0];
    const std::string v = (*pick)[1];
    Potential rest = cur_w;
    rest.add(*pick, -coeff);
    const PathPolynomial du = cyclic_derivative(rest, u);
    const PathPolynomial dv = cyclic_derivative(rest, v);
    const Rational scale = -1 / coeff;

    std::map<std::string, PathPolynomial> sol{{u, {}}, {v, {}}};
    bool converged = false;
    for (int it = 0; it < kReductionRoundLimit; ++it) {
      PathPolynomial nu = detail::evaluate(dv, sol).scaled(scale);
      PathPolynomial nv = detail::evaluate(du, sol).scaled(scale);
      for (const auto* p : {&nu, &nv}) {
        if (p->max_length() >= cap) {
          throw DomainError("degree-cap overflow while splitting " + u +
                            "·" + v + ": replacement reaches degree " +
                            std::to_string(p->max_length()));
        }
      }
      if (nu == sol[u] && nv == sol[v]) {
        converged = true;
        break;
      }
      sol[u] = std::move(nu);
      sol[v] = std::move(nv);
    }
    if (!converged) {
      throw DomainError("splitting substitution for " + u + "·" + v +
                        " did not converge");
    }
    cur_w = substitute(cur_w, sol);
    std::vector<Arrow> kept;
    for (const Arrow& a : cur_q.arrows()) {
      if (a.id != u && a.id != v) kept.push_back(a);
    }
    cur_q = cur_q.with_arrows(std::move(kept));
    report.eliminated.emplace_back(u, v);
  }

  for (const auto& [word, c] : cur_w.terms()) {
    if (word.size() == 2) report.surviving_quadratic.push_back(word);
  }
  bool admissible = true;
  for (const Arrow& a : cur_q.arrows()) {
    if (a.frozen) continue;
    const PathPolynomial rel = cyclic_derivative(cur_w, a.id);
    if (!rel.is_zero() && rel.min_length() <= 1) admissible = false;
  }
  report.reduced = admissible && is_irredundant(cur_q, cur_w);
  return {std::move(cur_q), std::move(cur_w), std::move(report)};
}

}  // namespace icecluster
