#pragma once

// Exact multivariate Laurent polynomials with arbitrary-precision integer
// coefficients.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"

namespace icecluster {

using Integer = mpz_class;
using Exponent = std::vector<int>;

inline constexpr std::size_t kMaxVariables = 64;

/// Graded lexicographic order on Z^n. It is a total order compatible with
/// addition, hence a monomial order on N^n.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const long da = std::accumulate(a.begin(), a.end(), 0L);
    const long db = std::accumulate(b.begin(), b.end(), 0L);
    if (da != db) return da < db;
    return a < b;
  }
};

/// Names x1..xr for the unfrozen variables and p1..p(n-r) for the frozen
/// ones.
inline std::vector<std::string> default_variable_names(std::size_t n,
                                                       std::size_t r) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i < r ? "x" + std::to_string(i + 1)
                        : "p" + std::to_string(i - r + 1));
  }
  return out;
}

class LaurentPoly {
 public:
  using Terms = std::map<Exponent, Integer, GradedLex>;

  explicit LaurentPoly(std::size_t nvars = 0) : nvars_(nvars) {
    if (nvars > kMaxVariables) {
      throw GuardError("at most 64 variables are supported");
    }
  }

  static LaurentPoly constant(std::size_t n, const Integer& c) {
    return monomial(Exponent(n, 0), c);
  }

  /// The variable x_{i+1} (0-based index i).
  static LaurentPoly variable(std::size_t n, std::size_t i) {
    Exponent e(n, 0);
    e.at(i) = 1;
    return monomial(std::move(e));
  }

  static LaurentPoly monomial(Exponent e, const Integer& c = 1) {
    LaurentPoly p(e.size());
    if (c != 0) p.terms_.emplace(std::move(e), c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool is_monomial() const { return terms_.size() == 1; }

  /// A single term with coefficient 1.
  bool is_unit_monomial() const {
    return is_monomial() && terms_.begin()->second == 1;
  }

  void add_term(const Exponent& e, const Integer& c) {
    check_arity(e.size());
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    check_arity(o.nvars_);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  LaurentPoly& operator-=(const LaurentPoly& o) {
    check_arity(o.nvars_);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
    a += b;
    return a;
  }

  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) {
    a -= b;
    return a;
  }

  LaurentPoly operator-() const {
    LaurentPoly out(nvars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.check_arity(b.nvars_);
    LaurentPoly out(a.nvars_);
    Exponent e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }

  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  LaurentPoly pow(unsigned k) const {
    LaurentPoly result = constant(nvars_, 1);
    LaurentPoly base = *this;
    while (k > 0) {
      if (k & 1U) result *= base;
      k >>= 1U;
      if (k > 0) base *= base;
    }
    return result;
  }

  /// Inverse of a monomial with coefficient +-1.
  LaurentPoly monomial_inverse() const {
    if (!is_monomial() || abs(terms_.begin()->second) != 1) {
      throw DomainError("only unit monomials are invertible");
    }
    Exponent e = terms_.begin()->first;
    for (int& x : e) x = -x;
    return monomial(std::move(e), terms_.begin()->second);
  }

  /// Exact division in the Laurent ring Z[x^{+-1}]. Throws InexactDivision
  /// when the divisor does not divide.
  LaurentPoly exact_div(const LaurentPoly& d) const {
    check_arity(d.nvars_);
    if (d.is_zero()) throw DomainError("division by the zero polynomial");
    if (is_zero()) return LaurentPoly(nvars_);
    // Shift both into N^n with no monomial content, then divide in Z[x]:
    // a monomial-free divisor of x^k·A divides A itself.
    const Exponent lo_a = min_exponents();
    const Exponent lo_d = d.min_exponents();
    LaurentPoly rem = shifted(negate(lo_a));
    const LaurentPoly div = d.shifted(negate(lo_d));
    const auto& [lead_e, lead_c] = *std::prev(div.terms_.end());
    LaurentPoly quot(nvars_);
    Exponent m(nvars_);
    while (!rem.is_zero()) {
      const auto& [re, rc] = *std::prev(rem.terms_.end());
      for (std::size_t i = 0; i < nvars_; ++i) {
        m[i] = re[i] - lead_e[i];
        if (m[i] < 0) throw InexactDivision("inexact Laurent division");
      }
      if (!mpz_divisible_p(rc.get_mpz_t(), lead_c.get_mpz_t())) {
        throw InexactDivision("inexact Laurent division (coefficients)");
      }
      const Integer q = rc / lead_c;
      quot.add_term(m, q);
      rem -= div.shifted(m).scaled(q);
    }
    Exponent back(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) back[i] = lo_a[i] - lo_d[i];
    return quot.shifted(back);
  }

  LaurentPoly scaled(const Integer& s) const {
    LaurentPoly out(nvars_);
    if (s == 0) return out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * s);
    return out;
  }

  /// Multiplies by the monomial x^shift.
  LaurentPoly shifted(const Exponent& shift) const {
    check_arity(shift.size());
    LaurentPoly out(nvars_);
    for (const auto& [e, c] : terms_) {
      Exponent ne = e;
      for (std::size_t i = 0; i < nvars_; ++i) ne[i] += shift[i];
      out.terms_.emplace(std::move(ne), c);
    }
    return out;
  }

  /// Componentwise minimum of the exponents (zero vector for 0).
  Exponent min_exponents() const {
    Exponent lo(nvars_, 0);
    bool first = true;
    for (const auto& [e, c] : terms_) {
      for (std::size_t i = 0; i < nvars_; ++i) {
        lo[i] = first ? e[i] : std::min(lo[i], e[i]);
      }
      first = false;
    }
    return lo;
  }

  /// Keeps the first `keep` variables and sends the others to 1.
  LaurentPoly specialize(std::size_t keep) const {
    if (keep > nvars_) throw DomainError("specialize: too many variables");
    LaurentPoly out(keep);
    for (const auto& [e, c] : terms_) {
      out.add_term(Exponent(e.begin(), e.begin() + static_cast<long>(keep)),
                   c);
    }
    return out;
  }

  const std::pair<const Exponent, Integer>& leading_term() const {
    if (is_zero()) throw DomainError("zero polynomial has no leading term");
    return *std::prev(terms_.end());
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Canonical text used as a hash key: terms in descending graded-lex order.
  std::string key() const {
    std::string out = std::to_string(nvars_) + ":";
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      out += it->second.get_str() + "[";
      for (int x : it->first) out += std::to_string(x) + ",";
      out += "]";
    }
    return out;
  }

  /// Sum of terms, e.g. "x1^-1*p1 + x1^-1*p2".
  std::string to_string(const std::vector<std::string>& names) const {
    if (is_zero()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      std::string mono = monomial_string(it->first, names, false);
      Integer c = it->second;
      if (!out.empty()) {
        out += c < 0 ? " - " : " + ";
        c = abs(c);
      } else if (c < 0 && !mono.empty() && c == -1) {
        out += "-";
        c = 1;
      }
      if (mono.empty()) {
        out += c.get_str();
      } else if (c == 1) {
        out += mono;
      } else {
        out += c.get_str() + "*" + mono;
      }
    }
    return out;
  }

  /// Numerator over a monomial denominator, e.g. "(p1 + p2)/x1".
  std::string to_fraction_string(const std::vector<std::string>& names) const {
    if (is_zero()) return "0";
    Exponent lo = min_exponents();
    for (int& x : lo) x = std::min(x, 0);
    LaurentPoly num = shifted(negate(lo));
    Exponent den(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) den[i] = -lo[i];
    std::string n = num.to_string(names);
    std::string d = monomial_string(den, names, false);
    if (d.empty()) return n;
    if (num.size() > 1) n = "(" + n + ")";
    if (std::count(den.begin(), den.end(), 0) + 1 <
        static_cast<long>(den.size())) {
      d = "(" + d + ")";
    }
    return n + "/" + d;
  }

 private:
  static Exponent negate(Exponent e) {
    for (int& x : e) x = -x;
    return e;
  }

  static std::string monomial_string(const Exponent& e,
                                     const std::vector<std::string>& names,
                                     bool) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!out.empty()) out += "*";
      out += i < names.size() ? names[i] : "x" + std::to_string(i + 1);
      if (e[i] != 1) out += "^" + std::to_string(e[i]);
    }
    return out;
  }

  void check_arity(std::size_t n) const {
    if (n != nvars_) {
      throw DomainError("Laurent polynomials over different variable sets");
    }
  }

  std::size_t nvars_;
  Terms terms_;
};

}  // namespace icecluster
