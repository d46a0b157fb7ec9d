#pragma once

// Representations of ice quivers satisfying Jacobian relations, quiver
// Grassmannian point counts over prime fields, Euler characteristics by
// interpolation at q = 1, and minimal projective presentations.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"
#include "icecluster/jacobian.hpp"
#include "icecluster/linalg.hpp"
#include "icecluster/potential.hpp"
#include "icecluster/quiver.hpp"

namespace icecluster {

/// left: arrow a acts M_src -> M_tgt (a representation of Q).
/// right: arrow a acts M_tgt -> M_src (a right module over the path algebra,
/// i.e. a representation of the opposite quiver).
enum class Orientation { left, right };

struct QuiverRep {
  std::vector<std::size_t> dims;  // by vertex position
  std::map<std::string, RatMatrix> maps;
  Orientation orientation = Orientation::left;

  std::size_t total_dim() const {
    std::size_t t = 0;
    for (auto d : dims) t += d;
    return t;
  }
};

/// Vertex ids (domain, codomain) of the map attached to a.
inline std::pair<int, int> map_ends(const Arrow& a, Orientation o) {
  return o == Orientation::left ? std::pair{a.src, a.tgt}
                                : std::pair{a.tgt, a.src};
}

/// Fills in zero maps for missing arrows and checks every shape.
inline QuiverRep complete_rep(const IceQuiver& q, QuiverRep rep) {
  if (rep.dims.size() != q.size()) {
    throw DomainError("rep has " + std::to_string(rep.dims.size()) +
                      " dimensions for a quiver with " +
                      std::to_string(q.size()) + " vertices");
  }
  for (const auto& [id, m] : rep.maps) {
    if (q.find_arrow(id) == nullptr) {
      throw DomainError("rep has a map for unknown arrow " + id);
    }
  }
  for (const Arrow& a : q.arrows()) {
    auto [from, to] = map_ends(a, rep.orientation);
    const std::size_t r = rep.dims[q.position(to)];
    const std::size_t c = rep.dims[q.position(from)];
    auto it = rep.maps.find(a.id);
    if (it == rep.maps.end()) {
      rep.maps.emplace(a.id, RatMatrix(r, c));
    } else if (it->second.rows() != r || it->second.cols() != c) {
      throw DomainError("map " + a.id + " has shape " + it->second.shape() +
                        ", expected " + std::to_string(r) + "x" +
                        std::to_string(c));
    }
  }
  return rep;
}

/// Matrix of a path (right-to-left word) acting on the rep.
inline RatMatrix evaluate_word(const IceQuiver& q, const QuiverRep& rep,
                               const Word& w, int start) {
  if (w.empty()) {
    return RatMatrix::identity(rep.dims[q.position(start)]);
  }
  std::vector<const RatMatrix*> ms;
  for (const auto& a : w) ms.push_back(&rep.maps.at(a));
  if (rep.orientation == Orientation::right) std::reverse(ms.begin(), ms.end());
  RatMatrix out = *ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) out = out * *ms[i];
  return out;
}

struct RelationFailure {
  std::string arrow;
  std::string relation;
};

inline RatMatrix evaluate_relation(const IceQuiver& q, const QuiverRep& rep,
                                   const PathPolynomial& rel, int start) {
  // relations have no constant term, so every word is nonempty
  std::optional<RatMatrix> sum;
  for (const auto& [w, c] : rel.terms()) {
    RatMatrix m = evaluate_word(q, rep, w, start).scaled(c);
    if (sum) {
      *sum += m;
    } else {
      sum = std::move(m);
    }
  }
  return sum.value_or(RatMatrix());
}

/// The first unfrozen arrow whose cyclic derivative does not vanish on rep.
inline std::optional<RelationFailure> check_relations(const IceQuiver& q,
                                                      const Potential& w,
                                                      const QuiverRep& rep0) {
  const QuiverRep rep = complete_rep(q, rep0);
  const auto pres = jacobian_presentation(q, w);
  for (const auto& [id, rel] : pres.relations) {
    if (rel.is_zero()) continue;
    const Arrow& a = q.arrow(id);
    if (!evaluate_relation(q, rep, rel, a.tgt).is_zero()) {
      return RelationFailure{id, "d_" + id + " W = " + rel.to_string()};
    }
  }
  return std::nullopt;
}

/// Some power of the sum of all arrow maps vanishes.
inline bool is_nilpotent(const IceQuiver& q, const QuiverRep& rep0) {
  const QuiverRep rep = complete_rep(q, rep0);
  const std::size_t n = rep.total_dim();
  if (n == 0) return true;
  std::vector<std::size_t> offset(q.size() + 1, 0);
  for (std::size_t i = 0; i < q.size(); ++i) offset[i + 1] = offset[i] + rep.dims[i];
  RatMatrix big(n, n);
  for (const Arrow& a : q.arrows()) {
    auto [from, to] = map_ends(a, rep.orientation);
    const RatMatrix& m = rep.maps.at(a.id);
    const std::size_t r0 = offset[q.position(to)];
    const std::size_t c0 = offset[q.position(from)];
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) big(r0 + i, c0 + j) += m(i, j);
    }
  }
  RatMatrix p = big;
  for (std::size_t k = 1; k < n; ++k) p = p * big;
  return p.is_zero();
}

// ---------------------------------------------------------------------------
// Point counts over F_p

inline constexpr double kSubrepGuard = 1e7;

/// Number of e-dimensional subspaces of F_q^d.
inline Integer gaussian_binomial(std::size_t d, std::size_t e, long q) {
  if (e > d) return 0;
  Integer num = 1, den = 1;
  const Integer qq = q;
  for (std::size_t i = 0; i < e; ++i) {
    Integer a, b;
    mpz_pow_ui(a.get_mpz_t(), qq.get_mpz_t(), d - i);
    mpz_pow_ui(b.get_mpz_t(), qq.get_mpz_t(), i + 1);
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

namespace detail {

/// An e-dimensional subspace of F_p^d in reduced row echelon form.
struct EchelonSpace {
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::size_t> pivots;
};

inline bool contains(const EchelonSpace& s, std::vector<std::int64_t> x,
                     std::int64_t p) {
  for (std::size_t r = 0; r < s.rows.size(); ++r) {
    const std::int64_t f = x[s.pivots[r]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = ((x[j] - f * s.rows[r][j]) % p + p) % p;
    }
  }
  for (auto v : x) {
    if (v != 0) return false;
  }
  return true;
}

/// Calls f on every e-dimensional subspace of F_p^d, pivot set by pivot
/// set (one Schubert cell at a time). f returns false to stop.
inline bool for_each_subspace(std::size_t d, std::size_t e, std::int64_t p,
                              const std::function<bool(const EchelonSpace&)>& f) {
  if (e > d) return true;
  std::vector<std::size_t> piv(e);
  for (std::size_t i = 0; i < e; ++i) piv[i] = i;
  for (;;) {
    EchelonSpace s;
    s.pivots = piv;
    s.rows.assign(e, std::vector<std::int64_t>(d, 0));
    std::vector<std::pair<std::size_t, std::size_t>> free;
    std::vector<bool> is_pivot(d, false);
    for (auto c : piv) is_pivot[c] = true;
    for (std::size_t r = 0; r < e; ++r) {
      s.rows[r][piv[r]] = 1;
      for (std::size_t c = piv[r] + 1; c < d; ++c) {
        if (!is_pivot[c]) free.emplace_back(r, c);
      }
    }
    std::vector<std::int64_t> digits(free.size(), 0);
    for (;;) {
      if (!f(s)) return false;
      std::size_t k = 0;
      while (k < digits.size() && digits[k] == p - 1) {
        digits[k] = 0;
        s.rows[free[k].first][free[k].second] = 0;
        ++k;
      }
      if (k == digits.size()) break;
      ++digits[k];
      s.rows[free[k].first][free[k].second] = digits[k];
    }
    // next pivot set in lexicographic order
    std::size_t i = e;
    while (i > 0 && piv[i - 1] == d - e + i - 1) --i;
    if (i == 0) break;
    ++piv[i - 1];
    for (std::size_t j = i; j < e; ++j) piv[j] = piv[j - 1] + 1;
  }
  return true;
}

}  // namespace detail

/// Number of subrepresentations of dimension vector e over F_p.
inline Integer count_subreps(const IceQuiver& q, const QuiverRep& rep0,
                             const std::vector<std::size_t>& e,
                             std::int64_t p) {
  const QuiverRep rep = complete_rep(q, rep0);
  const std::size_t n = q.size();
  if (e.size() != n) throw DomainError("dimension vector has wrong length");
  for (std::size_t i = 0; i < n; ++i) {
    if (e[i] > rep.dims[i]) return 0;
  }
  struct ModArrow {
    std::size_t from, to;
    ModMatrix m;
  };
  std::vector<ModArrow> arrows;
  std::vector<bool> constrained(n, false);
  for (const Arrow& a : q.arrows()) {
    auto [from, to] = map_ends(a, rep.orientation);
    ModMatrix m = reduce_mod(rep.maps.at(a.id), p);
    bool zero = true;
    for (auto v : m.a) zero = zero && v == 0;
    if (zero) continue;
    const std::size_t fi = q.position(from), ti = q.position(to);
    constrained[fi] = constrained[ti] = true;
    arrows.push_back({fi, ti, std::move(m)});
  }
  Integer factor = 1;
  std::vector<std::size_t> order;
  double work = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Integer g = gaussian_binomial(rep.dims[i], e[i], static_cast<long>(p));
    if (constrained[i]) {
      order.push_back(i);
      work *= g.get_d();
    } else {
      factor *= g;
    }
  }
  if (work > kSubrepGuard) {
    throw GuardError("subspace enumeration needs about " +
                     std::to_string(static_cast<long long>(work)) +
                     " tuples, more than the guard 1e7");
  }
  std::vector<detail::EchelonSpace> chosen(n);
  std::vector<bool> have(n, false);
  auto invariant = [&](std::size_t v) {
    for (const auto& a : arrows) {
      if (a.from != v && a.to != v) continue;
      if (!have[a.from] || !have[a.to]) continue;
      for (const auto& row : chosen[a.from].rows) {
        std::vector<std::int64_t> img(a.m.rows, 0);
        for (std::size_t i = 0; i < a.m.rows; ++i) {
          std::int64_t s = 0;
          for (std::size_t j = 0; j < a.m.cols; ++j) s = (s + a.m.at(i, j) * row[j]) % p;
          img[i] = s;
        }
        if (!detail::contains(chosen[a.to], std::move(img), p)) return false;
      }
    }
    return true;
  };
  Integer count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == order.size()) {
      count += 1;
      return;
    }
    const std::size_t v = order[k];
    detail::for_each_subspace(rep.dims[v], e[v], p,
                              [&](const detail::EchelonSpace& s) {
                                chosen[v] = s;
                                have[v] = true;
                                if (invariant(v)) rec(k + 1);
                                have[v] = false;
                                return true;
                              });
  };
  rec(0);
  return count * factor;
}

struct GrCount {
  std::vector<std::size_t> e;
  std::map<long, Integer> counts_by_prime;
  /// Coefficients of the counting polynomial, constant term first.
  std::vector<Integer> polynomial;
  Integer chi;
};

inline std::vector<long> first_primes(std::size_t k) {
  std::vector<long> out;
  for (long c = 2; out.size() < k; ++c) {
    bool prime = true;
    for (long d = 2; d * d <= c; ++d) {
      if (c % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(c);
  }
  return out;
}

/// Counts Gr_e(rep) over several prime fields, interpolates a polynomial of
/// degree <= sum e_i (d_i - e_i), checks it against the extra samples and
/// evaluates it at 1. Inconsistent or non-integral fits raise DomainError.
inline GrCount euler_characteristic(const IceQuiver& q, const QuiverRep& rep0,
                                    const std::vector<std::size_t>& e) {
  const QuiverRep rep = complete_rep(q, rep0);
  if (e.size() != q.size()) throw DomainError("dimension vector has wrong length");
  GrCount out{e, {}, {}, 0};
  std::size_t degree = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] > rep.dims[i]) return out;  // empty Grassmannian
    degree += e[i] * (rep.dims[i] - e[i]);
  }
  const std::size_t samples = std::max<std::size_t>(6, degree + 2);
  std::vector<std::pair<long, Integer>> pts;
  for (long p : first_primes(samples + 8)) {
    if (pts.size() == samples) break;
    try {
      Integer c = count_subreps(q, rep, e, p);
      pts.emplace_back(p, c);
      out.counts_by_prime[p] = c;
    } catch (const DomainError&) {
      continue;  // a denominator vanishes mod p
    }
  }
  if (pts.size() < degree + 2) {
    throw DomainError("not enough usable primes to interpolate");
  }
  // Newton form on the first degree+1 points, then expand.
  const std::size_t m = degree + 1;
  std::vector<Rational> coef(m);
  for (std::size_t i = 0; i < m; ++i) coef[i] = Rational(pts[i].second);
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = m - 1; i >= j; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / Rational(pts[i].first - pts[i - j].first);
      if (i == j) break;
    }
  }
  std::vector<Rational> poly(m, 0);
  for (std::size_t k = m; k-- > 0;) {
    // poly = poly * (x - x_k) + coef[k]
    std::vector<Rational> next(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (poly[i] == 0) continue;
      if (i + 1 < m) next[i + 1] += poly[i];
      next[i] -= poly[i] * pts[k].first;
    }
    next[0] += coef[k];
    poly = std::move(next);
  }
  auto eval = [&](long x) {
    Rational s = 0, xp = 1;
    for (const auto& c : poly) {
      s += c * xp;
      xp *= x;
    }
    return s;
  };
  std::string residuals;
  for (std::size_t i = m; i < pts.size(); ++i) {
    const Rational r = Rational(pts[i].second) - eval(pts[i].first);
    if (r != 0) {
      residuals += " q=" + std::to_string(pts[i].first) + ": " + r.get_str();
    }
  }
  if (!residuals.empty()) {
    throw DomainError("point counts are not polynomial in q; residuals" +
                      residuals);
  }
  for (const auto& c : poly) {
    if (c.get_den() != 1) {
      throw DomainError("interpolated counting polynomial has coefficient " +
                        c.get_str());
    }
    out.polynomial.push_back(c.get_num());
  }
  while (out.polynomial.size() > 1 && out.polynomial.back() == 0) {
    out.polynomial.pop_back();
  }
  for (const auto& c : out.polynomial) out.chi += c;
  return out;
}

// ---------------------------------------------------------------------------
// Projective presentations

struct Presentation {
  std::vector<long> p0;  // multiplicities by vertex position
  std::vector<long> p1;
  std::vector<long> g;   // p0 - p1
  std::size_t cap = 0;
};

namespace detail {

inline Potential opposite_potential(const Potential& w) {
  Potential out(w.degree_cap());
  for (const auto& [word, c] : w.terms()) {
    out.add(Word(word.rbegin(), word.rend()), c);
  }
  return out;
}

/// Smallest cap <= 12 at which the truncated Jacobian algebra stabilizes.
inline TruncatedJacobianAlgebra stable_algebra(const IceQuiver& q,
                                               const Potential& w) {
  const auto pres = jacobian_presentation(q, w);
  for (std::size_t cap = 1; cap <= kJacobianCapLimit; ++cap) {
    TruncatedJacobianAlgebra alg(pres, cap);
    if (alg.dims().stabilized) return alg;
  }
  throw DomainError(
      "the Jacobian algebra does not stabilize below path length 12; "
      "supply a presentation manually");
}

/// Basis of sum of column spans.
inline std::size_t span_dim(const std::vector<RatMatrix>& blocks,
                            std::size_t rows) {
  RatMatrix all(rows, 0);
  for (const auto& b : blocks) {
    if (b.cols() > 0) all = all.hconcat(b);
  }
  return all.rank();
}

}  // namespace detail

/// The indecomposable projective right module e_i J (paths ending at i),
/// realized on the stabilized basis of J.
inline QuiverRep projective_module(const IceQuiver& q, const Potential& w,
                                   int i) {
  const auto alg = detail::stable_algebra(q, w);
  const auto& paths = alg.paths();
  std::map<int, std::vector<std::size_t>> basis_at;  // by source vertex
  std::map<std::size_t, std::size_t> coord;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    if (!alg.is_basis_index(k) || paths[k].tgt != i) continue;
    coord[k] = basis_at[paths[k].src].size();
    basis_at[paths[k].src].push_back(k);
  }
  QuiverRep rep;
  rep.orientation = Orientation::right;
  for (const Vertex& v : q.vertices()) rep.dims.push_back(basis_at[v.id].size());
  for (const Arrow& a : q.arrows()) {
    RatMatrix m(basis_at[a.src].size(), basis_at[a.tgt].size());
    for (std::size_t col = 0; col < basis_at[a.tgt].size(); ++col) {
      const Path& b = paths[basis_at[a.tgt][col]];
      Word word = b.word;
      word.push_back(a.id);
      for (const auto& [idx, c] : alg.class_of(a.src, word)) {
        m(coord.at(idx), col) = c;
      }
    }
    rep.maps.emplace(a.id, std::move(m));
  }
  return rep;
}

/// Minimal projective presentation P1 -> P0 -> M -> 0 of M as a module over
/// the Jacobian algebra. A left rep of Q is treated as a right module over
/// the opposite algebra.
inline Presentation minimal_presentation(const IceQuiver& q0,
                                         const Potential& w0,
                                         const QuiverRep& rep0) {
  IceQuiver q = q0;
  Potential w = w0;
  QuiverRep rep = complete_rep(q0, rep0);
  if (rep.orientation == Orientation::left) {
    q = q0.opposite();
    w = detail::opposite_potential(w0);
    rep.orientation = Orientation::right;
  }
  if (auto f = check_relations(q, w, rep)) {
    throw DomainError("rep violates the relation " + f->relation);
  }
  const auto alg = detail::stable_algebra(q, w);
  const auto& paths = alg.paths();
  const std::size_t n = q.size();
  auto dim_of = [&](int v) { return rep.dims[q.position(v)]; };

  // top of M: complement of the images of arrows leaving i
  struct Gen {
    int vertex;
    RatMatrix vec;
  };
  std::vector<Gen> gens;
  Presentation out;
  out.cap = alg.cap();
  out.p0.assign(n, 0);
  out.p1.assign(n, 0);
  for (const Vertex& v : q.vertices()) {
    const std::size_t d = dim_of(v.id);
    RatMatrix rad(d, 0);
    for (const Arrow& a : q.arrows()) {
      if (a.src == v.id) rad = rad.hconcat(rep.maps.at(a.id));
    }
    RatMatrix radb = rad.cols() ? rad.column_basis() : RatMatrix(d, 0);
    RatMatrix ext = radb.hconcat(RatMatrix::identity(d));
    RatMatrix tmp = ext;
    for (auto c : tmp.rref()) {
      if (c >= radb.cols()) gens.push_back({v.id, RatMatrix::identity(d).column(c - radb.cols())});
    }
  }
  for (const auto& g : gens) out.p0[q.position(g.vertex)] += 1;

  // coordinates of P0 at each vertex j: (generator, basis path j -> vertex)
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> coords;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> coord_index;
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    for (std::size_t k = 0; k < paths.size(); ++k) {
      if (!alg.is_basis_index(k) || paths[k].tgt != gens[gi].vertex) continue;
      auto& list = coords[paths[k].src];
      coord_index[{gi, k}] = list.size();
      list.emplace_back(gi, k);
    }
  }
  // pi_j : P0_j -> M_j and its kernel
  std::map<int, RatMatrix> kernel;
  for (const Vertex& v : q.vertices()) {
    const auto& cs = coords[v.id];
    RatMatrix pi(dim_of(v.id), cs.size());
    for (std::size_t col = 0; col < cs.size(); ++col) {
      const auto& [gi, k] = cs[col];
      RatMatrix img = evaluate_word(q, rep, paths[k].word, v.id) * gens[gi].vec;
      for (std::size_t r = 0; r < pi.rows(); ++r) pi(r, col) = img(r, 0);
    }
    kernel[v.id] = pi.cols() ? pi.kernel() : RatMatrix(0, 0);
  }
  // top of the kernel
  for (const Vertex& v : q.vertices()) {
    const std::size_t kdim = kernel[v.id].cols();
    if (kdim == 0) continue;
    const std::size_t rows = coords[v.id].size();
    std::vector<RatMatrix> images;
    for (const Arrow& a : q.arrows()) {
      if (a.src != v.id) continue;
      const auto& from = coords[a.tgt];
      if (from.empty() || kernel[a.tgt].cols() == 0) continue;
      RatMatrix act(rows, from.size());
      for (std::size_t col = 0; col < from.size(); ++col) {
        const auto& [gi, k] = from[col];
        Word word = paths[k].word;
        word.push_back(a.id);
        for (const auto& [idx, c] : alg.class_of(a.src, word)) {
          act(coord_index.at({gi, idx}), col) = c;
        }
      }
      images.push_back(act * kernel[a.tgt]);
    }
    out.p1[q.position(v.id)] =
        static_cast<long>(kdim - detail::span_dim(images, rows));
  }
  out.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.g[i] = out.p0[i] - out.p1[i];
  return out;
}

}  // namespace icecluster
