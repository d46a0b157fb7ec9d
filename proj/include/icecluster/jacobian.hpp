#pragma once

// Finite-dimensional shadow of a relative Jacobian algebra: the span of paths
// of length <= cap modulo the span of u·r·v (r a relation, total length <=
// cap), computed by exact sparse elimination over the rationals.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"
#include "icecluster/potential.hpp"
#include "icecluster/quiver.hpp"

namespace icecluster {

inline constexpr std::size_t kJacobianCapLimit = 12;

struct Path {
  int src = 0;
  int tgt = 0;
  Word word;  // right-to-left; empty for the idempotent at src
};

using SparseVector = std::map<std::size_t, Rational>;

namespace detail {

/// Row echelon form with pivot = largest index of each row.
class Echelon {
 public:
  /// Returns true when v was independent of the rows so far.
  bool insert(SparseVector v) {
    reduce_leading(v);
    if (v.empty()) return false;
    auto top = std::prev(v.end());
    const Rational lead = top->second;
    for (auto& [i, c] : v) c /= lead;
    rows_.emplace(top->first, std::move(v));
    return true;
  }

  /// Fully reduces v against the rows: the result is supported on non-pivot
  /// indices only.
  SparseVector normal_form(SparseVector v) const {
    SparseVector out;
    while (!v.empty()) {
      auto top = std::prev(v.end());
      auto row = rows_.find(top->first);
      if (row == rows_.end()) {
        out.insert(*top);
        v.erase(top);
        continue;
      }
      const Rational f = top->second;
      for (const auto& [i, c] : row->second) {
        auto& slot = v[i];
        slot -= f * c;
        if (slot == 0) v.erase(i);
      }
    }
    return out;
  }

  bool is_pivot(std::size_t i) const { return rows_.contains(i); }
  std::size_t rank() const { return rows_.size(); }

 private:
  void reduce_leading(SparseVector& v) const {
    while (!v.empty()) {
      auto top = std::prev(v.end());
      auto row = rows_.find(top->first);
      if (row == rows_.end()) return;
      const Rational f = top->second;
      for (const auto& [i, c] : row->second) {
        auto& slot = v[i];
        slot -= f * c;
        if (slot == 0) v.erase(i);
      }
    }
  }

  std::map<std::size_t, SparseVector> rows_;
};

}  // namespace detail

struct JacobianDims {
  /// per_length[k] = dim(P<=k / I<=k) - dim(P<=k-1 / I<=k-1).
  std::vector<long> per_length;
  std::size_t total = 0;
  /// The top layer contributed nothing new.
  bool stabilized = false;
  /// Paths whose classes form a basis of the quotient.
  std::vector<Path> basis;
};

/// Quotient of the truncated path space by the truncated Jacobian ideal.
class TruncatedJacobianAlgebra {
 public:
  TruncatedJacobianAlgebra(const JacobianPresentation& p, std::size_t cap)
      : quiver_(p.quiver), cap_(cap) {
    if (cap > kJacobianCapLimit) {
      throw GuardError("Jacobian path cap " + std::to_string(cap) +
                       " exceeds the limit 12");
    }
    enumerate_paths();
    build_ideal(p);
  }

  const IceQuiver& quiver() const { return quiver_; }
  std::size_t cap() const { return cap_; }
  const std::vector<Path>& paths() const { return paths_; }
  const JacobianDims& dims() const { return dims_; }

  /// Index of a path, or npos when it is longer than the cap.
  std::size_t index_of(int src, const Word& word) const {
    auto it = index_.find({word.empty() ? src : 0, word});
    return it == index_.end() ? npos : it->second;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  SparseVector normal_form(SparseVector v) const {
    return ideal_.normal_form(std::move(v));
  }

  bool is_basis_index(std::size_t i) const { return !ideal_.is_pivot(i); }

  /// Class of the path (extended by arrows) in the quotient. Paths longer
  /// than the cap are zero; only meaningful when the dims stabilized.
  SparseVector class_of(int src, const Word& word) const {
    std::size_t i = index_of(src, word);
    if (i == npos) return {};
    return normal_form({{i, Rational(1)}});
  }

 private:
  void enumerate_paths() {
    for (const Vertex& v : quiver_.vertices()) add_path({v.id, v.id, {}});
    std::size_t layer_begin = 0;
    for (std::size_t len = 1; len <= cap_; ++len) {
      const std::size_t layer_end = paths_.size();
      for (std::size_t i = layer_begin; i < layer_end; ++i) {
        for (const Arrow& a : quiver_.arrows()) {
          if (a.src != paths_[i].tgt) continue;
          Path p{paths_[i].src, a.tgt, {a.id}};
          p.word.insert(p.word.end(), paths_[i].word.begin(),
                        paths_[i].word.end());
          add_path(std::move(p));
        }
      }
      layer_begin = layer_end;
    }
  }

  void add_path(Path p) {
    index_.emplace(std::pair{p.word.empty() ? p.src : 0, p.word},
                   paths_.size());
    paths_.push_back(std::move(p));
  }

  void build_ideal(const JacobianPresentation& p) {
    // paths by start and by end for forming u·r·v
    std::map<int, std::vector<std::size_t>> starting, ending;
    std::vector<std::size_t> count_by_length(cap_ + 1, 0);
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      starting[paths_[i].src].push_back(i);
      ending[paths_[i].tgt].push_back(i);
      count_by_length[paths_[i].word.size()] += 1;
    }
    // generators grouped by total (max) length
    std::vector<std::vector<SparseVector>> gens(cap_ + 1);
    for (const auto& [arrow_id, rel] : p.relations) {
      if (rel.is_zero()) continue;
      const Arrow& a = quiver_.arrow(arrow_id);
      const std::size_t rlen = rel.max_length();
      if (rlen > cap_) continue;
      // relation runs from tgt(a) to src(a)
      for (std::size_t ui : starting[a.src]) {
        const Path& u = paths_[ui];
        if (u.word.size() + rlen > cap_) continue;
        for (std::size_t vi : ending[a.tgt]) {
          const Path& v = paths_[vi];
          const std::size_t total = u.word.size() + rlen + v.word.size();
          if (total > cap_) continue;
          SparseVector g;
          for (const auto& [w, c] : rel.terms()) {
            Word full = u.word;
            full.insert(full.end(), w.begin(), w.end());
            full.insert(full.end(), v.word.begin(), v.word.end());
            std::size_t idx = index_of(a.tgt, full);
            if (idx == npos) throw Error("internal: path not enumerated");
            auto& slot = g[idx];
            slot += c;
            if (slot == 0) g.erase(idx);
          }
          if (!g.empty()) gens[total].push_back(std::move(g));
        }
      }
    }
    long prev_total = 0;
    std::size_t paths_so_far = 0;
    for (std::size_t k = 0; k <= cap_; ++k) {
      paths_so_far += count_by_length[k];
      for (auto& g : gens[k]) ideal_.insert(std::move(g));
      const long total =
          static_cast<long>(paths_so_far) - static_cast<long>(ideal_.rank());
      dims_.per_length.push_back(total - prev_total);
      prev_total = total;
    }
    dims_.total = static_cast<std::size_t>(prev_total);
    dims_.stabilized = dims_.per_length.back() == 0;
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      if (!ideal_.is_pivot(i)) dims_.basis.push_back(paths_[i]);
    }
  }

  IceQuiver quiver_;
  std::size_t cap_;
  std::vector<Path> paths_;
  std::map<std::pair<int, Word>, std::size_t> index_;
  detail::Echelon ideal_;
  JacobianDims dims_;
};

inline JacobianDims jacobian_dim_upto(const JacobianPresentation& p,
                                      std::size_t cap) {
  return TruncatedJacobianAlgebra(p, cap).dims();
}

}  // namespace icecluster
