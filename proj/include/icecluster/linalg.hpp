#pragma once

// Dense exact matrices over Q and small helpers for F_p.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"

namespace icecluster {

using Rational = mpq_class;
using Integer = mpz_class;

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static RatMatrix from_rows(const std::vector<std::vector<Rational>>& rows,
                             std::size_t cols) {
    RatMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DomainError("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) {
    return a_[i * cols_ + j];
  }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  bool is_zero() const {
    for (const auto& x : a_) {
      if (x != 0) return false;
    }
    return true;
  }

  friend RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
    if (x.cols_ != y.rows_) {
      throw DomainError("matrix shapes " + x.shape() + " and " + y.shape() +
                        " do not compose");
    }
    RatMatrix out(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i) {
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) out(i, j) += x(i, k) * y(k, j);
      }
    }
    return out;
  }

  RatMatrix& operator+=(const RatMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DomainError("matrix shapes " + shape() + " and " + o.shape() +
                        " differ");
    }
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }

  RatMatrix scaled(const Rational& s) const {
    RatMatrix out = *this;
    for (auto& x : out.a_) x *= s;
    return out;
  }

  RatMatrix transpose() const {
    RatMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    }
    return out;
  }

  /// Columns of this matrix next to those of o.
  RatMatrix hconcat(const RatMatrix& o) const {
    if (rows_ != o.rows_) throw DomainError("hconcat row mismatch");
    RatMatrix out(rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < o.cols_; ++j) out(i, cols_ + j) = o(i, j);
    }
    return out;
  }

  RatMatrix column(std::size_t j) const {
    RatMatrix out(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, j);
    return out;
  }

  /// Reduced row echelon form in place; returns the pivot columns.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t p = r;
      while (p < rows_ && (*this)(p, c) == 0) ++p;
      if (p == rows_) continue;
      for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
      const Rational inv = 1 / (*this)(r, c);
      for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) *= inv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r || (*this)(i, c) == 0) continue;
        const Rational f = (*this)(i, c);
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  std::size_t rank() const {
    RatMatrix m = *this;
    return m.rref().size();
  }

  /// Basis of the null space, as the columns of the result.
  RatMatrix kernel() const {
    RatMatrix m = *this;
    const auto pivots = m.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots) is_pivot[p] = true;
    RatMatrix out(cols_, cols_ - pivots.size());
    std::size_t k = 0;
    for (std::size_t f = 0; f < cols_; ++f) {
      if (is_pivot[f]) continue;
      out(f, k) = 1;
      for (std::size_t r = 0; r < pivots.size(); ++r) out(pivots[r], k) = -m(r, f);
      ++k;
    }
    return out;
  }

  /// Basis of the column space, chosen among the columns.
  RatMatrix column_basis() const {
    RatMatrix m = *this;
    const auto pivots = m.rref();
    RatMatrix out(rows_, pivots.size());
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      for (std::size_t i = 0; i < rows_; ++i) out(i, k) = (*this)(i, pivots[k]);
    }
    return out;
  }

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

  std::string shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> a_;
};

/// Residue of a rational modulo p; throws when p divides the denominator.
inline std::int64_t reduce_mod(const Rational& x, std::int64_t p) {
  mpz_class pp = static_cast<long>(p);
  mpz_class den = x.get_den();
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()) == 0) {
    throw DomainError("denominator " + den.get_str() + " vanishes mod " +
                      std::to_string(p));
  }
  mpz_class r = (x.get_num() * inv) % pp;
  if (r < 0) r += pp;
  return r.get_si();
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::tie(t, nt) = std::pair{nt, t - q * nt};
    std::tie(r, nr) = std::pair{nr, r - q * nr};
  }
  if (r != 1) throw DomainError("not invertible mod p");
  return t < 0 ? t + p : t;
}

/// Dense matrix over F_p stored row-major.
struct ModMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> a;

  std::int64_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline ModMatrix reduce_mod(const RatMatrix& m, std::int64_t p) {
  ModMatrix out{m.rows(), m.cols(), {}};
  out.a.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out.a.push_back(reduce_mod(m(i, j), p));
  }
  return out;
}

}  // namespace icecluster
