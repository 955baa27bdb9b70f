#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilspec/errors.hpp"

namespace nilspec {

using Int = mpz_class;
using Rat = mpq_class;

// Dense integer matrix, row-major, arbitrary precision entries.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, Int(0)) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(std::initializer_list<std::initializer_list<Int>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    IntMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw dimension_error("ragged row list");
      std::size_t j = 0;
      for (const auto& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw dimension_error("matrix product dimension mismatch");
    IntMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }

  IntMatrix operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw dimension_error("matrix sum dimension mismatch");
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = e_[i] + o.e_[i];
    return s;
  }

  IntMatrix operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw dimension_error("matrix difference dimension mismatch");
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = e_[i] - o.e_[i];
    return s;
  }

  IntMatrix operator-() const {
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = -e_[i];
    return s;
  }

  std::vector<Int> mul_vec(const std::vector<Int>& v) const {
    if (v.size() != cols_) throw dimension_error("matrix-vector dimension mismatch");
    std::vector<Int> r(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  std::vector<Int> col(std::size_t j) const {
    std::vector<Int> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_col(std::size_t j, const std::vector<Int>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  bool is_zero() const {
    for (const auto& x : e_)
      if (x != 0) return false;
    return true;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> e_;
};

// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw dimension_error("det of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Int(1);
  IntMatrix a = m;
  Int prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return Int(0);
      for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

// N_{>0} with a distinguished infinity; the codomain of |.|_inf.
class ExtNat {
 public:
  static ExtNat infinity() { return ExtNat(true, Int(0)); }
  static ExtNat finite(Int v) {
    if (v < 1) throw invalid_parameters("finite ExtNat must be >= 1");
    return ExtNat(false, std::move(v));
  }

  bool is_infinite() const { return inf_; }
  const Int& value() const {
    if (inf_) throw invalid_parameters("value() on infinite ExtNat");
    return v_;
  }

  ExtNat operator*(const ExtNat& o) const {
    if (inf_ || o.inf_) return infinity();
    return finite(v_ * o.v_);
  }

  bool operator==(const ExtNat& o) const { return inf_ == o.inf_ && (inf_ || v_ == o.v_); }
  bool operator!=(const ExtNat& o) const { return !(*this == o); }
  bool operator==(const Int& x) const { return !inf_ && v_ == x; }
  bool operator==(long x) const { return !inf_ && v_ == x; }

  std::string str() const { return inf_ ? "inf" : v_.get_str(); }

 private:
  ExtNat(bool inf, Int v) : inf_(inf), v_(std::move(v)) {}
  bool inf_;
  Int v_;
};

// |x|_inf: absolute value with 0 mapped to infinity.
inline ExtNat ext_abs(const Int& x) {
  if (x == 0) return ExtNat::infinity();
  return ExtNat::finite(abs(x));
}

struct SNFResult {
  IntMatrix U;                 // rows x rows, unimodular
  IntMatrix V;                 // cols x cols, unimodular
  std::vector<Int> divisors;   // d1 | d2 | ..., zeros trailing
  std::size_t rank() const {
    std::size_t r = 0;
    while (r < divisors.size() && divisors[r] != 0) ++r;
    return r;
  }
};

// Smith normal form with transform accumulation: U*M*V diagonal.
inline SNFResult smith_normal_form(const IntMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(r);
  IntMatrix v = IntMatrix::identity(c);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < c; ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < r; ++k) std::swap(u(i, k), u(j, k));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < r; ++k) std::swap(a(k, i), a(k, j));
    for (std::size_t k = 0; k < c; ++k) std::swap(v(k, i), v(k, j));
  };
  auto add_row = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < c; ++k) a(dst, k) += q * a(src, k);
    for (std::size_t k = 0; k < r; ++k) u(dst, k) += q * u(src, k);
  };
  auto add_col = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < r; ++k) a(k, dst) += q * a(k, src);
    for (std::size_t k = 0; k < c; ++k) v(k, dst) += q * v(k, src);
  };
  auto negate_row = [&](std::size_t i) {
    for (std::size_t k = 0; k < c; ++k) a(i, k) = -a(i, k);
    for (std::size_t k = 0; k < r; ++k) u(i, k) = -u(i, k);
  };

  const std::size_t d = std::min(r, c);
  for (std::size_t t = 0; t < d; ++t) {
    // pivot: minimal nonzero absolute entry, row-major scan
    bool found = false;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j) {
        if (a(i, j) == 0) continue;
        if (!found || mpz_cmpabs(a(i, j).get_mpz_t(), a(pi, pj).get_mpz_t()) < 0) {
          pi = i;
          pj = j;
          found = true;
        }
      }
    if (!found) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (a(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        add_row(i, t, -q);
        if (a(i, t) != 0) {
          swap_rows(t, i);  // strictly smaller remainder becomes the pivot
          dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (a(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        add_col(j, t, -q);
        if (a(t, j) != 0) {
          swap_cols(t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // pivot must divide the remaining submatrix
      bool fixed = true;
      for (std::size_t i = t + 1; i < r && fixed; ++i)
        for (std::size_t j = t + 1; j < c && fixed; ++j)
          if (a(i, j) % a(t, t) != 0) {
            add_row(t, i, Int(1));
            fixed = false;
          }
      if (fixed) break;
    }
    if (a(t, t) < 0) negate_row(t);
  }

  SNFResult res;
  res.U = std::move(u);
  res.V = std::move(v);
  res.divisors.resize(d);
  for (std::size_t t = 0; t < d; ++t) res.divisors[t] = a(t, t);
  return res;
}

// Inverse of a unimodular matrix: from U*A*V = I we get A^{-1} = V*U.
inline IntMatrix inverse_unimodular(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw dimension_error("inverse of non-square matrix");
  SNFResult s = smith_normal_form(a);
  for (const auto& dv : s.divisors)
    if (dv != 1) throw invalid_parameters("matrix is not unimodular");
  return s.V * s.U;
}

// Columns span the integer kernel of m (a saturated lattice basis).
inline IntMatrix kernel_basis(const IntMatrix& m) {
  SNFResult s = smith_normal_form(m);
  const std::size_t rk = s.rank();
  const std::size_t c = m.cols();
  IntMatrix k(c, c - rk);
  for (std::size_t j = rk; j < c; ++j)
    for (std::size_t i = 0; i < c; ++i) k(i, j - rk) = s.V(i, j);
  return k;
}

// Unique integer D with D*C = M, if it exists; C must have full row rank.
inline std::optional<IntMatrix> solve_exact(const IntMatrix& cmat, const IntMatrix& m) {
  if (cmat.cols() != m.cols()) throw dimension_error("solve_exact: column count mismatch");
  SNFResult s = smith_normal_form(cmat);
  const std::size_t mr = cmat.rows();
  if (s.rank() != mr) throw rank_error("solve_exact: C is rank deficient");
  // D*C = M  <=>  (D*U^{-1})*(U*C*V) = M*V; read E = D*U^{-1} off the diagonal.
  IntMatrix w = m * s.V;
  const std::size_t p = m.rows();
  IntMatrix e(p, mr);
  for (std::size_t j = mr; j < w.cols(); ++j)
    for (std::size_t i = 0; i < p; ++i)
      if (w(i, j) != 0) return std::nullopt;  // inconsistent system
  for (std::size_t j = 0; j < mr; ++j)
    for (std::size_t i = 0; i < p; ++i) {
      if (w(i, j) % s.divisors[j] != 0) return std::nullopt;  // non-integral solution
      Int q = w(i, j) / s.divisors[j];
      e(i, j) = q;
    }
  return e * s.U;
}

struct SkewNormalForm {
  IntMatrix U;              // unimodular, U*M*U^T in canonical block form
  std::vector<Int> blocks;  // d1 | d2 | ..., di > 0
};

// Canonical form of an integer skew-symmetric matrix under unimodular
// congruence: hyperbolic 2x2 blocks [[0,d],[-d,0]] with d1|d2|..., then zeros.
inline SkewNormalForm skew_normal_form(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw invalid_parameters("skew_normal_form: non-square input");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m(i, j) != -m(j, i)) throw invalid_parameters("skew_normal_form: input not skew-symmetric");

  IntMatrix b = m;
  IntMatrix u = IntMatrix::identity(n);

  auto sym_swap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < n; ++k) std::swap(b(i, k), b(j, k));
    for (std::size_t k = 0; k < n; ++k) std::swap(b(k, i), b(k, j));
    for (std::size_t k = 0; k < n; ++k) std::swap(u(i, k), u(j, k));
  };
  // row_i += q*row_k together with col_i += q*col_k (congruence by I + q*e_i e_k^T)
  auto sym_add = [&](std::size_t i, std::size_t k, const Int& q) {
    if (q == 0) return;
    for (std::size_t t = 0; t < n; ++t) b(i, t) += q * b(k, t);
    for (std::size_t t = 0; t < n; ++t) b(t, i) += q * b(t, k);
    for (std::size_t t = 0; t < n; ++t) u(i, t) += q * u(k, t);
  };

  std::vector<Int> blocks;
  std::size_t t = 0;
  while (t + 1 < n) {
    // minimal nonzero absolute entry in the working region, row-major
    bool found = false;
    std::size_t pi = 0, pj = 0;
    for (std::size_t i = t; i < n; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (b(i, j) == 0) continue;
        if (!found || mpz_cmpabs(b(i, j).get_mpz_t(), b(pi, pj).get_mpz_t()) < 0) {
          pi = i;
          pj = j;
          found = true;
        }
      }
    if (!found) break;
    if (pi != t) {
      if (pj == t) pj = pi;  // swap moves the column mate too
      sym_swap(t, pi);
    }
    if (pj != t + 1) sym_swap(t + 1, pj);

    for (;;) {
      const Int& d0 = b(t, t + 1);
      bool shrunk = false;
      for (std::size_t i = t + 2; i < n; ++i) {
        if (b(i, t) != 0) {
          // b(t+1, t) = -d0; reduce b(i, t) modulo d0
          Int q;
          mpz_fdiv_q(q.get_mpz_t(), b(i, t).get_mpz_t(), d0.get_mpz_t());
          sym_add(i, t + 1, q);
          if (b(i, t) != 0) shrunk = true;
        }
        if (b(i, t + 1) != 0) {
          Int q;
          mpz_fdiv_q(q.get_mpz_t(), b(i, t + 1).get_mpz_t(), d0.get_mpz_t());
          sym_add(i, t, -q);
          if (b(i, t + 1) != 0) shrunk = true;
        }
      }
      if (shrunk) {
        // a remainder smaller than the pivot exists: re-pick it
        bool f2 = false;
        std::size_t qi = 0, qj = 0;
        for (std::size_t i = t; i < n; ++i)
          for (std::size_t j = t; j < n; ++j) {
            if (b(i, j) == 0) continue;
            if (!f2 || mpz_cmpabs(b(i, j).get_mpz_t(), b(qi, qj).get_mpz_t()) < 0) {
              qi = i;
              qj = j;
              f2 = true;
            }
          }
        if (qi != t) {
          if (qj == t) qj = qi;
          sym_swap(t, qi);
        }
        if (qj != t + 1) sym_swap(t + 1, qj);
        continue;
      }
      // rows t, t+1 are clear; enforce divisibility into the rest
      bool divides = true;
      for (std::size_t i = t + 2; i < n && divides; ++i)
        for (std::size_t j = t + 2; j < n && divides; ++j)
          if (b(i, j) % d0 != 0) {
            sym_add(t, i, Int(1));
            divides = false;
          }
      if (divides) break;
    }
    if (b(t, t + 1) < 0) sym_swap(t, t + 1);
    blocks.push_back(b(t, t + 1));
    t += 2;
  }

  SkewNormalForm res;
  res.U = std::move(u);
  res.blocks = std::move(blocks);
  return res;
}

}  // namespace nilspec
