#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "nilspec/errors.hpp"
#include "nilspec/intlin.hpp"

namespace nilspec {

// Univariate polynomial over Z, coefficients low degree first.
class IntPolynomial {
 public:
  IntPolynomial() {}
  explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static IntPolynomial zero() { return IntPolynomial(); }
  static IntPolynomial constant(Int v) { return IntPolynomial({std::move(v)}); }
  static IntPolynomial x() { return IntPolynomial({Int(0), Int(1)}); }

  bool is_zero() const { return c_.empty(); }
  // degree of the zero polynomial is -1
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<Int>& coeffs() const { return c_; }
  const Int& operator[](std::size_t i) const { return c_[i]; }
  const Int& leading() const { return c_.back(); }

  bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }
  bool operator!=(const IntPolynomial& o) const { return !(*this == o); }

  Int eval(const Int& x) const {
    Int r(0);
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  IntPolynomial operator+(const IntPolynomial& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return IntPolynomial(std::move(r));
  }

  IntPolynomial operator-(const IntPolynomial& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return IntPolynomial(std::move(r));
  }

  IntPolynomial operator-() const {
    std::vector<Int> r = c_;
    for (auto& x : r) x = -x;
    return IntPolynomial(std::move(r));
  }

  IntPolynomial operator*(const IntPolynomial& o) const {
    if (is_zero() || o.is_zero()) return zero();
    std::vector<Int> r(c_.size() + o.c_.size() - 1, Int(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return IntPolynomial(std::move(r));
  }

  IntPolynomial operator*(const Int& s) const {
    std::vector<Int> r = c_;
    for (auto& x : r) x *= s;
    return IntPolynomial(std::move(r));
  }

  IntPolynomial derivative() const {
    if (c_.size() <= 1) return zero();
    std::vector<Int> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = Int(static_cast<long>(i)) * c_[i];
    return IntPolynomial(std::move(r));
  }

  // x^deg * p(1/x): reversed coefficient vector
  IntPolynomial reciprocal() const {
    std::vector<Int> r(c_.rbegin(), c_.rend());
    return IntPolynomial(std::move(r));
  }

  Int content() const {
    Int g(0);
    for (const auto& x : c_) g = gcd(g, x);
    return g;
  }

  IntPolynomial primitive_part() const {
    if (is_zero()) return zero();
    Int g = content();
    if (leading() < 0) g = -g;
    std::vector<Int> r = c_;
    for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return IntPolynomial(std::move(r));
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += c_[i] > 0 ? " + " : " - ";
      else if (c_[i] < 0) s += "-";
      Int a = abs(c_[i]);
      if (i == 0 || a != 1) s += a.get_str();
      if (i >= 1) s += i == 1 ? "x" : "x^" + std::to_string(i);
    }
    return s;
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;
};

// Pseudo-remainder of a by b (b nonzero): lc(b)^(da-db+1) * a mod b.
inline IntPolynomial pseudo_rem(const IntPolynomial& a, const IntPolynomial& b) {
  IntPolynomial r = a;
  const long db = b.degree();
  while (!r.is_zero() && r.degree() >= db) {
    const long shift = r.degree() - db;
    std::vector<Int> m(static_cast<std::size_t>(shift) + 1, Int(0));
    m.back() = r.leading();
    r = r * b.leading() - b * IntPolynomial(std::move(m));
  }
  return r;
}

// gcd over Q, returned as a primitive integer polynomial with positive leading
// coefficient (primitive PRS).
inline IntPolynomial poly_gcd(IntPolynomial a, IntPolynomial b) {
  if (a.is_zero()) return b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  a = a.primitive_part();
  b = b.primitive_part();
  while (!b.is_zero()) {
    IntPolynomial r = pseudo_rem(a, b).primitive_part();
    a = std::move(b);
    b = std::move(r);
  }
  return a.primitive_part();
}

inline IntPolynomial square_free_part(const IntPolynomial& p) {
  if (p.degree() <= 0) return p.primitive_part();
  IntPolynomial g = poly_gcd(p, p.derivative());
  if (g.degree() <= 0) return p.primitive_part();
  // exact division p / g over Q; result scaled back to a primitive polynomial
  IntPolynomial r = p;
  std::vector<Int> q(static_cast<std::size_t>(p.degree() - g.degree()) + 1, Int(0));
  Int scale(1);
  while (!r.is_zero() && r.degree() >= g.degree()) {
    const long shift = r.degree() - g.degree();
    // keep everything integral by premultiplying with lc(g)
    for (auto& x : q) x *= g.leading();
    scale *= g.leading();
    q[static_cast<std::size_t>(shift)] += r.leading();
    std::vector<Int> m(static_cast<std::size_t>(shift) + 1, Int(0));
    m.back() = r.leading();
    r = r * g.leading() - g * IntPolynomial(std::move(m));
  }
  return IntPolynomial(std::move(q)).primitive_part();
}

// Monic characteristic polynomial of a square integer matrix
// (Faddeev-LeVerrier; all divisions are exact over Z).
inline IntPolynomial charpoly(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw dimension_error("charpoly of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Int> c(n + 1, Int(0));
  c[n] = 1;
  IntMatrix nk = IntMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    nk = m * nk;
    Int tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += nk(i, i);
    Int ck = -tr;
    mpz_divexact_ui(ck.get_mpz_t(), ck.get_mpz_t(), static_cast<unsigned long>(k));
    c[n - k] = ck;
    for (std::size_t i = 0; i < n; ++i) nk(i, i) += ck;
  }
  return IntPolynomial(std::move(c));
}

namespace detail {

// sign of a rational polynomial at a rational point
inline int sign_at(const std::vector<Rat>& p, const Rat& x) {
  Rat r(0);
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return sgn(r);
}

inline std::vector<Rat> rat_poly(const IntPolynomial& p) {
  std::vector<Rat> r(p.coeffs().size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = Rat(p.coeffs()[i]);
  return r;
}

inline void rat_normalize(std::vector<Rat>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline std::vector<Rat> rat_rem(std::vector<Rat> a, const std::vector<Rat>& b) {
  while (a.size() >= b.size()) {
    Rat q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= q * b[i];
    a.pop_back();
    rat_normalize(a);
  }
  return a;
}

// Number of distinct real roots of the square-free polynomial p in the open
// interval (lo, hi), assuming p(lo) != 0 and p(hi) != 0.
inline int sturm_count_open(const IntPolynomial& p, const Rat& lo, const Rat& hi) {
  std::vector<std::vector<Rat>> chain;
  chain.push_back(rat_poly(p));
  chain.push_back(rat_poly(p.derivative()));
  rat_normalize(chain[0]);
  rat_normalize(chain[1]);
  while (!chain.back().empty() && chain.back().size() > 1) {
    std::vector<Rat> r = rat_rem(chain[chain.size() - 2], chain.back());
    for (auto& x : r) x = -x;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  auto variations = [&](const Rat& x) {
    int v = 0, prev = 0;
    for (const auto& q : chain) {
      if (q.empty()) continue;
      int s = sign_at(q, x);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++v;
      prev = s;
    }
    return v;
  };
  return variations(lo) - variations(hi);
}

}  // namespace detail

// True iff p has a complex root of modulus exactly 1. Exact: roots at +-1 are
// checked directly; the remaining unit-circle candidates lie in the
// self-inversive factor gcd(p, reciprocal(p)), which is converted to a
// polynomial in y = x + 1/x and subjected to a Sturm count on (-2, 2).
inline bool has_root_on_unit_circle(const IntPolynomial& p) {
  if (p.is_zero()) throw invalid_parameters("has_root_on_unit_circle: zero polynomial");
  if (p.eval(Int(1)) == 0 || p.eval(Int(-1)) == 0) return true;
  IntPolynomial g = poly_gcd(p, p.reciprocal());
  if (g.degree() <= 0) return false;
  g = square_free_part(g);
  // g is now square-free, self-inversive, without roots at +-1 or 0; such a
  // polynomial is palindromic of even degree
  const long dg = g.degree();
  if (dg <= 0) return false;
  const long s = dg / 2;
  // h(y) = g(x)/x^s under y = x + 1/x, via w_k(y) = x^k + x^-k
  std::vector<Int> h(static_cast<std::size_t>(s) + 1, Int(0));
  std::vector<Int> w_prev{Int(2)};          // w_0 = 2
  std::vector<Int> w_cur{Int(0), Int(1)};   // w_1 = y
  h[0] += g[static_cast<std::size_t>(s)];
  for (long k = 1; k <= s; ++k) {
    // loop invariant: w_cur = w_k, w_prev = w_{k-1}
    for (std::size_t i = 0; i < w_cur.size(); ++i)
      h[i] += g[static_cast<std::size_t>(s + k)] * w_cur[i];
    if (k < s) {
      // w_{k+1} = y*w_k - w_{k-1}
      std::vector<Int> next(w_cur.size() + 1, Int(0));
      for (std::size_t i = 0; i < w_cur.size(); ++i) next[i + 1] = w_cur[i];
      for (std::size_t i = 0; i < w_prev.size(); ++i) next[i] -= w_prev[i];
      w_prev = std::move(w_cur);
      w_cur = std::move(next);
    }
  }
  IntPolynomial hy = square_free_part(IntPolynomial(std::move(h)));
  return detail::sturm_count_open(hy, Rat(-2), Rat(2)) > 0;
}

}  // namespace nilspec
