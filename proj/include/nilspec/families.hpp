#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "nilspec/errors.hpp"
#include "nilspec/group.hpp"
#include "nilspec/intlin.hpp"
#include "nilspec/morphism.hpp"

namespace nilspec {

namespace detail {

inline void check_divisor_chain(const std::vector<Int>& d) {
  if (d.empty() || d[0] == 0) throw invalid_parameters("divisor chain must start with d1 != 0");
  for (const auto& v : d)
    if (v < 0) throw invalid_parameters("divisors must be nonnegative");
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    if (d[i] == 0 && d[i + 1] != 0)
      throw invalid_parameters("zero divisor may only be followed by zeros");
    if (d[i] != 0 && d[i + 1] % d[i] != 0)
      throw invalid_parameters("divisor chain violated: d_i must divide d_{i+1}");
  }
}

// evaluate a word given as (generator element, exponent) pairs
inline GroupElement word(const TwoStepGroup& g,
                         std::initializer_list<std::pair<GroupElement, Int>> letters) {
  GroupElement r = g.identity();
  for (const auto& [el, k] : letters) r = multiply(g, r, power(g, el, k));
  return r;
}

inline EndoData endo_from_images(const TwoStepGroup& g, const std::vector<GroupElement>& x_images,
                                 const IntMatrix& d) {
  EndoData e;
  e.A = IntMatrix(g.n(), g.n());
  e.B = IntMatrix(g.m(), g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    e.A.set_col(i, x_images[i].a);
    e.B.set_col(i, x_images[i].u);
  }
  e.D = d;
  return verify(g, std::move(e));
}

}  // namespace detail

// G(d_1,...,d_r): generators x_1..x_r, y_1..y_r, z with [x_i, y_i] = z^{d_i}.
inline TwoStepGroup make_Gd(const std::vector<Int>& d) {
  detail::check_divisor_chain(d);
  const std::size_t r = d.size();
  TwoStepGroup g(2 * r, 1);
  for (std::size_t i = 0; i < r; ++i) g.set_commutator(i, r + i, {d[i]});
  return g;
}

// G(d_1,...,d_r) x Z: one extra central generator u (index 2r).
inline TwoStepGroup make_Gd_times_Z(const std::vector<Int>& d) {
  detail::check_divisor_chain(d);
  const std::size_t r = d.size();
  TwoStepGroup g(2 * r + 1, 1);
  for (std::size_t i = 0; i < r; ++i) g.set_commutator(i, r + i, {d[i]});
  return g;
}

// I(3,2) canonical presentation: [x1,x2] = z1^alpha z2^beta, [x1,x3] = z2^gamma.
inline TwoStepGroup make_I32(const Int& alpha, const Int& beta, const Int& gamma) {
  if (alpha == 0 || gamma == 0) throw invalid_parameters("make_I32: alpha and gamma must be nonzero");
  TwoStepGroup g(3, 2);
  g.set_commutator(0, 1, {alpha, beta});
  g.set_commutator(0, 2, {Int(0), gamma});
  return g;
}

// G(delta, lambda, Phi) for Phi = aX^2 + bXY + cY^2.
inline TwoStepGroup make_I42(const Int& delta, const Int& lambda, const Int& a, const Int& b,
                             const Int& c) {
  if (delta < 1 || lambda < 1) throw invalid_parameters("make_I42: delta and lambda must be >= 1");
  TwoStepGroup g(4, 2);
  g.set_commutator(0, 2, {Int(0), delta * lambda});
  g.set_commutator(0, 3, {delta, Int(0)});
  g.set_commutator(1, 2, {a * delta, b * delta * lambda});
  g.set_commutator(1, 3, {Int(0), -c * delta * lambda});
  return g;
}

// Hirsch length 7 path-graph group: [x1,x2]=z1, [x2,x3]=z2, [x3,x4]=z3.
inline TwoStepGroup make_path7() {
  TwoStepGroup g(4, 3);
  g.set_commutator(0, 1, {Int(1), Int(0), Int(0)});
  g.set_commutator(1, 2, {Int(0), Int(1), Int(0)});
  g.set_commutator(2, 3, {Int(0), Int(0), Int(1)});
  return g;
}

// phi(x_i) = y_i, phi(y_i) = x_i y_i^{-k_i}, phi(z) = z^{-1} on G(d_1,...,d_r).
inline EndoData aut_even(const TwoStepGroup& g, const std::vector<Int>& k) {
  const std::size_t r = k.size();
  if (g.n() != 2 * r || g.m() != 1)
    throw invalid_parameters("aut_even: parameter count does not match the group");
  for (const auto& v : k)
    if (v < 1) throw invalid_parameters("aut_even: k_i must be >= 1");
  std::vector<GroupElement> im;
  for (std::size_t i = 0; i < r; ++i) im.push_back(g.x_generator(r + i));
  for (std::size_t i = 0; i < r; ++i)
    im.push_back(detail::word(g, {{g.x_generator(i), Int(1)}, {g.x_generator(r + i), -k[i]}}));
  IntMatrix d(1, 1);
  d(0, 0) = -1;
  return detail::endo_from_images(g, im, d);
}

// the odd-case map: additionally phi(u) = u^{-1} on G(d_1,...,d_r) x Z.
inline EndoData aut_odd(const TwoStepGroup& g, const std::vector<Int>& k) {
  const std::size_t r = k.size();
  if (g.n() != 2 * r + 1 || g.m() != 1)
    throw invalid_parameters("aut_odd: parameter count does not match the group");
  for (const auto& v : k)
    if (v < 1) throw invalid_parameters("aut_odd: k_i must be >= 1");
  std::vector<GroupElement> im;
  for (std::size_t i = 0; i < r; ++i) im.push_back(g.x_generator(r + i));
  for (std::size_t i = 0; i < r; ++i)
    im.push_back(detail::word(g, {{g.x_generator(i), Int(1)}, {g.x_generator(r + i), -k[i]}}));
  im.push_back(power(g, g.x_generator(2 * r), Int(-1)));
  IntMatrix d(1, 1);
  d(0, 0) = -1;
  return detail::endo_from_images(g, im, d);
}

// the finite-R automorphism of the I(3,2) canonical presentation
inline EndoData aut_i32(const TwoStepGroup& g, const Int& alpha, const Int& beta, const Int& gamma,
                        const Int& k, const Int& l) {
  if (g.n() != 3 || g.m() != 2) throw invalid_parameters("aut_i32: group is not I(3,2)-shaped");
  if (k == 0 || l == 0) throw invalid_parameters("aut_i32: k and l must be nonzero");
  Int agkl = alpha * gamma * gamma * k * l;
  if (agkl + 4 == 0) throw invalid_parameters("aut_i32: 4 + alpha*gamma^2*k*l must be nonzero");
  std::vector<GroupElement> im;
  im.push_back(power(g, g.x_generator(0), Int(-1)));
  im.push_back(detail::word(g, {{g.x_generator(1), -beta * gamma * l - agkl - 1},
                                {g.x_generator(2), beta * beta * l + alpha * beta * gamma * k * l - alpha * k}}));
  im.push_back(detail::word(g, {{g.x_generator(1), -gamma * gamma * l},
                                {g.x_generator(2), beta * gamma * l - 1}}));
  IntMatrix d(2, 2);
  d(0, 0) = agkl + 1;
  d(1, 0) = gamma * k;
  d(0, 1) = alpha * gamma * l;
  d(1, 1) = 1;
  return detail::endo_from_images(g, im, d);
}

// the finite-R automorphism of G(delta, lambda, Phi) for Phi(0,1) = c != 0
inline EndoData aut_i42(const TwoStepGroup& g, const Int& c) {
  if (g.n() != 4 || g.m() != 2) throw invalid_parameters("aut_i42: group is not I(4,2)-shaped");
  if (c == 0)
    throw invalid_parameters("aut_i42: requires Phi(0,1) != 0; transform via psi_k first");
  std::vector<GroupElement> im;
  im.push_back(detail::word(g, {{g.x_generator(0), -1 - 4 * c}, {g.x_generator(3), Int(2)}}));
  im.push_back(detail::word(g, {{g.x_generator(1), -1 - 4 * c}, {g.x_generator(2), -2 * c}}));
  im.push_back(detail::word(g, {{g.x_generator(1), Int(2)}, {g.x_generator(2), Int(1)}}));
  im.push_back(detail::word(g, {{g.x_generator(0), -2 * c}, {g.x_generator(3), Int(1)}}));
  IntMatrix d(2, 2);
  d(0, 0) = -1;
  d(1, 1) = -1;
  return detail::endo_from_images(g, im, d);
}

// block-diagonal direct product of two groups
inline TwoStepGroup direct_product(const TwoStepGroup& g1, const TwoStepGroup& g2) {
  TwoStepGroup g(g1.n() + g2.n(), g1.m() + g2.m());
  for (std::size_t i = 0; i < g1.n(); ++i)
    for (std::size_t j = i + 1; j < g1.n(); ++j) {
      std::vector<Int> z(g.m(), Int(0));
      const auto& c = g1.commutator_exponents(i, j);
      bool nz = false;
      for (std::size_t k = 0; k < g1.m(); ++k) {
        z[k] = c[k];
        if (c[k] != 0) nz = true;
      }
      if (nz) g.set_commutator(i, j, std::move(z));
    }
  for (std::size_t i = 0; i < g2.n(); ++i)
    for (std::size_t j = i + 1; j < g2.n(); ++j) {
      std::vector<Int> z(g.m(), Int(0));
      const auto& c = g2.commutator_exponents(i, j);
      bool nz = false;
      for (std::size_t k = 0; k < g2.m(); ++k) {
        z[g1.m() + k] = c[k];
        if (c[k] != 0) nz = true;
      }
      if (nz) g.set_commutator(g1.n() + i, g1.n() + j, std::move(z));
    }
  return g;
}

inline EndoData product_aut(const TwoStepGroup& g1, const EndoData& e1, const TwoStepGroup& g2,
                            const EndoData& e2) {
  require_verified(e1);
  require_verified(e2);
  const std::size_t n = g1.n() + g2.n(), m = g1.m() + g2.m();
  EndoData e;
  e.A = IntMatrix(n, n);
  e.B = IntMatrix(m, n);
  e.D = IntMatrix(m, m);
  for (std::size_t i = 0; i < g1.n(); ++i)
    for (std::size_t j = 0; j < g1.n(); ++j) e.A(i, j) = e1.A(i, j);
  for (std::size_t i = 0; i < g2.n(); ++i)
    for (std::size_t j = 0; j < g2.n(); ++j) e.A(g1.n() + i, g1.n() + j) = e2.A(i, j);
  for (std::size_t i = 0; i < g1.m(); ++i)
    for (std::size_t j = 0; j < g1.n(); ++j) e.B(i, j) = e1.B(i, j);
  for (std::size_t i = 0; i < g2.m(); ++i)
    for (std::size_t j = 0; j < g2.n(); ++j) e.B(g1.m() + i, g1.n() + j) = e2.B(i, j);
  for (std::size_t i = 0; i < g1.m(); ++i)
    for (std::size_t j = 0; j < g1.m(); ++j) e.D(i, j) = e1.D(i, j);
  for (std::size_t i = 0; i < g2.m(); ++i)
    for (std::size_t j = 0; j < g2.m(); ++j) e.D(g1.m() + i, g1.m() + j) = e2.D(i, j);
  return verify(direct_product(g1, g2), std::move(e));
}

// the abelian group Z^k (n = k, m = 0, no commutators)
inline TwoStepGroup make_abelian(std::size_t rank) {
  return TwoStepGroup(rank, 0);
}

}  // namespace nilspec
