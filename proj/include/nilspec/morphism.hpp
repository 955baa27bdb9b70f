#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nilspec/errors.hpp"
#include "nilspec/group.hpp"
#include "nilspec/intlin.hpp"

namespace nilspec {

// Endomorphism data: phi(x_i) = x^{A col i} z^{B col i}, phi(z_j) = z^{D col j}.
struct EndoData {
  IntMatrix A;  // n x n
  IntMatrix B;  // m x n
  IntMatrix D;  // m x m
  bool verified = false;
};

// Column (i,j) of M(A) is beta(A e_i, A e_j), in lexicographic pair order.
inline IntMatrix commutator_image_matrix(const TwoStepGroup& g, const IntMatrix& a) {
  IntMatrix m(g.m(), g.pair_count());
  for (std::size_t p = 0; p < g.pair_count(); ++p) {
    auto [i, j] = g.pair_at(p);
    std::vector<Int> b = g.beta(a.col(i), a.col(j));
    m.set_col(p, b);
  }
  return m;
}

// The unique integer D with D*C = M(A) (forced by bilinearity), if any.
inline std::optional<IntMatrix> solve_induced_center_map(const TwoStepGroup& g, const IntMatrix& a) {
  if (a.rows() != g.n() || a.cols() != g.n())
    throw dimension_error("solve_induced_center_map: A must be n x n");
  require_normalized(g);
  return solve_exact(g.structure_matrix(), commutator_image_matrix(g, a));
}

inline bool check_endomorphism(const TwoStepGroup& g, const EndoData& e) {
  if (e.A.rows() != g.n() || e.A.cols() != g.n() || e.B.rows() != g.m() ||
      e.B.cols() != g.n() || e.D.rows() != g.m() || e.D.cols() != g.m())
    throw dimension_error("check_endomorphism: matrix dimensions do not match group");
  return e.D * g.structure_matrix() == commutator_image_matrix(g, e.A);
}

inline bool is_automorphism(const TwoStepGroup& g, const EndoData& e) {
  if (!check_endomorphism(g, e)) return false;
  Int d = det(e.A);
  return d == 1 || d == -1;
}

// Build an EndoData from (A, B), deriving D; nullopt when no endomorphism
// with x-part A exists.
inline std::optional<EndoData> make_endo(const TwoStepGroup& g, IntMatrix a, IntMatrix b) {
  auto d = solve_induced_center_map(g, a);
  if (!d) return std::nullopt;
  EndoData e{std::move(a), std::move(b), std::move(*d), true};
  return e;
}

inline EndoData identity_endo(const TwoStepGroup& g) {
  EndoData e{IntMatrix::identity(g.n()), IntMatrix(g.m(), g.n()), IntMatrix::identity(g.m()), true};
  return e;
}

inline void require_verified(const EndoData& e) {
  if (!e.verified) throw verification_error("endomorphism data has not been verified");
}

inline EndoData verify(const TwoStepGroup& g, EndoData e) {
  if (!check_endomorphism(g, e)) throw verification_error("matrices do not define an endomorphism");
  e.verified = true;
  return e;
}

// phi(x^a z^u) = prod_i phi(x_i)^{a_i} * z^{D u}, factors in ascending index order
inline GroupElement apply(const TwoStepGroup& g, const EndoData& e, const GroupElement& p) {
  require_verified(e);
  GroupElement r = g.identity();
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (p.a[i] == 0) continue;
    GroupElement im{e.A.col(i), e.B.col(i)};
    r = multiply(g, r, power(g, im, p.a[i]));
  }
  std::vector<Int> zu = e.D.mul_vec(p.u);
  for (std::size_t k = 0; k < g.m(); ++k) r.u[k] += zu[k];
  return r;
}

// g |-> e1(e2(g))
inline EndoData compose(const TwoStepGroup& g, const EndoData& e1, const EndoData& e2) {
  require_verified(e1);
  require_verified(e2);
  EndoData r;
  r.A = e1.A * e2.A;
  r.D = e1.D * e2.D;
  r.B = IntMatrix(g.m(), g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    GroupElement im = apply(g, e1, GroupElement{e2.A.col(i), e2.B.col(i)});
    for (std::size_t k = 0; k < g.m(); ++k) r.B(k, i) = im.u[k];
  }
  r.verified = true;
  return r;
}

inline EndoData invert(const TwoStepGroup& g, const EndoData& e) {
  require_verified(e);
  if (!is_automorphism(g, e)) throw invalid_parameters("invert: not an automorphism");
  EndoData r;
  r.A = inverse_unimodular(e.A);
  r.D = inverse_unimodular(e.D);
  r.B = IntMatrix(g.m(), g.n());
  // choose B' so that e(e'(x_i)) = x_i: D*B' col i = -(z-part of e applied to
  // (A^{-1} e_i, 0))
  for (std::size_t i = 0; i < g.n(); ++i) {
    GroupElement t = apply(g, e, GroupElement{r.A.col(i), std::vector<Int>(g.m(), Int(0))});
    for (auto& v : t.u) v = -v;
    std::vector<Int> bi = r.D.mul_vec(t.u);
    r.B.set_col(i, bi);
  }
  r.verified = true;
  return r;
}

}  // namespace nilspec
