#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nilspec/errors.hpp"
#include "nilspec/group.hpp"
#include "nilspec/intlin.hpp"

namespace nilspec {

// aX^2 + bXY + cY^2
struct BinaryQuadraticForm {
  Int a, b, c;

  bool operator==(const BinaryQuadraticForm& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator!=(const BinaryQuadraticForm& o) const { return !(*this == o); }

  Int eval(const Int& x, const Int& y) const { return a * x * x + b * x * y + c * y * y; }

  // form composed with the substitution (X, Y) -> (pX + qY, rX + sY)
  BinaryQuadraticForm substitute(const Int& p, const Int& q, const Int& r, const Int& s) const {
    BinaryQuadraticForm f;
    f.a = a * p * p + b * p * r + c * r * r;
    f.b = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
    f.c = a * q * q + b * q * s + c * s * s;
    return f;
  }

  BinaryQuadraticForm negate() const { return {-a, -b, -c}; }
};

// intermediate I(3,2) presentation:
// [x1,x2] = z1^alpha z2^beta, [x1,x3] = z2^t13, [x2,x3] = z2^t23
struct I32Intermediate {
  Int alpha, beta, t13, t23;
};

// unimodular change of generators; columns express the new generators in the
// old ones
struct GeneratorChange {
  IntMatrix X;  // n x n
  IntMatrix Z;  // m x m
};

struct I32Reduction {
  Int alpha, beta, gamma;
  std::vector<GeneratorChange> trail;
};

// apply a generator change to a structure-constant table: the new commutator
// exponents are Z^{-1} * beta_old(X e_i, X e_j)
inline TwoStepGroup change_generators(const TwoStepGroup& g, const GeneratorChange& ch) {
  IntMatrix zinv = inverse_unimodular(ch.Z);
  TwoStepGroup h(g.n(), g.m());
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = i + 1; j < g.n(); ++j) {
      std::vector<Int> c = zinv.mul_vec(g.beta(ch.X.col(i), ch.X.col(j)));
      bool nz = false;
      for (const auto& v : c)
        if (v != 0) nz = true;
      if (nz) h.set_commutator(i, j, std::move(c));
    }
  return h;
}

// Euclid's algorithm on the two z2-exponents of the intermediate presentation,
// performed as alternating generator substitutions; the surviving exponent is
// gcd(t13, t23), moved onto [x1,x3] and made positive.
inline I32Reduction reduce_i32(const I32Intermediate& p) {
  if (p.alpha == 0) throw invalid_parameters("reduce_i32: alpha must be nonzero");
  if (p.t13 == 0 && p.t23 == 0)
    throw invalid_parameters("reduce_i32: t13 = t23 = 0 means the group is not in I(3,2)");

  Int alpha = p.alpha, beta = p.beta, t13 = p.t13, t23 = p.t23;
  I32Reduction out;

  auto push_x = [&](IntMatrix x) {
    out.trail.push_back(GeneratorChange{std::move(x), IntMatrix::identity(2)});
  };
  auto flip_z2 = [&] {
    IntMatrix z = IntMatrix::identity(2);
    z(1, 1) = -1;
    out.trail.push_back(GeneratorChange{IntMatrix::identity(3), std::move(z)});
    beta = -beta;
    t13 = -t13;
    t23 = -t23;
  };

  // normalize the leading exponent positive by inverting z2
  if (t13 < 0 || (t13 == 0 && t23 < 0)) flip_z2();

  while (t13 != 0 && t23 != 0) {
    // x2' := x1^k x2 with t23 + k*t13 = t23 mod t13
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), t23.get_mpz_t(), t13.get_mpz_t());
    Int k = (r - t23) / t13;
    IntMatrix x = IntMatrix::identity(3);
    x(0, 1) = k;
    push_x(std::move(x));
    t23 = r;
    if (t23 == 0) break;
    // x1' := x2^l x1 with t13 + l*t23 = t13 mod t23
    mpz_fdiv_r(r.get_mpz_t(), t13.get_mpz_t(), t23.get_mpz_t());
    Int l = (r - t13) / t23;
    IntMatrix y = IntMatrix::identity(3);
    y(1, 0) = l;
    push_x(std::move(y));
    t13 = r;
  }

  if (t13 == 0) {
    // surviving relator sits on [x2,x3]: x1' := x2, x2' := x1^{-1}
    IntMatrix x(3, 3);
    x(1, 0) = 1;
    x(0, 1) = -1;
    x(2, 2) = 1;
    push_x(std::move(x));
    t13 = t23;
    t23 = 0;
  }
  if (t13 < 0) flip_z2();

  out.alpha = alpha;
  out.beta = beta;
  out.gamma = t13;
  return out;
}

// I(n,1) classification: positive skew divisors d1 | ... | dr and the number
// of free Z-factors.
struct In1Class {
  std::vector<Int> d;
  std::size_t free_rank = 0;
};

inline In1Class classify_in1(const TwoStepGroup& g) {
  if (g.m() != 1) throw invalid_parameters("classify_in1: group must have m = 1");
  SNFResult snf = smith_normal_form(g.structure_matrix());
  if (snf.rank() != 1) throw invalid_parameters("classify_in1: gamma2 rank must be 1");
  const std::size_t n = g.n();
  IntMatrix pairing(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      pairing(i, j) = g.commutator_exponents(i, j)[0];
      pairing(j, i) = -pairing(i, j);
    }
  SkewNormalForm f = skew_normal_form(pairing);
  In1Class out;
  out.d = f.blocks;
  out.free_rank = n - 2 * f.blocks.size();
  return out;
}

// Psi_k(X,Y) = Phi((k*lambda + 1)X + kY, lambda*X + Y)
inline BinaryQuadraticForm psi_k(const BinaryQuadraticForm& phi, const Int& lambda, const Int& k) {
  return phi.substitute(k * lambda + 1, k, lambda, Int(1));
}

// minimal |k0| (positive first) with k0*(a*k0 + b) != 0; requires c = 0 and
// (a, b) != (0, 0)
inline Int choose_k0(const BinaryQuadraticForm& phi) {
  if (phi.c != 0) throw invalid_parameters("choose_k0: requires c = 0");
  if (phi.a == 0 && phi.b == 0) throw invalid_parameters("choose_k0: requires (a,b) != (0,0)");
  for (Int mag(1);; ++mag) {
    for (int s = 0; s < 2; ++s) {
      Int k = s == 0 ? mag : Int(-mag);
      if (k * (phi.a * k + phi.b) != 0) return k;
    }
  }
}

// witness of lambda-equivalence: Psi(X,Y) = sign * Phi(aX+bY, lambda*c X + dY)
struct BqfWitness {
  Int a, b, c, d;  // the matrix [[a, b], [lambda*c, d]], |det| = 1
  int sign = 1;
};

// bounded search over the constrained matrix shape; absence within the bound
// is a semi-decision, never a proof of inequivalence
inline std::optional<BqfWitness> bqf_lambda_equivalent(const BinaryQuadraticForm& phi,
                                                       const BinaryQuadraticForm& psi,
                                                       const Int& lambda, long bound) {
  if (lambda == 0) throw invalid_parameters("bqf_lambda_equivalent: lambda must be nonzero");
  if (bound < 1) throw invalid_parameters("bqf_lambda_equivalent: bound must be >= 1");
  // increasing max-entry shells, row-major within a shell, +Phi before -Phi
  for (long shell = 0; shell <= bound; ++shell) {
    for (long a = -shell; a <= shell; ++a)
      for (long b = -shell; b <= shell; ++b)
        for (long c = -shell; c <= shell; ++c)
          for (long d = -shell; d <= shell; ++d) {
            if (std::max(std::max(labs(a), labs(b)), std::max(labs(c), labs(d))) != shell)
              continue;  // interior of the shell was scanned earlier
            Int ia(a), ib(b), ic(c), id(d);
            Int dt = ia * id - lambda * ic * ib;
            if (dt != 1 && dt != -1) continue;
            BinaryQuadraticForm s = phi.substitute(ia, ib, lambda * ic, id);
            if (s == psi) return BqfWitness{ia, ib, ic, id, 1};
            if (s.negate() == psi) return BqfWitness{ia, ib, ic, id, -1};
          }
  }
  return std::nullopt;
}

enum class IsoVerdict { Isomorphic, NotIsomorphic, NotFoundWithinBound };

struct I42IsoResult {
  IsoVerdict verdict;
  Int delta, lambda;                 // shared invariants when they match
  std::optional<BqfWitness> witness;  // present iff Isomorphic
};

// recover Phi from a structure matrix in G(delta, lambda, Phi) template order
inline std::optional<BinaryQuadraticForm> recover_i42_form(const TwoStepGroup& g, const Int& delta,
                                                           const Int& lambda) {
  if (g.n() != 4 || g.m() != 2) return std::nullopt;
  auto zero = [&](std::size_t i, std::size_t j) {
    const auto& c = g.commutator_exponents(i, j);
    return c[0] == 0 && c[1] == 0;
  };
  if (!zero(0, 1) || !zero(2, 3)) return std::nullopt;
  const auto& c13 = g.commutator_exponents(0, 2);
  const auto& c14 = g.commutator_exponents(0, 3);
  const auto& c23 = g.commutator_exponents(1, 2);
  const auto& c24 = g.commutator_exponents(1, 3);
  Int dl = delta * lambda;
  if (c13[0] != 0 || c13[1] != dl) return std::nullopt;
  if (c14[0] != delta || c14[1] != 0) return std::nullopt;
  if (c23[0] % delta != 0 || c23[1] % dl != 0) return std::nullopt;
  if (c24[0] != 0 || c24[1] % dl != 0) return std::nullopt;
  BinaryQuadraticForm f;
  f.a = c23[0] / delta;
  f.b = c23[1] / dl;
  f.c = -c24[1] / dl;
  return f;
}

// Isomorphism test for template-form I(4,2) groups: (delta, lambda) mismatch is
// decisive; otherwise lambda-equivalence of the recovered forms is searched up
// to the bound.
inline I42IsoResult i42_isomorphic(const TwoStepGroup& g, const TwoStepGroup& h, long bound) {
  GroupInvariants ig = invariants(g);
  GroupInvariants ih = invariants(h);
  if (ig.class_n != 4 || ig.class_m != 2 || !ig.delta || ih.class_n != 4 || ih.class_m != 2 ||
      !ih.delta)
    throw invalid_parameters("i42_isomorphic: both groups must be normalized of class (4,2)");
  if (*ig.delta != *ih.delta || *ig.lambda != *ih.lambda)
    return I42IsoResult{IsoVerdict::NotIsomorphic, Int(0), Int(0), std::nullopt};
  auto fg = recover_i42_form(g, *ig.delta, *ig.lambda);
  auto fh = recover_i42_form(h, *ih.delta, *ih.lambda);
  if (!fg || !fh)
    throw invalid_parameters("i42_isomorphic: group is not in G(delta,lambda,Phi) template order");
  auto w = bqf_lambda_equivalent(*fg, *fh, *ig.lambda, bound);
  if (w) return I42IsoResult{IsoVerdict::Isomorphic, *ig.delta, *ig.lambda, w};
  return I42IsoResult{IsoVerdict::NotFoundWithinBound, *ig.delta, *ig.lambda, std::nullopt};
}

}  // namespace nilspec
