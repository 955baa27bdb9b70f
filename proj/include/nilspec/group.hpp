#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nilspec/errors.hpp"
#include "nilspec/intlin.hpp"

namespace nilspec {

// Normal-form coordinates (a, u) for x_1^{a_1}...x_n^{a_n} z_1^{u_1}...z_m^{u_m}.
struct GroupElement {
  std::vector<Int> a;  // x-exponents
  std::vector<Int> u;  // z-exponents

  bool operator==(const GroupElement& o) const { return a == o.a && u == o.u; }
  bool operator!=(const GroupElement& o) const { return !(*this == o); }
};

// Finitely generated torsion-free 2-step nilpotent group given by commutator
// structure constants: [x_i, x_j] = z^{c(i,j)} for i < j.
class TwoStepGroup {
 public:
  TwoStepGroup(std::size_t n, std::size_t m)
      : n_(n), m_(m), c_(pair_count(n), std::vector<Int>(m, Int(0))) {}

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  static std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }
  std::size_t pair_count() const { return pair_count(n_); }

  // lexicographic index of the pair (i,j), 0-based, i < j
  std::size_t pair_index(std::size_t i, std::size_t j) const {
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }

  std::pair<std::size_t, std::size_t> pair_at(std::size_t idx) const {
    std::size_t i = 0;
    while (idx >= n_ - i - 1) {
      idx -= n_ - i - 1;
      ++i;
    }
    return {i, i + 1 + idx};
  }

  // 0-based generator indices, i < j
  void set_commutator(std::size_t i, std::size_t j, std::vector<Int> z) {
    if (i >= j || j >= n_ || z.size() != m_)
      throw invalid_parameters("set_commutator: bad pair or z vector");
    bool nonzero = false;
    for (const auto& v : z)
      if (v != 0) nonzero = true;
    std::size_t idx = pair_index(i, j);
    if (nonzero) {
      bool seen = false;
      for (auto p : order_)
        if (p == idx) seen = true;
      if (!seen) order_.push_back(idx);
    }
    c_[idx] = std::move(z);
  }

  const std::vector<Int>& commutator_exponents(std::size_t i, std::size_t j) const {
    return c_[pair_index(i, j)];
  }

  // insertion order of the nonzero pairs, for file round-trips
  const std::vector<std::size_t>& pair_order() const { return order_; }

  // cocycle: omega(a, b) = sum_{i>j} a_i b_j c(i,j) with c(i,j) := -c(j,i)
  std::vector<Int> omega(const std::vector<Int>& a, const std::vector<Int>& b) const {
    if (a.size() != n_ || b.size() != n_) throw dimension_error("omega: bad vector length");
    std::vector<Int> w(m_, Int(0));
    for (std::size_t j = 0; j < n_; ++j) {
      if (b[j] == 0) continue;
      for (std::size_t i = j + 1; i < n_; ++i) {
        if (a[i] == 0) continue;
        Int f = a[i] * b[j];
        const auto& cij = c_[pair_index(j, i)];
        for (std::size_t k = 0; k < m_; ++k) w[k] -= f * cij[k];
      }
    }
    return w;
  }

  // commutator pairing: beta(a, b) = omega(a, b) - omega(b, a)
  std::vector<Int> beta(const std::vector<Int>& a, const std::vector<Int>& b) const {
    std::vector<Int> w = omega(a, b);
    std::vector<Int> v = omega(b, a);
    for (std::size_t k = 0; k < m_; ++k) w[k] -= v[k];
    return w;
  }

  // m x n(n-1)/2 structure matrix, columns in lexicographic pair order
  IntMatrix structure_matrix() const {
    IntMatrix c(m_, pair_count());
    for (std::size_t p = 0; p < pair_count(); ++p)
      for (std::size_t k = 0; k < m_; ++k) c(k, p) = c_[p][k];
    return c;
  }

  GroupElement identity() const {
    return GroupElement{std::vector<Int>(n_, Int(0)), std::vector<Int>(m_, Int(0))};
  }

  GroupElement x_generator(std::size_t i) const {
    GroupElement g = identity();
    g.a[i] = 1;
    return g;
  }

  GroupElement z_generator(std::size_t k) const {
    GroupElement g = identity();
    g.u[k] = 1;
    return g;
  }

  GroupElement element(std::vector<Int> a, std::vector<Int> u) const {
    if (a.size() != n_ || u.size() != m_) throw dimension_error("element: bad coordinate length");
    return GroupElement{std::move(a), std::move(u)};
  }

 private:
  std::size_t n_, m_;
  std::vector<std::vector<Int>> c_;
  std::vector<std::size_t> order_;
};

inline GroupElement multiply(const TwoStepGroup& g, const GroupElement& p, const GroupElement& q) {
  if (p.a.size() != g.n() || q.a.size() != g.n() || p.u.size() != g.m() || q.u.size() != g.m())
    throw dimension_error("multiply: element dimensions do not match group");
  GroupElement r;
  r.a.resize(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) r.a[i] = p.a[i] + q.a[i];
  r.u = g.omega(p.a, q.a);
  for (std::size_t k = 0; k < g.m(); ++k) r.u[k] += p.u[k] + q.u[k];
  return r;
}

inline GroupElement inverse(const TwoStepGroup& g, const GroupElement& p) {
  GroupElement r;
  r.a.resize(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) r.a[i] = -p.a[i];
  r.u = g.omega(p.a, p.a);
  for (std::size_t k = 0; k < g.m(); ++k) r.u[k] -= p.u[k];
  return r;
}

// (a,u)^k = (ka, ku + C(k,2) omega(a,a)); valid for all k in Z
inline GroupElement power(const TwoStepGroup& g, const GroupElement& p, const Int& k) {
  GroupElement r;
  r.a.resize(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) r.a[i] = k * p.a[i];
  Int binom = k * (k - 1) / 2;
  r.u = g.omega(p.a, p.a);
  for (std::size_t j = 0; j < g.m(); ++j) r.u[j] = k * p.u[j] + binom * r.u[j];
  return r;
}

inline GroupElement commutator(const TwoStepGroup& g, const GroupElement& p, const GroupElement& q) {
  GroupElement r = g.identity();
  r.u = g.beta(p.a, q.a);
  return r;
}

// Basis of Z(G): the z-generators followed by central x-combinations (integer
// kernel of a |-> (beta(a, e_1), ..., beta(a, e_n))).
inline std::vector<GroupElement> center_basis(const TwoStepGroup& g) {
  const std::size_t n = g.n(), m = g.m();
  std::vector<GroupElement> basis;
  for (std::size_t k = 0; k < m; ++k) basis.push_back(g.z_generator(k));
  if (n == 0) return basis;
  IntMatrix pairing(m * n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Int> ei(n, Int(0));
    ei[i] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Int> ej(n, Int(0));
      ej[j] = 1;
      std::vector<Int> b = g.beta(ei, ej);
      for (std::size_t k = 0; k < m; ++k) pairing(j * m + k, i) = b[k];
    }
  }
  IntMatrix ker = kernel_basis(pairing);
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    GroupElement e = g.identity();
    for (std::size_t i = 0; i < n; ++i) e.a[i] = ker(i, j);
    basis.push_back(std::move(e));
  }
  return basis;
}

struct GroupInvariants {
  std::size_t hirsch = 0;
  std::size_t gamma2_rank = 0;
  std::size_t class_n = 0;  // rank of G / sqrt(gamma_2)
  std::size_t class_m = 0;  // rank of sqrt(gamma_2)
  std::vector<Int> snf_divisors;  // of the structure matrix
  std::optional<Int> delta;
  std::optional<Int> lambda;
  std::size_t center_rank = 0;
};

inline GroupInvariants invariants(const TwoStepGroup& g) {
  GroupInvariants inv;
  inv.hirsch = g.n() + g.m();
  SNFResult snf = smith_normal_form(g.structure_matrix());
  inv.gamma2_rank = snf.rank();
  inv.snf_divisors.assign(snf.divisors.begin(), snf.divisors.begin() + inv.gamma2_rank);
  inv.class_m = inv.gamma2_rank;
  inv.class_n = g.n() + (g.m() - inv.gamma2_rank);
  if (inv.gamma2_rank == 2 && g.m() == 2) {
    inv.delta = inv.snf_divisors[0];
    inv.lambda = inv.snf_divisors[1] / inv.snf_divisors[0];
  }
  inv.center_rank = center_basis(g).size();
  return inv;
}

// structure matrix has full rank m, i.e. sqrt(gamma_2) = <z_1,...,z_m>
inline bool is_normalized(const TwoStepGroup& g) {
  return smith_normal_form(g.structure_matrix()).rank() == g.m();
}

inline void require_normalized(const TwoStepGroup& g) {
  if (!is_normalized(g))
    throw normalization_error("group is not I(n,m)-normalized (structure matrix rank < m)");
}

}  // namespace nilspec
