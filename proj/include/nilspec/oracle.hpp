#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "nilspec/errors.hpp"
#include "nilspec/group.hpp"
#include "nilspec/intlin.hpp"
#include "nilspec/morphism.hpp"
#include "nilspec/reidemeister.hpp"

namespace nilspec {

inline constexpr std::uint64_t kDefaultOracleBudget = 1000000;

namespace detail {

struct DisjointSet {
  std::vector<std::uint32_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  }
  std::size_t count_roots() {
    std::size_t c = 0;
    for (std::uint32_t i = 0; i < parent.size(); ++i)
      if (find(i) == i) ++c;
    return c;
  }
};

inline long mod_reduce(const Int& v, long n) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), Int(n).get_mpz_t());
  return r.get_si();
}

}  // namespace detail

// Orbits of (Z/M)^k under x -> x + (I - A)c over all c, counted by union-find.
inline std::size_t abelian_twisted_classes(const IntMatrix& a, long mod,
                                           std::uint64_t budget = kDefaultOracleBudget) {
  if (a.rows() != a.cols()) throw dimension_error("abelian_twisted_classes: A must be square");
  if (mod < 2) throw invalid_parameters("abelian_twisted_classes: modulus must be >= 2");
  const std::size_t k = a.rows();
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < k; ++i) {
    size *= static_cast<std::uint64_t>(mod);
    if (size > budget) throw budget_error("abelian_twisted_classes: state space exceeds budget");
  }
  // columns of (I - A) mod M generate the translations
  std::vector<std::vector<long>> gens;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<long> t(k);
    for (std::size_t i = 0; i < k; ++i) {
      Int v = (i == j ? Int(1) : Int(0)) - a(i, j);
      t[i] = detail::mod_reduce(v, mod);
    }
    gens.push_back(std::move(t));
  }
  detail::DisjointSet ds(static_cast<std::size_t>(size));
  std::vector<long> x(k, 0);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    for (const auto& t : gens) {
      std::uint64_t target = 0, base = 1;
      for (std::size_t i = 0; i < k; ++i) {
        target += static_cast<std::uint64_t>((x[i] + t[i]) % mod) * base;
        base *= static_cast<std::uint64_t>(mod);
      }
      ds.unite(static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(target));
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (++x[i] < mod) break;
      x[i] = 0;
    }
  }
  return ds.count_roots();
}

// Pi gcd(d_i, M) over the SNF divisors of (I - A); the closed form the
// union-find count must reproduce.
inline Int abelian_twisted_classes_formula(const IntMatrix& a, long mod) {
  if (a.rows() != a.cols()) throw dimension_error("A must be square");
  SNFResult s = smith_normal_form(IntMatrix::identity(a.rows()) - a);
  Int prod(1);
  for (const auto& d : s.divisors) prod *= d == 0 ? Int(mod) : gcd(d, Int(mod));
  return prod;
}

// Finite 2-step quotient G_N: normal-form coordinates reduced mod an odd N.
class FiniteQuotient {
 public:
  FiniteQuotient(const TwoStepGroup& g, long n, std::uint64_t budget = kDefaultOracleBudget)
      : g_(g), mod_(n) {
    if (n < 3 || n % 2 == 0)
      throw invalid_parameters("finite quotient: modulus must be odd and >= 3");
    size_ = 1;
    for (std::size_t i = 0; i < g.n() + g.m(); ++i) {
      size_ *= static_cast<std::uint64_t>(n);
      if (size_ > budget) throw budget_error("finite quotient: group order exceeds budget");
    }
    comm_.assign(g.n() * g.n(), std::vector<long>(g.m(), 0));
    for (std::size_t i = 0; i < g.n(); ++i)
      for (std::size_t j = i + 1; j < g.n(); ++j) {
        const auto& c = g.commutator_exponents(i, j);
        for (std::size_t k = 0; k < g.m(); ++k) {
          long v = detail::mod_reduce(c[k], n);
          comm_[i * g.n() + j][k] = v;
          comm_[j * g.n() + i][k] = (n - v) % n;
        }
      }
  }

  long modulus() const { return mod_; }
  std::uint64_t order() const { return size_; }
  std::size_t dim() const { return g_.n() + g_.m(); }

  using Coords = std::vector<long>;  // x-part then z-part, entries in [0, N)

  Coords identity() const { return Coords(dim(), 0); }

  Coords multiply(const Coords& p, const Coords& q) const {
    const std::size_t n = g_.n(), m = g_.m();
    Coords r(dim());
    for (std::size_t i = 0; i < n; ++i) r[i] = (p[i] + q[i]) % mod_;
    for (std::size_t k = 0; k < m; ++k) r[n + k] = (p[n + k] + q[n + k]) % mod_;
    for (std::size_t j = 0; j < n; ++j) {
      if (q[j] == 0) continue;
      for (std::size_t i = j + 1; i < n; ++i) {
        if (p[i] == 0) continue;
        long f = (p[i] * q[j]) % mod_;
        const auto& cij = comm_[j * n + i];
        for (std::size_t k = 0; k < m; ++k)
          r[n + k] = (r[n + k] + (mod_ - (f * cij[k]) % mod_)) % mod_;
      }
    }
    return r;
  }

  Coords inverse(const Coords& p) const {
    const std::size_t n = g_.n(), m = g_.m();
    Coords r(dim());
    for (std::size_t i = 0; i < n; ++i) r[i] = (mod_ - p[i]) % mod_;
    // omega(a, a) correction
    std::vector<long> w(m, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (p[j] == 0) continue;
      for (std::size_t i = j + 1; i < n; ++i) {
        if (p[i] == 0) continue;
        long f = (p[i] * p[j]) % mod_;
        const auto& cij = comm_[j * n + i];
        for (std::size_t k = 0; k < m; ++k) w[k] = (w[k] + (mod_ - (f * cij[k]) % mod_)) % mod_;
      }
    }
    for (std::size_t k = 0; k < m; ++k) r[n + k] = ((mod_ - p[n + k]) % mod_ + w[k]) % mod_;
    return r;
  }

  std::uint64_t index_of(const Coords& p) const {
    std::uint64_t idx = 0, base = 1;
    for (std::size_t i = 0; i < dim(); ++i) {
      idx += static_cast<std::uint64_t>(p[i]) * base;
      base *= static_cast<std::uint64_t>(mod_);
    }
    return idx;
  }

  Coords coords_at(std::uint64_t idx) const {
    Coords p(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      p[i] = static_cast<long>(idx % static_cast<std::uint64_t>(mod_));
      idx /= static_cast<std::uint64_t>(mod_);
    }
    return p;
  }

  // the endomorphism induced on G_N by reduction of the coordinates
  Coords apply_endo(const EndoData& e, const Coords& p) const {
    const std::size_t n = g_.n(), m = g_.m();
    Coords r = identity();
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] == 0) continue;
      Coords im(dim());
      for (std::size_t t = 0; t < n; ++t) im[t] = detail::mod_reduce(e.A(t, i), mod_);
      for (std::size_t k = 0; k < m; ++k) im[n + k] = detail::mod_reduce(e.B(k, i), mod_);
      r = multiply(r, pow_coords(im, p[i]));
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (p[n + j] == 0) continue;
      for (std::size_t k = 0; k < m; ++k)
        r[n + k] = (r[n + k] + static_cast<long>((static_cast<std::int64_t>(p[n + j]) *
                                                  detail::mod_reduce(e.D(k, j), mod_)) %
                                                 mod_)) %
                   mod_;
    }
    return r;
  }

  Coords pow_coords(const Coords& p, long k) const {
    Coords r = identity();
    for (long i = 0; i < k; ++i) r = multiply(r, p);
    return r;
  }

  // homomorphism property of the induced map on all generator pairs; N odd
  // makes the reduction kernel invariant, so this must hold
  bool induced_map_well_defined(const EndoData& e) const {
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) {
        Coords gi = identity(), gj = identity();
        gi[i] = 1;
        gj[j] = 1;
        Coords lhs = apply_endo(e, multiply(gi, gj));
        Coords rhs = multiply(apply_endo(e, gi), apply_endo(e, gj));
        if (lhs != rhs) return false;
      }
    return true;
  }

 private:
  const TwoStepGroup& g_;
  long mod_;
  std::uint64_t size_;
  std::vector<std::vector<long>> comm_;  // c(i,j) mod N for all ordered pairs
};

struct QuotientCount {
  std::size_t union_find = 0;
  std::size_t burnside = 0;
  bool orbit_sizes_ok = false;
};

// Orbits of x -> c x phi(c)^{-1}: counted by union-find over generator
// conjugators and, independently, by twisted-Burnside averaging.
inline QuotientCount finite_quotient_twisted_classes(const TwoStepGroup& g, const EndoData& e,
                                                     long mod,
                                                     std::uint64_t budget = kDefaultOracleBudget) {
  require_verified(e);
  if (!check_endomorphism(g, e))
    throw verification_error("finite_quotient_twisted_classes: not an endomorphism");
  FiniteQuotient q(g, mod, budget);
  if (!q.induced_map_well_defined(e))
    throw verification_error("finite quotient: induced map failed the homomorphism check");

  const std::uint64_t size = q.order();
  const std::size_t dim = q.dim();

  // precompute phi on the coordinate generators is not enough for the orbit
  // moves; apply_endo is cheap at this scale
  detail::DisjointSet ds(static_cast<std::size_t>(size));
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    FiniteQuotient::Coords x = q.coords_at(idx);
    for (std::size_t gi = 0; gi < dim; ++gi) {
      FiniteQuotient::Coords c = q.identity();
      c[gi] = 1;
      FiniteQuotient::Coords y = q.multiply(q.multiply(c, x), q.inverse(q.apply_endo(e, c)));
      ds.unite(static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(q.index_of(y)));
    }
  }

  QuotientCount out;
  out.union_find = ds.count_roots();

  // orbit sizes must sum to the group order
  {
    std::vector<std::uint64_t> sizes(static_cast<std::size_t>(size), 0);
    std::uint64_t total = 0;
    for (std::uint64_t idx = 0; idx < size; ++idx)
      ++sizes[ds.find(static_cast<std::uint32_t>(idx))];
    for (auto s : sizes) total += s;
    out.orbit_sizes_ok = total == size;
  }

  // twisted Burnside: (1/|G_N|) sum_c |Fix(x -> c x phi(c)^{-1})|. The a-part
  // of the move is the translation by c_a - phi(c)_a, so c contributes only
  // when that vanishes; the u-translation then depends on x_a alone.
  const std::size_t n = g.n(), m = g.m();
  std::uint64_t xa_count = 1, zm_count = 1;
  for (std::size_t i = 0; i < n; ++i) xa_count *= static_cast<std::uint64_t>(mod);
  for (std::size_t k = 0; k < m; ++k) zm_count *= static_cast<std::uint64_t>(mod);

  std::uint64_t fix_total = 0;
  for (std::uint64_t ci = 0; ci < size; ++ci) {
    FiniteQuotient::Coords c = q.coords_at(ci);
    FiniteQuotient::Coords pc = q.apply_endo(e, c);
    bool translates = false;
    for (std::size_t i = 0; i < n; ++i)
      if (c[i] != pc[i]) translates = true;
    if (translates) continue;
    FiniteQuotient::Coords pcinv = q.inverse(pc);
    for (std::uint64_t xi = 0; xi < xa_count; ++xi) {
      FiniteQuotient::Coords x = q.identity();
      std::uint64_t t = xi;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<long>(t % static_cast<std::uint64_t>(mod));
        t /= static_cast<std::uint64_t>(mod);
      }
      FiniteQuotient::Coords y = q.multiply(q.multiply(c, x), pcinv);
      bool fixed = true;
      for (std::size_t i = 0; i < dim && fixed; ++i)
        if (y[i] != x[i]) fixed = false;
      if (fixed) fix_total += zm_count;
    }
  }
  out.burnside = static_cast<std::size_t>(fix_total / size);
  return out;
}

struct StabilizationRow {
  long modulus;
  std::size_t count;
};

struct StabilizationReport {
  std::vector<StabilizationRow> rows;
  ExtNat formula = ExtNat::infinity();  // R(phi) by the determinant formula
};

// Observational table: finite-quotient counts next to the closed-form R(phi).
// No relation between the columns is asserted.
inline StabilizationReport stabilization_report(const TwoStepGroup& g, const EndoData& e,
                                                const std::vector<long>& mods,
                                                std::uint64_t budget = kDefaultOracleBudget) {
  StabilizationReport rep;
  if (is_automorphism(g, e)) rep.formula = reidemeister_number(g, e).total;
  for (long n : mods) {
    QuotientCount qc = finite_quotient_twisted_classes(g, e, n, budget);
    rep.rows.push_back(StabilizationRow{n, qc.union_find});
  }
  return rep;
}

}  // namespace nilspec
