#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "nilspec/errors.hpp"
#include "nilspec/group.hpp"
#include "nilspec/intlin.hpp"
#include "nilspec/morphism.hpp"
#include "nilspec/polynomial.hpp"

namespace nilspec {

struct ReidemeisterResult {
  ExtNat r_phi1 = ExtNat::infinity();
  ExtNat r_phi2 = ExtNat::infinity();
  ExtNat total = ExtNat::infinity();
};

inline ReidemeisterResult reidemeister_number(const TwoStepGroup& g, const EndoData& e) {
  require_normalized(g);
  require_verified(e);
  if (!is_automorphism(g, e))
    throw invalid_parameters("reidemeister_number: not an automorphism");
  ReidemeisterResult r;
  r.r_phi1 = ext_abs(det(IntMatrix::identity(g.n()) - e.A));
  r.r_phi2 = ext_abs(det(IntMatrix::identity(g.m()) - e.D));
  r.total = r.r_phi1 * r.r_phi2;
  return r;
}

inline bool is_infinite(const TwoStepGroup& g, const EndoData& e) {
  return reidemeister_number(g, e).total.is_infinite();
}

inline bool is_hyperbolic(const TwoStepGroup& g, const EndoData& e) {
  require_verified(e);
  if (!is_automorphism(g, e)) throw invalid_parameters("is_hyperbolic: not an automorphism");
  return !has_root_on_unit_circle(charpoly(e.A)) && !has_root_on_unit_circle(charpoly(e.D));
}

// R computed over the series G > Z(G) > 1: product of |det(Id - induced map)|
// on Z(G) (in the center_basis coordinates) and on G/Z(G).
inline ExtNat reidemeister_via_center_series(const TwoStepGroup& g, const EndoData& e) {
  require_normalized(g);
  require_verified(e);
  if (!is_automorphism(g, e))
    throw invalid_parameters("reidemeister_via_center_series: not an automorphism");
  const std::size_t n = g.n(), m = g.m();

  // central x-combinations: kernel of the commutator pairing
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
  IntMatrix ker = kernel_basis(pairing);  // n x t
  const std::size_t t = ker.cols();

  // coordinates on Z(G) with basis (z_1..z_m, w_1..w_t), w_j the kernel columns:
  // an element (a, u) of the center decomposes as prod w_j^{c_j} * z^{u - s(c)}
  auto center_coords = [&](const GroupElement& el) {
    std::vector<Int> coords(m + t, Int(0));
    std::vector<Int> c(t, Int(0));
    if (t > 0) {
      auto sol = solve_exact(ker.transpose(), [&] {
        IntMatrix row(1, n);
        for (std::size_t i = 0; i < n; ++i) row(0, i) = el.a[i];
        return row;
      }());
      if (!sol) throw invalid_parameters("element does not lie in the center lattice");
      for (std::size_t j = 0; j < t; ++j) c[j] = (*sol)(0, j);
    }
    GroupElement acc = g.identity();
    for (std::size_t j = 0; j < t; ++j) {
      GroupElement wj{ker.col(j), std::vector<Int>(m, Int(0))};
      acc = multiply(g, acc, power(g, wj, c[j]));
    }
    for (std::size_t k = 0; k < m; ++k) coords[k] = el.u[k] - acc.u[k];
    for (std::size_t j = 0; j < t; ++j) coords[m + j] = c[j];
    return coords;
  };

  IntMatrix mz(m + t, m + t);
  for (std::size_t k = 0; k < m; ++k)
    mz.set_col(k, center_coords(apply(g, e, g.z_generator(k))));
  for (std::size_t j = 0; j < t; ++j) {
    GroupElement wj{ker.col(j), std::vector<Int>(m, Int(0))};
    mz.set_col(m + j, center_coords(apply(g, e, wj)));
  }

  // induced map on G/Z(G) = Z^n modulo the (saturated) kernel lattice
  ExtNat r_quot = ExtNat::finite(Int(1));
  if (t < n) {
    SNFResult s = smith_normal_form(ker);  // U*ker*V diagonal with unit divisors
    IntMatrix uinv = inverse_unimodular(s.U);
    IntMatrix conj = s.U * e.A * uinv;  // block triangular: kernel span is A-invariant
    IntMatrix abar(n - t, n - t);
    for (std::size_t i = 0; i < n - t; ++i)
      for (std::size_t j = 0; j < n - t; ++j) abar(i, j) = conj(t + i, t + j);
    r_quot = ext_abs(det(IntMatrix::identity(n - t) - abar));
  }

  ExtNat r_center = ext_abs(det(IntMatrix::identity(m + t) - mz));
  return r_center * r_quot;
}

struct SpectrumSample {
  long height = 0;
  unsigned long long candidates_scanned = 0;
  unsigned long long automorphisms_found = 0;
  bool truncated = false;
  std::vector<Int> finite_values;        // sorted, deduplicated
  std::map<Int, EndoData> witnesses;     // first witness per value
};

namespace detail {

struct SpectrumWorkerState {
  unsigned long long scanned = 0;
  unsigned long long auts = 0;
  std::map<Int, EndoData> witnesses;
  bool truncated = false;
};

// partial rows of a unimodular matrix form a primitive sublattice: all SNF
// divisors of the stacked rows must be 1
inline bool rows_primitive(const IntMatrix& rows) {
  SNFResult s = smith_normal_form(rows);
  if (s.rank() != rows.rows()) return false;
  for (std::size_t i = 0; i < rows.rows(); ++i)
    if (s.divisors[i] != 1) return false;
  return true;
}

inline void spectrum_scan_rows(const TwoStepGroup& g, const IntMatrix& cmat,
                               const SNFResult& csnf, long height,
                               std::optional<unsigned long long> limit, IntMatrix& a,
                               std::size_t row, SpectrumWorkerState& st) {
  const std::size_t n = g.n();
  if (st.truncated) return;
  if (row == n) {
    ++st.scanned;
    if (limit && st.scanned > *limit) {
      st.truncated = true;
      return;
    }
    Int d = det(a);
    if (d != 1 && d != -1) return;
    // solve the induced center map against the precomputed SNF of C
    IntMatrix ma = commutator_image_matrix(g, a);
    IntMatrix w = ma * csnf.V;
    const std::size_t m = g.m();
    for (std::size_t j = m; j < w.cols(); ++j)
      for (std::size_t i = 0; i < m; ++i)
        if (w(i, j) != 0) return;
    IntMatrix e(m, m);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        if (w(i, j) % csnf.divisors[j] != 0) return;
        e(i, j) = w(i, j) / csnf.divisors[j];
      }
    IntMatrix dm = e * csnf.U;
    ++st.auts;
    Int r1 = det(IntMatrix::identity(n) - a);
    if (r1 == 0) return;
    Int r2 = det(IntMatrix::identity(m) - dm);
    if (r2 == 0) return;
    Int value = abs(r1 * r2);
    if (st.witnesses.find(value) == st.witnesses.end()) {
      EndoData ed{a, IntMatrix(m, n), dm, true};
      st.witnesses.emplace(std::move(value), std::move(ed));
    }
    return;
  }
  // odometer over the entries of this row
  std::vector<long> vals(n, -height);
  for (;;) {
    Int gc(0);
    for (std::size_t j = 0; j < n; ++j) gc = gcd(gc, Int(vals[j]));
    if (gc == 1) {
      for (std::size_t j = 0; j < n; ++j) a(row, j) = vals[j];
      bool ok = true;
      if (row + 1 < n) {
        // the final row is vetted by the determinant test instead
        IntMatrix prefix(row + 1, n);
        for (std::size_t i = 0; i <= row; ++i)
          for (std::size_t j = 0; j < n; ++j) prefix(i, j) = a(i, j);
        ok = rows_primitive(prefix);
      }
      if (ok) spectrum_scan_rows(g, cmat, csnf, height, limit, a, row + 1, st);
      if (st.truncated) return;
    }
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (vals[k] < height) {
        ++vals[k];
        break;
      }
      vals[k] = -height;
      if (k == 0) return;
    }
  }
}

}  // namespace detail

// Exhaustive bounded search: all A with entries in [-height, height], pruned
// by primitivity of partial row lattices, then |det A| = 1, then the D-solve.
inline SpectrumSample spectrum_search(const TwoStepGroup& g, long height,
                                      std::optional<unsigned long long> limit = std::nullopt,
                                      unsigned threads = 1) {
  require_normalized(g);
  if (height < 1) throw invalid_parameters("spectrum_search: height must be >= 1");
  const std::size_t n = g.n();
  IntMatrix cmat = g.structure_matrix();
  SNFResult csnf = smith_normal_form(cmat);

  SpectrumSample out;
  out.height = height;

  // first-row candidates, in odometer order
  std::vector<std::vector<long>> first_rows;
  {
    std::vector<long> vals(n, -height);
    for (;;) {
      Int gc(0);
      for (std::size_t j = 0; j < n; ++j) gc = gcd(gc, Int(vals[j]));
      if (gc == 1) first_rows.push_back(vals);
      std::size_t k = n;
      bool done = false;
      while (k > 0) {
        --k;
        if (vals[k] < height) {
          ++vals[k];
          break;
        }
        vals[k] = -height;
        if (k == 0) done = true;
      }
      if (done) break;
    }
  }

  auto run_range = [&](std::size_t lo, std::size_t hi, detail::SpectrumWorkerState& st,
                       std::optional<unsigned long long> lim) {
    IntMatrix a(n, n);
    for (std::size_t idx = lo; idx < hi && !st.truncated; ++idx) {
      for (std::size_t j = 0; j < n; ++j) a(0, j) = first_rows[idx][j];
      detail::spectrum_scan_rows(g, cmat, csnf, height, lim, a, 1, st);
    }
  };

  if (threads <= 1 || first_rows.size() < 2) {
    detail::SpectrumWorkerState st;
    run_range(0, first_rows.size(), st, limit);
    out.candidates_scanned = st.scanned;
    out.automorphisms_found = st.auts;
    out.truncated = st.truncated;
    out.witnesses = std::move(st.witnesses);
  } else {
    // workers own contiguous first-row ranges; merging in range order keeps the
    // first-found witness deterministic (the limit is only honored serially)
    if (limit) {
      detail::SpectrumWorkerState st;
      run_range(0, first_rows.size(), st, limit);
      out.candidates_scanned = st.scanned;
      out.automorphisms_found = st.auts;
      out.truncated = st.truncated;
      out.witnesses = std::move(st.witnesses);
    } else {
      const std::size_t nw = std::min<std::size_t>(threads, first_rows.size());
      std::vector<detail::SpectrumWorkerState> states(nw);
      std::vector<std::thread> pool;
      const std::size_t chunk = (first_rows.size() + nw - 1) / nw;
      for (std::size_t w = 0; w < nw; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(first_rows.size(), lo + chunk);
        pool.emplace_back([&, lo, hi, w] { run_range(lo, hi, states[w], std::nullopt); });
      }
      for (auto& th : pool) th.join();
      for (auto& st : states) {
        out.candidates_scanned += st.scanned;
        out.automorphisms_found += st.auts;
        for (auto& [v, wit] : st.witnesses)
          if (out.witnesses.find(v) == out.witnesses.end()) out.witnesses.emplace(v, std::move(wit));
      }
    }
  }

  for (const auto& [v, wit] : out.witnesses) out.finite_values.push_back(v);
  return out;
}

}  // namespace nilspec
