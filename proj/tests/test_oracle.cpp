#include <catch_amalgamated.hpp>

#include <random>

#include "nilspec/families.hpp"
#include "nilspec/oracle.hpp"

using namespace nilspec;

namespace {

std::mt19937 rng(20240823);

TwoStepGroup heisenberg() {
  TwoStepGroup g(2, 1);
  g.set_commutator(0, 1, {Int(1)});
  return g;
}

}  // namespace

TEST_CASE("abelian_twisted_classes: fixed cases") {
  // x -> -x on Z/4: translations by 2c, orbits {0,2} and {1,3}
  IntMatrix neg = IntMatrix::from_rows({{-1}});
  CHECK(abelian_twisted_classes(neg, 4) == 2);
  CHECK(abelian_twisted_classes_formula(neg, 4) == 2);
  // identity map: no translations at all
  CHECK(abelian_twisted_classes(IntMatrix::identity(2), 3) == 9);
  CHECK(abelian_twisted_classes_formula(IntMatrix::identity(2), 3) == 9);
  // shear: (I - A) has divisors 1, 0
  IntMatrix shear = IntMatrix::from_rows({{1, 1}, {0, 1}});
  CHECK(abelian_twisted_classes(shear, 5) == 5);
  CHECK(abelian_twisted_classes_formula(shear, 5) == 5);

  CHECK_THROWS_AS(abelian_twisted_classes(IntMatrix(2, 3), 3), dimension_error);
  CHECK_THROWS_AS(abelian_twisted_classes(neg, 1), invalid_parameters);
  CHECK_THROWS_AS(abelian_twisted_classes(IntMatrix::identity(7), 10), budget_error);
}

TEST_CASE("abelian_twisted_classes matches the closed form on random maps") {
  std::uniform_int_distribution<int> d(-4, 4);
  std::uniform_int_distribution<int> md(2, 5);
  for (int t = 0; t < 500; ++t) {
    std::size_t k = 1 + t % 3;
    IntMatrix a(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a(i, j) = d(rng);
    long mod = md(rng);
    CHECK(Int(static_cast<long>(abelian_twisted_classes(a, mod))) ==
          abelian_twisted_classes_formula(a, mod));
  }
}

TEST_CASE("FiniteQuotient reproduces exact arithmetic mod N") {
  TwoStepGroup g = make_path7();
  const long n = 5;
  FiniteQuotient q(g, n);
  CHECK(q.order() == 78125);  // 5^7
  std::uniform_int_distribution<int> d(-7, 7);
  auto reduce = [&](const GroupElement& e) {
    FiniteQuotient::Coords c(q.dim());
    for (std::size_t i = 0; i < g.n(); ++i) c[i] = detail::mod_reduce(e.a[i], n);
    for (std::size_t k = 0; k < g.m(); ++k) c[g.n() + k] = detail::mod_reduce(e.u[k], n);
    return c;
  };
  for (int t = 0; t < 50; ++t) {
    GroupElement p = g.identity(), r = g.identity();
    for (auto& v : p.a) v = d(rng);
    for (auto& v : p.u) v = d(rng);
    for (auto& v : r.a) v = d(rng);
    for (auto& v : r.u) v = d(rng);
    CHECK(q.multiply(reduce(p), reduce(r)) == reduce(multiply(g, p, r)));
    CHECK(q.inverse(reduce(p)) == reduce(inverse(g, p)));
    CHECK(q.multiply(reduce(p), q.inverse(reduce(p))) == q.identity());
    CHECK(q.coords_at(q.index_of(reduce(p))) == reduce(p));
  }
}

TEST_CASE("FiniteQuotient validation") {
  TwoStepGroup g = heisenberg();
  CHECK_THROWS_AS(FiniteQuotient(g, 4), invalid_parameters);
  CHECK_THROWS_AS(FiniteQuotient(g, 1), invalid_parameters);
  CHECK_THROWS_AS(FiniteQuotient(make_path7(), 31), budget_error);
  CHECK_NOTHROW(FiniteQuotient(make_path7(), 31, 30000000000ULL));
}

TEST_CASE("twisted class counts: identity on the heisenberg quotient") {
  TwoStepGroup g = heisenberg();
  // phi = id: twisted classes are plain conjugacy classes; the mod-3 quotient
  // is extraspecial of order 27 with 11 classes
  QuotientCount c = finite_quotient_twisted_classes(g, identity_endo(g), 3);
  CHECK(c.union_find == 11);
  CHECK(c.burnside == 11);
  CHECK(c.orbit_sizes_ok);
}

TEST_CASE("twisted class counts: union-find equals Burnside") {
  TwoStepGroup g = heisenberg();
  auto swp = make_endo(g, IntMatrix::from_rows({{0, 1}, {1, -1}}), IntMatrix(1, 2));
  REQUIRE(swp.has_value());
  for (long n : {3L, 5L}) {
    QuotientCount c = finite_quotient_twisted_classes(g, *swp, n);
    CHECK(c.union_find == c.burnside);
    CHECK(c.orbit_sizes_ok);
  }

  TwoStepGroup p7 = make_path7();
  QuotientCount cid = finite_quotient_twisted_classes(p7, identity_endo(p7), 3);
  CHECK(cid.union_find == cid.burnside);
  CHECK(cid.orbit_sizes_ok);
}

TEST_CASE("twisted class counts: degenerate abelian input") {
  // all commutators zero, A = (-1), N = 5: gcd(2, 5) = 1 class
  TwoStepGroup ab(1, 0);
  auto e = make_endo(ab, IntMatrix::from_rows({{-1}}), IntMatrix(0, 1));
  REQUIRE(e.has_value());
  QuotientCount c = finite_quotient_twisted_classes(ab, *e, 5);
  CHECK(c.union_find == 1);
  CHECK(c.burnside == 1);
  CHECK(abelian_twisted_classes_formula(e->A, 5) == 1);
}

TEST_CASE("twisted class counts: verification failures") {
  TwoStepGroup g = heisenberg();
  EndoData e = identity_endo(g);
  e.verified = false;
  CHECK_THROWS_AS(finite_quotient_twisted_classes(g, e, 3), verification_error);
  EndoData bad = identity_endo(g);
  bad.D(0, 0) = 7;
  CHECK_THROWS_AS(finite_quotient_twisted_classes(g, bad, 3), verification_error);
}

TEST_CASE("stabilization_report") {
  TwoStepGroup g = make_Gd({Int(1)});
  EndoData e = aut_even(g, {Int(1)});
  StabilizationReport rep = stabilization_report(g, e, {3, 5});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].modulus == 3);
  CHECK(rep.rows[1].modulus == 5);
  CHECK(rep.formula == 2);
  for (const auto& row : rep.rows) CHECK(row.count > 0);

  // non-automorphism endomorphisms still get quotient rows, no formula value
  auto dbl = make_endo(g, IntMatrix::from_rows({{2, 0}, {0, 2}}), IntMatrix(1, 2));
  REQUIRE(dbl.has_value());
  StabilizationReport rep2 = stabilization_report(g, *dbl, {3});
  CHECK(rep2.formula.is_infinite());
  REQUIRE(rep2.rows.size() == 1);
}
