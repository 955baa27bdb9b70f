#include <catch_amalgamated.hpp>

#include <random>

#include "nilspec/morphism.hpp"

using namespace nilspec;

namespace {

std::mt19937 rng(20240820);

TwoStepGroup heisenberg(long k = 1) {
  TwoStepGroup g(2, 1);
  g.set_commutator(0, 1, {Int(k)});
  return g;
}

// [x1,x2] = z1, [x2,x3] = z2, [x3,x4] = z3
TwoStepGroup chain4() {
  TwoStepGroup g(4, 3);
  g.set_commutator(0, 1, {Int(1), Int(0), Int(0)});
  g.set_commutator(1, 2, {Int(0), Int(1), Int(0)});
  g.set_commutator(2, 3, {Int(0), Int(0), Int(1)});
  return g;
}

IntMatrix random_unimodular(std::size_t n, int ops = 10) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  IntMatrix u = IntMatrix::identity(n);
  for (int t = 0; t < ops; ++t) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    Int q(coef(rng));
    for (std::size_t k = 0; k < n; ++k) u(i, k) += q * u(j, k);
  }
  return u;
}

GroupElement random_element(const TwoStepGroup& g, int span) {
  std::uniform_int_distribution<int> d(-span, span);
  GroupElement e = g.identity();
  for (auto& v : e.a) v = d(rng);
  for (auto& v : e.u) v = d(rng);
  return e;
}

EndoData random_heisenberg_aut(const TwoStepGroup& g) {
  IntMatrix a = random_unimodular(2);
  std::uniform_int_distribution<int> d(-3, 3);
  IntMatrix b(1, 2);
  b(0, 0) = d(rng);
  b(0, 1) = d(rng);
  auto e = make_endo(g, a, b);
  REQUIRE(e.has_value());
  return *e;
}

}  // namespace

TEST_CASE("solve_induced_center_map: heisenberg fixed cases") {
  TwoStepGroup g = heisenberg();
  auto d1 = solve_induced_center_map(g, IntMatrix::identity(2));
  REQUIRE(d1.has_value());
  CHECK((*d1)(0, 0) == 1);

  auto d6 = solve_induced_center_map(g, IntMatrix::from_rows({{2, 0}, {0, 3}}));
  REQUIRE(d6.has_value());
  CHECK((*d6)(0, 0) == 6);

  auto ds = solve_induced_center_map(g, IntMatrix::from_rows({{0, 1}, {1, 0}}));
  REQUIRE(ds.has_value());
  CHECK((*ds)(0, 0) == -1);
}

TEST_CASE("solve_induced_center_map: diagonal A on a chain group") {
  TwoStepGroup g = chain4();
  IntMatrix a(4, 4);
  a(0, 0) = 1;
  a(1, 1) = 1;
  a(2, 2) = 1;
  a(3, 3) = 2;
  auto d = solve_induced_center_map(g, a);
  REQUIRE(d.has_value());
  IntMatrix want(3, 3);
  want(0, 0) = 1;
  want(1, 1) = 1;
  want(2, 2) = 2;
  CHECK(*d == want);
}

TEST_CASE("solve_induced_center_map: no integral solution") {
  // [x1,x2] = z^2, [x1,x3] = z; swapping x2 and x3 would need 2D = 1
  TwoStepGroup g(3, 1);
  g.set_commutator(0, 1, {Int(2)});
  g.set_commutator(0, 2, {Int(1)});
  IntMatrix a = IntMatrix::from_rows({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  CHECK_FALSE(solve_induced_center_map(g, a).has_value());
  CHECK_FALSE(make_endo(g, a, IntMatrix(1, 3)).has_value());
}

TEST_CASE("solve_induced_center_map refuses non-normalized groups") {
  TwoStepGroup bad(2, 2);
  bad.set_commutator(0, 1, {Int(1), Int(0)});
  CHECK_THROWS_AS(solve_induced_center_map(bad, IntMatrix::identity(2)), normalization_error);
}

TEST_CASE("check_endomorphism and is_automorphism") {
  TwoStepGroup g = heisenberg();
  EndoData e = identity_endo(g);
  CHECK(check_endomorphism(g, e));
  CHECK(is_automorphism(g, e));

  EndoData wrong = e;
  wrong.D(0, 0) = 2;
  CHECK_FALSE(check_endomorphism(g, wrong));

  // x_i -> x_i^2 is an endomorphism (D = 4) but not an automorphism
  auto dbl = make_endo(g, IntMatrix::from_rows({{2, 0}, {0, 2}}), IntMatrix(1, 2));
  REQUIRE(dbl.has_value());
  CHECK(dbl->D(0, 0) == 4);
  CHECK(check_endomorphism(g, *dbl));
  CHECK_FALSE(is_automorphism(g, *dbl));
}

TEST_CASE("apply requires verification") {
  TwoStepGroup g = heisenberg();
  EndoData e = identity_endo(g);
  e.verified = false;
  CHECK_THROWS_AS(apply(g, e, g.identity()), verification_error);
  CHECK_THROWS_AS(verify(g, EndoData{IntMatrix::identity(2), IntMatrix(1, 2),
                                     IntMatrix::from_rows({{5}}), false}),
                  verification_error);
}

TEST_CASE("apply is a homomorphism") {
  TwoStepGroup g = heisenberg();
  for (int t = 0; t < 30; ++t) {
    EndoData e = random_heisenberg_aut(g);
    GroupElement p = random_element(g, 5), q = random_element(g, 5);
    CHECK(apply(g, e, multiply(g, p, q)) == multiply(g, apply(g, e, p), apply(g, e, q)));
    CHECK(apply(g, e, inverse(g, p)) == inverse(g, apply(g, e, p)));
  }
}

TEST_CASE("compose matches pointwise application") {
  TwoStepGroup g = heisenberg();
  for (int t = 0; t < 20; ++t) {
    EndoData e1 = random_heisenberg_aut(g);
    EndoData e2 = random_heisenberg_aut(g);
    EndoData c = compose(g, e1, e2);
    CHECK(is_automorphism(g, c));
    GroupElement p = random_element(g, 4);
    CHECK(apply(g, c, p) == apply(g, e1, apply(g, e2, p)));
  }
}

TEST_CASE("invert round-trips") {
  TwoStepGroup g = heisenberg();
  for (int t = 0; t < 20; ++t) {
    EndoData e = random_heisenberg_aut(g);
    EndoData inv = invert(g, e);
    CHECK(is_automorphism(g, inv));
    GroupElement p = random_element(g, 4);
    CHECK(apply(g, e, apply(g, inv, p)) == p);
    CHECK(apply(g, inv, apply(g, e, p)) == p);
  }
  auto dbl = make_endo(g, IntMatrix::from_rows({{2, 0}, {0, 2}}), IntMatrix(1, 2));
  CHECK_THROWS_AS(invert(g, *dbl), invalid_parameters);
}

TEST_CASE("induced center map does not depend on B") {
  TwoStepGroup g = chain4();
  IntMatrix a = random_unimodular(4);
  auto e1 = make_endo(g, a, IntMatrix(3, 4));
  IntMatrix b(3, 4);
  std::uniform_int_distribution<int> d(-4, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) b(i, j) = d(rng);
  auto e2 = make_endo(g, a, b);
  if (e1.has_value()) {
    REQUIRE(e2.has_value());
    CHECK(e1->D == e2->D);
  }
}
