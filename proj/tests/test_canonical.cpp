#include <catch_amalgamated.hpp>

#include <random>

#include "nilspec/canonical.hpp"
#include "nilspec/families.hpp"

using namespace nilspec;

namespace {

std::mt19937 rng(20240822);

TwoStepGroup intermediate_group(const I32Intermediate& p) {
  TwoStepGroup g(3, 2);
  g.set_commutator(0, 1, {p.alpha, p.beta});
  if (p.t13 != 0) g.set_commutator(0, 2, {Int(0), p.t13});
  if (p.t23 != 0) g.set_commutator(1, 2, {Int(0), p.t23});
  return g;
}

TwoStepGroup apply_trail(TwoStepGroup g, const std::vector<GeneratorChange>& trail) {
  for (const auto& ch : trail) g = change_generators(g, ch);
  return g;
}

bool same_structure(const TwoStepGroup& a, const TwoStepGroup& b) {
  return a.n() == b.n() && a.m() == b.m() && a.structure_matrix() == b.structure_matrix();
}

bool witness_valid(const BinaryQuadraticForm& phi, const BinaryQuadraticForm& psi,
                   const Int& lambda, const BqfWitness& w) {
  Int dt = w.a * w.d - lambda * w.c * w.b;
  if (dt != 1 && dt != -1) return false;
  BinaryQuadraticForm s = phi.substitute(w.a, w.b, lambda * w.c, w.d);
  if (w.sign == -1) s = s.negate();
  return s == psi;
}

}  // namespace

TEST_CASE("reduce_i32: fixed example") {
  I32Reduction r = reduce_i32({Int(1), Int(0), Int(4), Int(6)});
  CHECK(r.alpha == 1);
  CHECK(r.beta == 0);
  CHECK(r.gamma == 2);
  TwoStepGroup final = apply_trail(intermediate_group({Int(1), Int(0), Int(4), Int(6)}), r.trail);
  CHECK(same_structure(final, make_I32(r.alpha, r.beta, r.gamma)));
}

TEST_CASE("reduce_i32: swap branch and sign normalization") {
  // only [x2,x3] carries the relator
  I32Reduction r = reduce_i32({Int(2), Int(1), Int(0), Int(-3)});
  CHECK(r.gamma == 3);
  TwoStepGroup final = apply_trail(intermediate_group({Int(2), Int(1), Int(0), Int(-3)}), r.trail);
  CHECK(same_structure(final, make_I32(r.alpha, r.beta, r.gamma)));

  I32Reduction neg = reduce_i32({Int(1), Int(2), Int(-5), Int(0)});
  CHECK(neg.gamma == 5);
  CHECK(neg.beta == -2);
}

TEST_CASE("reduce_i32: validation") {
  CHECK_THROWS_AS(reduce_i32({Int(0), Int(1), Int(1), Int(1)}), invalid_parameters);
  CHECK_THROWS_AS(reduce_i32({Int(1), Int(1), Int(0), Int(0)}), invalid_parameters);
}

TEST_CASE("reduce_i32: random inputs produce gcd and a faithful trail") {
  std::uniform_int_distribution<int> d(-20, 20);
  int done = 0;
  while (done < 200) {
    I32Intermediate p{Int(d(rng)), Int(d(rng)), Int(d(rng)), Int(d(rng))};
    if (p.alpha == 0 || (p.t13 == 0 && p.t23 == 0)) continue;
    ++done;
    I32Reduction r = reduce_i32(p);
    CHECK(r.gamma == gcd(p.t13, p.t23));
    CHECK(r.gamma > 0);
    CHECK(abs(r.alpha) == abs(p.alpha));
    TwoStepGroup before = intermediate_group(p);
    TwoStepGroup after = apply_trail(before, r.trail);
    CHECK(same_structure(after, make_I32(r.alpha, r.beta, r.gamma)));
    // generator changes never move the isomorphism invariants
    CHECK(invariants(before).snf_divisors == invariants(after).snf_divisors);
    for (const auto& ch : r.trail) {
      Int dx = det(ch.X), dz = det(ch.Z);
      CHECK((dx == 1 || dx == -1));
      CHECK((dz == 1 || dz == -1));
    }
  }
}

TEST_CASE("classify_in1") {
  In1Class h = classify_in1(make_Gd({Int(1)}));
  CHECK(h.d == std::vector<Int>{1});
  CHECK(h.free_rank == 0);

  In1Class g12 = classify_in1(make_Gd({Int(1), Int(2)}));
  CHECK(g12.d == std::vector<Int>{1, 2});
  CHECK(g12.free_rank == 0);

  In1Class gz = classify_in1(make_Gd_times_Z({Int(3)}));
  CHECK(gz.d == std::vector<Int>{3});
  CHECK(gz.free_rank == 1);

  CHECK_THROWS_AS(classify_in1(TwoStepGroup(3, 2)), invalid_parameters);
  CHECK_THROWS_AS(classify_in1(TwoStepGroup(2, 1)), invalid_parameters);
}

TEST_CASE("classify_in1 is stable under generator changes") {
  std::uniform_int_distribution<int> coef(-2, 2);
  TwoStepGroup g = make_Gd({Int(2), Int(4)});
  for (int t = 0; t < 20; ++t) {
    IntMatrix x = IntMatrix::identity(4);
    for (int s = 0; s < 8; ++s) {
      std::size_t i = rng() % 4, j = rng() % 4;
      if (i == j) continue;
      Int q(coef(rng));
      for (std::size_t k = 0; k < 4; ++k) x(k, i) += q * x(k, j);
    }
    TwoStepGroup h = change_generators(g, GeneratorChange{x, IntMatrix::identity(1)});
    In1Class c = classify_in1(h);
    CHECK(c.d == std::vector<Int>{2, 4});
    CHECK(c.free_rank == 0);
  }
}

TEST_CASE("psi_k fixed cases") {
  BinaryQuadraticForm x2{Int(1), Int(0), Int(0)};
  BinaryQuadraticForm p = psi_k(x2, Int(1), Int(1));
  CHECK(p == BinaryQuadraticForm{Int(4), Int(4), Int(1)});
  // k = 0 is the identity substitution
  CHECK(psi_k(x2, Int(5), Int(0)) == x2);
  // c coefficient of Psi_k is Phi(k, 1)
  BinaryQuadraticForm f{Int(2), Int(-1), Int(3)};
  for (long k : {-2L, 1L, 3L})
    CHECK(psi_k(f, Int(2), Int(k)).c == f.eval(Int(k), Int(1)));
}

TEST_CASE("choose_k0") {
  CHECK(choose_k0(BinaryQuadraticForm{Int(1), Int(0), Int(0)}) == 1);
  CHECK(choose_k0(BinaryQuadraticForm{Int(1), Int(-1), Int(0)}) == -1);
  CHECK(choose_k0(BinaryQuadraticForm{Int(0), Int(2), Int(0)}) == 1);
  CHECK_THROWS_AS(choose_k0(BinaryQuadraticForm{Int(1), Int(1), Int(1)}), invalid_parameters);
  CHECK_THROWS_AS(choose_k0(BinaryQuadraticForm{Int(0), Int(0), Int(0)}), invalid_parameters);
  // k0 always moves the c coefficient off zero
  BinaryQuadraticForm f{Int(2), Int(-4), Int(0)};
  Int k0 = choose_k0(f);
  CHECK(psi_k(f, Int(1), k0).c != 0);
}

TEST_CASE("bqf_lambda_equivalent: witnesses are valid") {
  BinaryQuadraticForm x2{Int(1), Int(0), Int(0)};
  BinaryQuadraticForm sq{Int(4), Int(4), Int(1)};
  auto w = bqf_lambda_equivalent(x2, sq, Int(1), 5);
  REQUIRE(w.has_value());
  CHECK(witness_valid(x2, sq, Int(1), *w));

  auto neg = bqf_lambda_equivalent(x2, x2.negate(), Int(1), 3);
  REQUIRE(neg.has_value());
  CHECK(neg->sign == -1);
  CHECK(witness_valid(x2, x2.negate(), Int(1), *neg));

  // X^2 only represents squares, 2X^2 only twice-squares: inequivalent
  CHECK_FALSE(bqf_lambda_equivalent(x2, BinaryQuadraticForm{Int(2), Int(0), Int(0)}, Int(1), 4)
                  .has_value());
  CHECK_THROWS_AS(bqf_lambda_equivalent(x2, sq, Int(0), 3), invalid_parameters);
  CHECK_THROWS_AS(bqf_lambda_equivalent(x2, sq, Int(1), 0), invalid_parameters);
}

TEST_CASE("bqf_lambda_equivalent recognizes psi_k images") {
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 40; ++t) {
    BinaryQuadraticForm f{Int(d(rng)), Int(d(rng)), Int(d(rng))};
    Int lambda(1 + t % 3);
    Int k(1 + t % 2);
    BinaryQuadraticForm g = psi_k(f, lambda, k);
    auto w = bqf_lambda_equivalent(f, g, lambda, 8);
    REQUIRE(w.has_value());
    CHECK(witness_valid(f, g, lambda, *w));
  }
}

TEST_CASE("recover_i42_form round-trips the template") {
  for (long a : {-2L, 0L, 1L})
    for (long b : {-1L, 2L})
      for (long c : {0L, 3L}) {
        TwoStepGroup g = make_I42(Int(2), Int(3), Int(a), Int(b), Int(c));
        auto f = recover_i42_form(g, Int(2), Int(3));
        REQUIRE(f.has_value());
        CHECK(*f == BinaryQuadraticForm{Int(a), Int(b), Int(c)});
      }
  CHECK_FALSE(recover_i42_form(make_path7(), Int(1), Int(1)).has_value());
}

TEST_CASE("i42_isomorphic") {
  // same (delta, lambda), forms related by a unimodular substitution
  TwoStepGroup g1 = make_I42(Int(1), Int(1), Int(1), Int(0), Int(0));
  TwoStepGroup g2 = make_I42(Int(1), Int(1), Int(4), Int(4), Int(1));
  I42IsoResult iso = i42_isomorphic(g1, g2, 5);
  CHECK(iso.verdict == IsoVerdict::Isomorphic);
  CHECK(iso.delta == 1);
  CHECK(iso.lambda == 1);
  REQUIRE(iso.witness.has_value());
  CHECK(witness_valid(BinaryQuadraticForm{Int(1), Int(0), Int(0)},
                      BinaryQuadraticForm{Int(4), Int(4), Int(1)}, Int(1), *iso.witness));

  // invariant mismatch is decisive
  TwoStepGroup g3 = make_I42(Int(2), Int(1), Int(1), Int(0), Int(0));
  CHECK(i42_isomorphic(g1, g3, 5).verdict == IsoVerdict::NotIsomorphic);

  // no witness within the bound: only a semi-decision
  TwoStepGroup g4 = make_I42(Int(1), Int(1), Int(2), Int(0), Int(0));
  CHECK(i42_isomorphic(g1, g4, 3).verdict == IsoVerdict::NotFoundWithinBound);

  CHECK_THROWS_AS(i42_isomorphic(g1, make_path7(), 3), invalid_parameters);
}
