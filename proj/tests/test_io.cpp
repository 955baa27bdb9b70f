#include <catch_amalgamated.hpp>

#include "nilspec/families.hpp"
#include "nilspec/io.hpp"

using namespace nilspec;

TEST_CASE("integer serialization") {
  CHECK(io::int_to_json(Int(42)) == json(42));
  CHECK(io::int_to_json(Int(-7)) == json(-7));
  Int big("123456789012345678901234567890");
  json jb = io::int_to_json(big);
  CHECK(jb.is_string());
  CHECK(io::int_from_json(jb, "t") == big);
  CHECK(io::int_from_json(json("-15"), "t") == -15);
  CHECK_THROWS_AS(io::int_from_json(json("abc"), "t"), parse_error);
  CHECK_THROWS_AS(io::int_from_json(json(1.5), "t"), parse_error);
  CHECK_THROWS_AS(io::int_from_json(json::array(), "t"), parse_error);
}

TEST_CASE("matrix serialization round-trips") {
  IntMatrix m = IntMatrix::from_rows({{1, -2, 3}, {0, 5, -6}});
  json j = io::matrix_to_json(m);
  CHECK(io::matrix_from_json(j, "M") == m);
  CHECK(io::matrix_from_json(json::array(), "M") == IntMatrix(0, 0));
  CHECK_THROWS_AS(io::matrix_from_json(json(3), "M"), parse_error);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse("[[1,2],[3]]"), "M"), parse_error);
}

TEST_CASE("group files round-trip") {
  for (const TwoStepGroup& g :
       {make_path7(), make_Gd({Int(1), Int(2)}), make_I32(Int(1), Int(-2), Int(3)),
        make_I42(Int(2), Int(3), Int(1), Int(-1), Int(2)), make_abelian(3)}) {
    json j = group_to_json(g);
    TwoStepGroup h = group_from_json(j);
    CHECK(h.n() == g.n());
    CHECK(h.m() == g.m());
    CHECK(h.structure_matrix() == g.structure_matrix());
    // byte-stable: re-serialization is identical
    CHECK(group_to_json(h).dump() == j.dump());
  }
}

TEST_CASE("group file layout") {
  TwoStepGroup g = make_I32(Int(1), Int(0), Int(4));
  json j = group_to_json(g);
  CHECK(j["n"] == 3);
  CHECK(j["m"] == 2);
  REQUIRE(j["commutators"].size() == 2);
  // 1-based generator indices, insertion order preserved
  CHECK(j["commutators"][0]["i"] == 1);
  CHECK(j["commutators"][0]["j"] == 2);
  CHECK(j["commutators"][0]["z"] == json::parse("[1,0]"));
  CHECK(j["commutators"][1]["j"] == 3);
}

TEST_CASE("malformed group files") {
  CHECK_THROWS_AS(group_from_json(json::parse("[]")), parse_error);
  CHECK_THROWS_AS(group_from_json(json::parse(R"({"n": 2})")), parse_error);
  CHECK_THROWS_AS(group_from_json(json::parse(R"({"n": 0, "m": 1})")), parse_error);
  CHECK_THROWS_AS(group_from_json(json::parse(R"({"n": 2, "m": 1, "commutators": 3})")),
                  parse_error);
  CHECK_THROWS_AS(
      group_from_json(json::parse(R"({"n": 2, "m": 1, "commutators": [{"i": 2, "j": 1, "z": [1]}]})")),
      parse_error);
  CHECK_THROWS_AS(
      group_from_json(json::parse(R"({"n": 2, "m": 1, "commutators": [{"i": 1, "j": 2, "z": [1, 2]}]})")),
      parse_error);
  CHECK_THROWS_AS(
      group_from_json(json::parse(R"({"n": 2, "m": 1, "commutators": [{"i": 1, "z": [1]}]})")),
      parse_error);
}

TEST_CASE("automorphism files round-trip") {
  TwoStepGroup g = make_Gd({Int(1)});
  EndoData e = aut_even(g, {Int(3)});
  json j = endo_to_json(e);
  EndoData back = endo_from_json(g, j);
  CHECK(back.A == e.A);
  CHECK(back.B == e.B);
  CHECK(back.D == e.D);
  CHECK(back.verified);
}

TEST_CASE("automorphism files: omitted fields are derived") {
  TwoStepGroup g = make_Gd({Int(1)});
  json j;
  j["A"] = io::matrix_to_json(IntMatrix::from_rows({{0, 1}, {1, -2}}));
  EndoData e = endo_from_json(g, j);
  CHECK(e.verified);
  CHECK(e.D(0, 0) == -1);
  CHECK(e.B.is_zero());
}

TEST_CASE("automorphism files: inconsistent D is rejected") {
  TwoStepGroup g = make_Gd({Int(1)});
  json j;
  j["A"] = io::matrix_to_json(IntMatrix::identity(2));
  j["B"] = io::matrix_to_json(IntMatrix(1, 2));
  j["D"] = io::matrix_to_json(IntMatrix::from_rows({{5}}));
  CHECK_THROWS_AS(endo_from_json(g, j), parse_error);

  json bad;
  bad["A"] = io::matrix_to_json(IntMatrix::identity(3));
  CHECK_THROWS_AS(endo_from_json(g, bad), parse_error);

  // A with no induced center map at all
  TwoStepGroup h(3, 1);
  h.set_commutator(0, 1, {Int(2)});
  h.set_commutator(0, 2, {Int(1)});
  json noend;
  noend["A"] = io::matrix_to_json(IntMatrix::from_rows({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}));
  CHECK_THROWS_AS(endo_from_json(h, noend), parse_error);
}
