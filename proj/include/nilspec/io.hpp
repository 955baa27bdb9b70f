#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nilspec/errors.hpp"
#include "nilspec/group.hpp"
#include "nilspec/intlin.hpp"
#include "nilspec/morphism.hpp"

namespace nilspec {

using json = nlohmann::ordered_json;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io {

inline constexpr std::int64_t kSafeMax = 9007199254740992;  // 2^53

// integers outside the 53-bit safe range are serialized as decimal strings
inline json int_to_json(const Int& v) {
  if (v.fits_slong_p()) {
    long x = v.get_si();
    if (x <= kSafeMax && x >= -kSafeMax) return json(x);
  }
  return json(v.get_str());
}

inline Int int_from_json(const json& j, const std::string& field) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw parse_error("field '" + field + "' is not a valid integer literal");
    }
  }
  throw parse_error("field '" + field + "' must be an integer or a decimal string");
}

inline json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw parse_error("field '" + field + "' must be an array of rows");
  std::size_t r = j.size();
  std::size_t c = 0;
  if (r > 0) {
    if (!j[0].is_array()) throw parse_error("field '" + field + "' must be an array of rows");
    c = j[0].size();
  }
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c)
      throw parse_error("field '" + field + "' has ragged rows");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = int_from_json(j[i][k], field);
  }
  return m;
}

}  // namespace io

inline json group_to_json(const TwoStepGroup& g) {
  json j;
  j["n"] = g.n();
  j["m"] = g.m();
  json comms = json::array();
  for (std::size_t idx : g.pair_order()) {
    auto [i, jj] = g.pair_at(idx);
    const auto& c = g.commutator_exponents(i, jj);
    bool nz = false;
    for (const auto& v : c)
      if (v != 0) nz = true;
    if (!nz) continue;
    json e;
    e["i"] = i + 1;
    e["j"] = jj + 1;
    json z = json::array();
    for (const auto& v : c) z.push_back(io::int_to_json(v));
    e["z"] = std::move(z);
    comms.push_back(std::move(e));
  }
  j["commutators"] = std::move(comms);
  return j;
}

inline TwoStepGroup group_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("m"))
    throw parse_error("group file must be an object with fields 'n' and 'm'");
  if (!j["n"].is_number_unsigned() && !j["n"].is_number_integer())
    throw parse_error("field 'n' must be a positive integer");
  long n = j["n"].get<long>();
  long m = j["m"].get<long>();
  if (n < 1 || m < 0) throw parse_error("field 'n' must be >= 1 and 'm' >= 0");
  TwoStepGroup g(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  if (j.contains("commutators")) {
    if (!j["commutators"].is_array()) throw parse_error("field 'commutators' must be an array");
    for (const auto& e : j["commutators"]) {
      if (!e.contains("i") || !e.contains("j") || !e.contains("z"))
        throw parse_error("field 'commutators' entries need 'i', 'j' and 'z'");
      long i = e["i"].get<long>();
      long jj = e["j"].get<long>();
      if (i < 1 || jj <= i || jj > n)
        throw parse_error("field 'i'/'j' must satisfy 1 <= i < j <= n");
      if (!e["z"].is_array() || e["z"].size() != static_cast<std::size_t>(m))
        throw parse_error("field 'z' must be an array of length m");
      std::vector<Int> z;
      for (const auto& v : e["z"]) z.push_back(io::int_from_json(v, "z"));
      g.set_commutator(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(jj - 1),
                       std::move(z));
    }
  }
  return g;
}

inline json endo_to_json(const EndoData& e) {
  json j;
  j["A"] = io::matrix_to_json(e.A);
  j["B"] = io::matrix_to_json(e.B);
  j["D"] = io::matrix_to_json(e.D);
  return j;
}

// When "D" is omitted the loader solves for it and fails loudly if none
// exists. The result is verified against the group.
inline EndoData endo_from_json(const TwoStepGroup& g, const json& j) {
  if (!j.is_object() || !j.contains("A"))
    throw parse_error("automorphism file must be an object with field 'A'");
  EndoData e;
  e.A = io::matrix_from_json(j["A"], "A");
  if (e.A.rows() != g.n() || e.A.cols() != g.n())
    throw parse_error("field 'A' must be an n x n matrix");
  if (j.contains("B")) {
    e.B = io::matrix_from_json(j["B"], "B");
    if (e.B.rows() != g.m() || e.B.cols() != g.n())
      throw parse_error("field 'B' must be an m x n matrix");
  } else {
    e.B = IntMatrix(g.m(), g.n());
  }
  if (j.contains("D")) {
    e.D = io::matrix_from_json(j["D"], "D");
    if (e.D.rows() != g.m() || e.D.cols() != g.m())
      throw parse_error("field 'D' must be an m x m matrix");
    if (!check_endomorphism(g, e))
      throw parse_error("field 'D' does not satisfy the compatibility equation");
    e.verified = true;
  } else {
    auto d = solve_induced_center_map(g, e.A);
    if (!d) throw parse_error("field 'A' admits no induced center map (not an endomorphism)");
    e.D = std::move(*d);
    e.verified = true;
  }
  return e;
}

}  // namespace nilspec
