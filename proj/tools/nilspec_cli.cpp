#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nilspec/nilspec.hpp"

using namespace nilspec;

namespace {

std::uint64_t oracle_budget() {
  if (const char* env = std::getenv("NILSPEC_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw parse_error("NILSPEC_BUDGET must be an unsigned integer");
    }
  }
  return kDefaultOracleBudget;
}

json read_json(const std::string& path, const char* what) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw parse_error(std::string(what) + " file '" + path + "' cannot be opened");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string(what) + " file '" + path + "' is not valid JSON");
  }
}

TwoStepGroup load_group(const std::string& path) { return group_from_json(read_json(path, "group")); }

EndoData load_aut(const TwoStepGroup& g, const std::string& path) {
  return endo_from_json(g, read_json(path, "automorphism"));
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string ext_str(const ExtNat& v) { return v.str(); }

std::vector<Int> to_ints(const std::vector<long>& v) {
  std::vector<Int> r;
  for (long x : v) r.emplace_back(x);
  return r;
}

struct GroupInfoCmd {
  std::string group = "-";
  bool as_json = false;

  int run() const {
    TwoStepGroup g = load_group(group);
    GroupInvariants inv = invariants(g);
    json divisors = json::array();
    for (const auto& d : inv.snf_divisors) divisors.push_back(io::int_to_json(d));
    if (as_json) {
      json j;
      j["n"] = g.n();
      j["m"] = g.m();
      j["hirsch"] = inv.hirsch;
      j["class"] = {inv.class_n, inv.class_m};
      j["gamma2_rank"] = inv.gamma2_rank;
      j["snf_divisors"] = divisors;
      j["center_rank"] = inv.center_rank;
      j["normalized"] = is_normalized(g);
      if (inv.delta) {
        j["delta"] = io::int_to_json(*inv.delta);
        j["lambda"] = io::int_to_json(*inv.lambda);
      }
      emit(j);
    } else {
      std::cout << "n " << g.n() << "  m " << g.m() << "\n";
      std::cout << "hirsch " << inv.hirsch << "\n";
      std::cout << "class (" << inv.class_n << "," << inv.class_m << ")\n";
      std::cout << "gamma2 rank " << inv.gamma2_rank << "\n";
      std::cout << "snf divisors";
      for (const auto& d : inv.snf_divisors) std::cout << " " << d.get_str();
      std::cout << "\n";
      if (inv.delta)
        std::cout << "delta " << inv.delta->get_str() << "  lambda " << inv.lambda->get_str()
                  << "\n";
      std::cout << "center rank " << inv.center_rank << "\n";
      std::cout << "normalized " << (is_normalized(g) ? "yes" : "no") << "\n";
    }
    return 0;
  }
};

struct AutCheckCmd {
  std::string group = "-";
  std::string aut;
  bool as_json = false;

  int run() const {
    TwoStepGroup g = load_group(group);
    EndoData e = load_aut(g, aut);  // throws on non-endomorphism input
    bool automorphism = is_automorphism(g, e);
    if (as_json) {
      json j;
      j["endomorphism"] = true;
      j["automorphism"] = automorphism;
      j["det_A"] = io::int_to_json(det(e.A));
      j["det_D"] = io::int_to_json(det(e.D));
      emit(j);
    } else {
      std::cout << "endomorphism yes\n";
      std::cout << "automorphism " << (automorphism ? "yes" : "no") << "\n";
    }
    return 0;
  }
};

struct ReidCmd {
  std::string group = "-";
  std::string aut;
  bool as_json = false;

  int run() const {
    TwoStepGroup g = load_group(group);
    EndoData e = load_aut(g, aut);
    ReidemeisterResult r = reidemeister_number(g, e);
    if (as_json) {
      json j;
      j["r_phi1"] = ext_str(r.r_phi1);
      j["r_phi2"] = ext_str(r.r_phi2);
      j["total"] = ext_str(r.total);
      j["center_series"] = ext_str(reidemeister_via_center_series(g, e));
      j["hyperbolic"] = is_hyperbolic(g, e);
      emit(j);
    } else {
      std::cout << ext_str(r.total) << "\n";
    }
    return 0;
  }
};

struct SpectrumCmd {
  std::string group = "-";
  long height = 1;
  std::optional<unsigned long long> limit;
  unsigned threads = 1;
  bool as_json = false;

  int run() const {
    TwoStepGroup g = load_group(group);
    std::cerr << "scanning height " << height << " (threads " << threads << ")\n";
    SpectrumSample s = spectrum_search(g, height, limit, threads);
    std::cerr << "scanned " << s.candidates_scanned << " candidates, "
              << s.automorphisms_found << " automorphisms\n";
    if (as_json) {
      json j;
      j["height"] = s.height;
      j["candidates_scanned"] = s.candidates_scanned;
      j["automorphisms_found"] = s.automorphisms_found;
      j["truncated"] = s.truncated;
      json vals = json::array();
      for (const auto& v : s.finite_values) vals.push_back(io::int_to_json(v));
      j["finite_values"] = vals;
      json wits;
      for (const auto& [v, e] : s.witnesses) wits[v.get_str()] = endo_to_json(e);
      j["witnesses"] = std::move(wits);
      emit(j);
    } else {
      std::cout << "finite values:";
      for (const auto& v : s.finite_values) std::cout << " " << v.get_str();
      std::cout << "\n";
      if (s.truncated) std::cout << "truncated after " << s.candidates_scanned << " candidates\n";
    }
    return 0;
  }
};

struct FamilyMakeCmd {
  std::string tag;
  std::vector<long> params;

  int run() const {
    TwoStepGroup g = [&] {
      if (tag == "Gd") return make_Gd(to_ints(params));
      if (tag == "GdZ") return make_Gd_times_Z(to_ints(params));
      if (tag == "I32") {
        if (params.size() != 3) throw invalid_parameters("I32 needs alpha beta gamma");
        return make_I32(Int(params[0]), Int(params[1]), Int(params[2]));
      }
      if (tag == "I42") {
        if (params.size() != 5) throw invalid_parameters("I42 needs delta lambda a b c");
        return make_I42(Int(params[0]), Int(params[1]), Int(params[2]), Int(params[3]),
                        Int(params[4]));
      }
      if (tag == "Path7") {
        if (!params.empty()) throw invalid_parameters("Path7 takes no parameters");
        return make_path7();
      }
      if (tag == "Abelian") {
        if (params.size() != 1 || params[0] < 0) throw invalid_parameters("Abelian needs a rank");
        return make_abelian(static_cast<std::size_t>(params[0]));
      }
      throw invalid_parameters("unknown family tag '" + tag + "'");
    }();
    emit(group_to_json(g));
    return 0;
  }
};

struct FamilyAutCmd {
  std::string tag;
  std::vector<long> k;
  std::vector<long> d;
  long alpha = 1, beta = 0, gamma = 1, l = 1;
  long delta = 1, lambda = 1, a = 0, b = 0, c = 1;

  int run() const {
    if (tag == "even" || tag == "odd") {
      if (k.empty()) throw invalid_parameters("family aut " + tag + ": --k is required");
      std::vector<Int> dd = d.empty() ? std::vector<Int>(k.size(), Int(1)) : to_ints(d);
      if (tag == "even") {
        TwoStepGroup g = make_Gd(dd);
        emit(endo_to_json(aut_even(g, to_ints(k))));
      } else {
        TwoStepGroup g = make_Gd_times_Z(dd);
        emit(endo_to_json(aut_odd(g, to_ints(k))));
      }
      return 0;
    }
    if (tag == "i32") {
      long kk = k.size() == 1 ? k[0] : (k.empty() ? 1 : throw invalid_parameters(
                                                            "family aut i32: --k takes one value"));
      TwoStepGroup g = make_I32(Int(alpha), Int(beta), Int(gamma));
      emit(endo_to_json(aut_i32(g, Int(alpha), Int(beta), Int(gamma), Int(kk), Int(l))));
      return 0;
    }
    if (tag == "i42") {
      TwoStepGroup g = make_I42(Int(delta), Int(lambda), Int(a), Int(b), Int(c));
      emit(endo_to_json(aut_i42(g, Int(c))));
      return 0;
    }
    throw invalid_parameters("unknown automorphism tag '" + tag + "'");
  }
};

struct ReduceI32Cmd {
  long alpha = 0, beta = 0, t13 = 0, t23 = 0;
  bool as_json = false;

  int run() const {
    I32Reduction r = reduce_i32({Int(alpha), Int(beta), Int(t13), Int(t23)});
    if (as_json) {
      json j;
      j["alpha"] = io::int_to_json(r.alpha);
      j["beta"] = io::int_to_json(r.beta);
      j["gamma"] = io::int_to_json(r.gamma);
      json trail = json::array();
      for (const auto& ch : r.trail) {
        json step;
        step["X"] = io::matrix_to_json(ch.X);
        step["Z"] = io::matrix_to_json(ch.Z);
        trail.push_back(std::move(step));
      }
      j["trail"] = std::move(trail);
      emit(j);
    } else {
      std::cout << "alpha " << r.alpha.get_str() << "  beta " << r.beta.get_str() << "  gamma "
                << r.gamma.get_str() << "\n";
      std::cout << "trail length " << r.trail.size() << "\n";
    }
    return 0;
  }
};

struct BqfEquivCmd {
  std::vector<long> phi;
  std::vector<long> psi;
  long lambda = 1;
  long bound = 5;
  bool as_json = false;

  int run() const {
    if (phi.size() != 3 || psi.size() != 3)
      throw invalid_parameters("bqf equiv: --phi and --psi need three coefficients a,b,c");
    BinaryQuadraticForm f{Int(phi[0]), Int(phi[1]), Int(phi[2])};
    BinaryQuadraticForm s{Int(psi[0]), Int(psi[1]), Int(psi[2])};
    auto w = bqf_lambda_equivalent(f, s, Int(lambda), bound);
    if (as_json) {
      json j;
      j["equivalent"] = w.has_value();
      if (w) {
        j["witness"] = {{"a", io::int_to_json(w->a)},
                        {"b", io::int_to_json(w->b)},
                        {"c", io::int_to_json(w->c)},
                        {"d", io::int_to_json(w->d)},
                        {"sign", w->sign}};
      }
      emit(j);
    } else if (w) {
      std::cout << "witness [[" << w->a.get_str() << "," << w->b.get_str() << "],["
                << Int(Int(lambda) * w->c).get_str() << "," << w->d.get_str() << "]] sign "
                << w->sign << "\n";
    } else {
      std::cout << "NOT-FOUND-WITHIN-BOUND\n";
    }
    return 0;
  }
};

struct ClassifyIn1Cmd {
  std::string group = "-";
  bool as_json = false;

  int run() const {
    TwoStepGroup g = load_group(group);
    In1Class c = classify_in1(g);
    if (as_json) {
      json j;
      json ds = json::array();
      for (const auto& v : c.d) ds.push_back(io::int_to_json(v));
      j["d"] = ds;
      j["free_rank"] = c.free_rank;
      emit(j);
    } else {
      std::cout << "d";
      for (const auto& v : c.d) std::cout << " " << v.get_str();
      std::cout << "\nfree rank " << c.free_rank << "\n";
    }
    return 0;
  }
};

struct OracleAbelianCmd {
  std::string matrix;
  long mod = 0;
  bool as_json = false;

  int run() const {
    IntMatrix a = io::matrix_from_json(read_json(matrix, "matrix"), "matrix");
    std::size_t count = abelian_twisted_classes(a, mod, oracle_budget());
    Int formula = abelian_twisted_classes_formula(a, mod);
    if (as_json) {
      json j;
      j["count"] = count;
      j["formula"] = io::int_to_json(formula);
      emit(j);
    } else {
      std::cout << "count " << count << "  formula " << formula.get_str() << "\n";
    }
    return 0;
  }
};

struct OracleQuotientCmd {
  std::string group = "-";
  std::string aut;
  long mod = 3;
  bool as_json = false;

  int run() const {
    TwoStepGroup g = load_group(group);
    EndoData e = load_aut(g, aut);
    QuotientCount c = finite_quotient_twisted_classes(g, e, mod, oracle_budget());
    if (as_json) {
      json j;
      j["mod"] = mod;
      j["union_find"] = c.union_find;
      j["burnside"] = c.burnside;
      j["orbit_sizes_ok"] = c.orbit_sizes_ok;
      emit(j);
    } else {
      std::cout << "union-find " << c.union_find << "  burnside " << c.burnside << "\n";
    }
    return 0;
  }
};

struct OracleStabilizeCmd {
  std::string group = "-";
  std::string aut;
  std::vector<long> mods;
  bool as_json = false;

  int run() const {
    TwoStepGroup g = load_group(group);
    EndoData e = load_aut(g, aut);
    StabilizationReport rep = stabilization_report(g, e, mods, oracle_budget());
    if (as_json) {
      json j;
      json rows = json::array();
      for (const auto& r : rep.rows) rows.push_back({{"mod", r.modulus}, {"count", r.count}});
      j["rows"] = std::move(rows);
      j["formula"] = ext_str(rep.formula);
      emit(j);
    } else {
      for (const auto& r : rep.rows)
        std::cout << "N " << r.modulus << "  count " << r.count << "\n";
      std::cout << "formula " << ext_str(rep.formula) << "\n";
    }
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic for 2-step nilpotent groups"};
  app.require_subcommand(1);

  GroupInfoCmd group_info;
  auto* group_cmd = app.add_subcommand("group", "group file operations");
  group_cmd->require_subcommand(1);
  auto* info = group_cmd->add_subcommand("info", "invariants of a group file");
  info->add_option("--group", group_info.group, "group JSON file, - for stdin");
  info->add_flag("--json", group_info.as_json, "machine output");

  AutCheckCmd aut_check;
  auto* aut_cmd = app.add_subcommand("aut", "automorphism file operations");
  aut_cmd->require_subcommand(1);
  auto* check = aut_cmd->add_subcommand("check", "verify an automorphism file");
  check->add_option("--group", aut_check.group, "group JSON file, - for stdin");
  check->add_option("--aut", aut_check.aut, "automorphism JSON file")->required();
  check->add_flag("--json", aut_check.as_json, "machine output");

  ReidCmd reid;
  auto* reid_cmd = app.add_subcommand("reid", "Reidemeister number of an automorphism");
  reid_cmd->add_option("--group", reid.group, "group JSON file, - for stdin");
  reid_cmd->add_option("--aut", reid.aut, "automorphism JSON file")->required();
  reid_cmd->add_flag("--json", reid.as_json, "machine output");

  SpectrumCmd spectrum;
  auto* spec_cmd = app.add_subcommand("spectrum", "bounded Reidemeister spectrum scan");
  spec_cmd->add_option("--group", spectrum.group, "group JSON file, - for stdin");
  spec_cmd->add_option("--height", spectrum.height, "matrix entry bound")->required();
  unsigned long long limit_val = 0;
  auto* limit_opt = spec_cmd->add_option("--limit", limit_val, "candidate limit");
  spec_cmd->add_option("--threads", spectrum.threads, "worker threads");
  spec_cmd->add_flag("--json", spectrum.as_json, "machine output");

  FamilyMakeCmd fmake;
  FamilyAutCmd faut;
  auto* family_cmd = app.add_subcommand("family", "canonical families");
  family_cmd->require_subcommand(1);
  auto* make_cmd = family_cmd->add_subcommand("make", "emit a family group file");
  make_cmd->add_option("tag", fmake.tag, "Gd | GdZ | I32 | I42 | Path7 | Abelian")->required();
  make_cmd->add_option("params", fmake.params, "family parameters");
  auto* fam_aut_cmd = family_cmd->add_subcommand("aut", "emit a family automorphism file");
  fam_aut_cmd->add_option("tag", faut.tag, "even | odd | i32 | i42")->required();
  fam_aut_cmd->add_option("--k", faut.k, "twist exponents");
  fam_aut_cmd->add_option("--d", faut.d, "divisor chain (defaults to all ones)");
  fam_aut_cmd->add_option("--alpha", faut.alpha, "I32 alpha");
  fam_aut_cmd->add_option("--beta", faut.beta, "I32 beta");
  fam_aut_cmd->add_option("--gamma", faut.gamma, "I32 gamma");
  fam_aut_cmd->add_option("--l", faut.l, "I32 l");
  fam_aut_cmd->add_option("--delta", faut.delta, "I42 delta");
  fam_aut_cmd->add_option("--lambda", faut.lambda, "I42 lambda");
  fam_aut_cmd->add_option("--a", faut.a, "I42 form coefficient a");
  fam_aut_cmd->add_option("--b", faut.b, "I42 form coefficient b");
  fam_aut_cmd->add_option("--c", faut.c, "I42 form coefficient c");

  ReduceI32Cmd reduce;
  auto* reduce_cmd = app.add_subcommand("reduce-i32", "Euclid reduction of an I(3,2) presentation");
  reduce_cmd->add_option("--alpha", reduce.alpha, "")->required();
  reduce_cmd->add_option("--beta", reduce.beta, "")->required();
  reduce_cmd->add_option("--t13", reduce.t13, "")->required();
  reduce_cmd->add_option("--t23", reduce.t23, "")->required();
  reduce_cmd->add_flag("--json", reduce.as_json, "machine output");

  BqfEquivCmd bqf;
  auto* bqf_cmd = app.add_subcommand("bqf", "binary quadratic forms");
  bqf_cmd->require_subcommand(1);
  auto* equiv_cmd = bqf_cmd->add_subcommand("equiv", "bounded lambda-equivalence search");
  equiv_cmd->add_option("--phi", bqf.phi, "coefficients a,b,c")->required()->delimiter(',');
  equiv_cmd->add_option("--psi", bqf.psi, "coefficients a,b,c")->required()->delimiter(',');
  equiv_cmd->add_option("--lambda", bqf.lambda, "lambda")->required();
  equiv_cmd->add_option("--bound", bqf.bound, "search bound");
  equiv_cmd->add_flag("--json", bqf.as_json, "machine output");

  ClassifyIn1Cmd cin1;
  auto* cin1_cmd = app.add_subcommand("classify-in1", "I(n,1) classification of a group file");
  cin1_cmd->add_option("--group", cin1.group, "group JSON file, - for stdin");
  cin1_cmd->add_flag("--json", cin1.as_json, "machine output");

  OracleAbelianCmd oab;
  OracleQuotientCmd oqu;
  OracleStabilizeCmd ost;
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force twisted-conjugacy counts");
  oracle_cmd->require_subcommand(1);
  auto* ab_cmd = oracle_cmd->add_subcommand("abelian", "abelian quotient count vs closed form");
  ab_cmd->add_option("--matrix", oab.matrix, "matrix JSON file")->required();
  ab_cmd->add_option("--mod", oab.mod, "modulus")->required();
  ab_cmd->add_flag("--json", oab.as_json, "machine output");
  auto* qu_cmd = oracle_cmd->add_subcommand("quotient", "finite 2-step quotient count");
  qu_cmd->add_option("--group", oqu.group, "group JSON file, - for stdin");
  qu_cmd->add_option("--aut", oqu.aut, "automorphism JSON file")->required();
  qu_cmd->add_option("--mod", oqu.mod, "odd modulus")->required();
  qu_cmd->add_flag("--json", oqu.as_json, "machine output");
  auto* st_cmd = oracle_cmd->add_subcommand("stabilize", "quotient counts over several moduli");
  st_cmd->add_option("--group", ost.group, "group JSON file, - for stdin");
  st_cmd->add_option("--aut", ost.aut, "automorphism JSON file")->required();
  st_cmd->add_option("--mods", ost.mods, "odd moduli")->required()->delimiter(',');
  st_cmd->add_flag("--json", ost.as_json, "machine output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (info->parsed()) return group_info.run();
    if (check->parsed()) return aut_check.run();
    if (reid_cmd->parsed()) return reid.run();
    if (spec_cmd->parsed()) {
      if (limit_opt->count() > 0) spectrum.limit = limit_val;
      return spectrum.run();
    }
    if (make_cmd->parsed()) return fmake.run();
    if (fam_aut_cmd->parsed()) return faut.run();
    if (reduce_cmd->parsed()) return reduce.run();
    if (equiv_cmd->parsed()) return bqf.run();
    if (cin1_cmd->parsed()) return cin1.run();
    if (ab_cmd->parsed()) return oab.run();
    if (qu_cmd->parsed()) return oqu.run();
    if (st_cmd->parsed()) return ost.run();
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
