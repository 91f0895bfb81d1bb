// latcount: command-line front end.
//
//   latcount count FILE          lattice point count (or infinite)
//   latcount brute FILE          exhaustive count in the vertex bounding box
//   latcount ehrhart FILE        Ehrhart quasi-polynomial table
//   latcount param-build FILE    step-polynomial summary at y0
//   latcount param-eval FILE [Y...]
//                                one count per line; Y is "y1,y2,..." and
//                                stdin is read (one vector per line) if no Y
//
// Exit status: 0 success, 1 when the input is valid but the operation does
// not apply (empty/unbounded where a polytope is needed, chamber
// violations, brute-force cap), 2 for malformed input.

#include "latcount/latcount.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using json = nlohmann::ordered_json;
using namespace latcount;

namespace {

struct Settings {
  std::uint64_t seed = CountOptions{}.seed;
  std::uint64_t max_brute_box = kDefaultBruteBox;
  bool no_perturb = false;
  bool diag = false;
  std::string file;
  std::vector<std::string> params;
};

struct Failure {
  int code;
  std::string error;
  std::string detail;
};

json strings(const IntVector &v) {
  json out = json::array();
  for (const auto &x : v) out.push_back(x.get_str());
  return out;
}

json diagnostics_json(const Diagnostics &d, bool verbose) {
  json j;
  j["num_vertices"] = std::to_string(d.num_vertices);
  j["delta"] = d.delta.get_str();
  j["sigma_max"] = d.sigma_max.get_str();
  j["chi"] = d.chi.get_str();
  j["c"] = strings(d.c);
  if (verbose) {
    j["wall_ms"] = std::to_string(d.wall_ms);
    j["route"] = d.route;
    j["c_fallback"] = d.c_fallback;
    j["perturb_refinements"] = std::to_string(d.perturb_refinements);
    j["sigmas"] = strings(d.sigmas);
  }
  return j;
}

CountOptions options(const Settings &s) {
  CountOptions o;
  o.seed = s.seed;
  o.perturb = !s.no_perturb;
  return o;
}

RationalVector rhs_at_y0(const ProblemFile &pf) {
  RationalVector b = pf.b;
  RationalVector by = mul(*pf.bparam, *pf.y0);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] -= by[i];
  return b;
}

/// The canonical system a command acts on: the file itself, the reduction
/// of a standard system, or P_{y0} of a parametric one.
CanonicalSystem canonical_of(const ProblemFile &pf) {
  switch (pf.form) {
  case SourceForm::canonical: return CanonicalSystem(pf.a, pf.b);
  case SourceForm::parametric: return CanonicalSystem(pf.a, rhs_at_y0(pf), {SourceForm::parametric, std::nullopt});
  case SourceForm::standard: break;
  }
  auto red = standard_to_canonical(StandardSystem(pf.a, pf.integer_b()));
  if (!red.system) throw Failure{1, "degenerate", "standard system has no free variables (count " +
                                                      red.fixed_count->get_str() + ")"};
  return std::move(*red.system);
}

json count_json(const CountResult &r, bool verbose) {
  json j;
  j["result"] = r.infinite() ? std::string("infinite") : r.value.get_str();
  j["kind"] = r.infinite() ? "infinite" : "finite";
  j["diagnostics"] = diagnostics_json(r.diag, verbose);
  return j;
}

int cmd_count(const Settings &s) {
  ProblemFile pf = parse_problem_file(s.file);
  CountResult r;
  switch (pf.form) {
  case SourceForm::canonical: r = count_polyhedron(pf.a, pf.b, options(s)); break;
  case SourceForm::standard: r = count(StandardSystem(pf.a, pf.integer_b()), options(s)); break;
  case SourceForm::parametric: r = count_polyhedron(pf.a, rhs_at_y0(pf), options(s)); break;
  }
  std::cout << count_json(r, s.diag).dump() << '\n';
  return 0;
}

int cmd_brute(const Settings &s) {
  ProblemFile pf = parse_problem_file(s.file);
  detail::Stopwatch clock;
  BigInt value;
  if (pf.form == SourceForm::standard) {
    auto red = standard_to_canonical(StandardSystem(pf.a, pf.integer_b()));
    value = red.system ? brute_force_count(*red.system, s.max_brute_box) : *red.fixed_count;
  } else {
    value = brute_force_count(canonical_of(pf), s.max_brute_box);
  }
  json j;
  j["result"] = value.get_str();
  j["kind"] = "finite";
  if (s.diag) j["diagnostics"] = {{"wall_ms", std::to_string(clock.ms())}};
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_ehrhart(const Settings &s) {
  ProblemFile pf = parse_problem_file(s.file);
  detail::Stopwatch clock;
  QuasiPolynomial qp = ehrhart(canonical_of(pf), options(s));
  json j;
  j["degree"] = std::to_string(qp.degree);
  j["period"] = std::to_string(qp.period);
  json coeffs = json::array();
  for (const auto &row : qp.coefficients) {
    json r = json::array();
    for (const auto &v : row) r.push_back(to_string(v));
    coeffs.push_back(std::move(r));
  }
  j["coefficients"] = std::move(coeffs);
  if (s.diag) j["diagnostics"] = {{"wall_ms", std::to_string(clock.ms())}};
  std::cout << j.dump() << '\n';
  return 0;
}

StepPolynomial build_from(const ProblemFile &pf, const Settings &s) {
  if (pf.form != SourceForm::parametric) throw Failure{2, "input", "parametric problem file required"};
  return build_step_polynomial(pf.a, *pf.bparam, pf.b, *pf.y0, options(s));
}

int cmd_param_build(const Settings &s) {
  ProblemFile pf = parse_problem_file(s.file);
  detail::Stopwatch clock;
  StepPolynomial sp = build_from(pf, s);
  json j;
  j["num_params"] = std::to_string(sp.num_params());
  j["dim"] = std::to_string(sp.dim());
  j["degree"] = std::to_string(sp.degree());
  j["length"] = std::to_string(sp.length());
  j["c"] = strings(sp.direction());
  json recs = json::array();
  for (const auto &rec : sp.records()) {
    json r;
    json rows = json::array();
    for (auto i : rec.rows) rows.push_back(std::to_string(i));
    r["rows"] = std::move(rows);
    r["delta"] = rec.cone->ctx.delta.get_str();
    r["sigma"] = rec.cone->ctx.sigma().get_str();
    r["betas"] = strings(rec.betas);
    recs.push_back(std::move(r));
  }
  j["records"] = std::move(recs);
  if (s.diag) j["diagnostics"] = {{"wall_ms", std::to_string(clock.ms())}};
  std::cout << j.dump() << '\n';
  return 0;
}

RationalVector parse_param_vector(const std::string &text, std::size_t expect) {
  std::string t = text;
  for (auto &ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  RationalVector y;
  for (std::string tok; in >> tok;) {
    try {
      y.push_back(parse_rational(tok));
    } catch (const Error &e) {
      throw Failure{2, "input", "parameter '" + text + "': " + e.what()};
    }
  }
  if (y.size() != expect)
    throw Failure{2, "input", "parameter '" + text + "' has " + std::to_string(y.size()) + " entries, expected " +
                                  std::to_string(expect)};
  return y;
}

int cmd_param_eval(const Settings &s) {
  ProblemFile pf = parse_problem_file(s.file);
  StepPolynomial sp = build_from(pf, s);
  auto eval = [&](const std::string &text) {
    std::cout << eval_step_polynomial(sp, parse_param_vector(text, sp.num_params())).get_str() << '\n';
  };
  if (!s.params.empty()) {
    for (const auto &p : s.params) eval(p);
  } else {
    for (std::string line; std::getline(std::cin, line);) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      eval(line);
    }
  }
  return 0;
}

int report(int code, const std::string &error, const std::string &detail) {
  std::cout.flush();
  std::cout << json{{"error", error}, {"detail", detail}}.dump() << '\n';
  return code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact lattice point counting in rational polyhedra"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--seed", s.seed, "seed for the fallback choice of the direction c");
  app.add_option("--max-brute-box", s.max_brute_box, "largest bounding box the brute-force counter scans");
  app.add_flag("--no-perturb", s.no_perturb, "require a simple polytope instead of perturbing");
  app.add_flag("--diag", s.diag, "verbose diagnostics, including timings");

  auto add = [&](const char *name, const char *help) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("file", s.file, "problem file")->required();
    return sub;
  };
  auto *count_cmd = add("count", "count lattice points");
  auto *brute_cmd = add("brute", "count by exhaustive enumeration");
  auto *ehrhart_cmd = add("ehrhart", "Ehrhart quasi-polynomial");
  auto *build_cmd = add("param-build", "build the step polynomial of a parametric file");
  auto *eval_cmd = add("param-eval", "evaluate the step polynomial at parameter vectors");
  eval_cmd->add_option("params", s.params, "parameter vectors y1,y2,...; read from stdin when absent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (count_cmd->parsed()) return cmd_count(s);
    if (brute_cmd->parsed()) return cmd_brute(s);
    if (ehrhart_cmd->parsed()) return cmd_ehrhart(s);
    if (build_cmd->parsed()) return cmd_param_build(s);
    if (eval_cmd->parsed()) return cmd_param_eval(s);
  } catch (const Failure &f) {
    return report(f.code, f.error, f.detail);
  } catch (const ParseError &e) {
    return report(2, "parse", e.what());
  } catch (const DimensionError &e) {
    return report(2, "dimension", e.what());
  } catch (const RankError &e) {
    return report(2, "rank", e.what());
  } catch (const ChamberViolation &e) {
    return report(1, "chamber-violation", e.what());
  } catch (const NonGenericParameter &e) {
    return report(1, "non-generic-parameter", e.what());
  } catch (const UnboundedError &e) {
    return report(1, "unbounded", e.what());
  } catch (const NotSimpleError &e) {
    return report(1, "not-simple", e.what());
  } catch (const BruteForceRefused &e) {
    return report(1, "brute-force-refused", e.what());
  } catch (const InternalError &e) {
    return report(1, "internal", e.what());
  } catch (const Error &e) {
    return report(1, "error", e.what());
  }
  return 2;
}
