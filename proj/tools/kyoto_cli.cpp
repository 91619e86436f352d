// Command-line front end for the kyoto library.

#include "kyoto/kyoto.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <iostream>

namespace {

using json = nlohmann::json;
using namespace kyoto;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_bracket = 2;
constexpr int exit_mismatch = 3;
constexpr int exit_usage = 64;

struct Globals {
  std::string solver;
  std::uint64_t budget = 0;
  int workers = 1;
  std::string cache;
  std::string data_dir;
  bool as_json = false;
};

struct ParamArgs {
  int a = 0, b = 0, m = 0, n = 0;
  [[nodiscard]] ProblemParams params() const {
    ProblemParams p{a, b, m, n};
    p.validate();
    return p;
  }
};

void add_params(CLI::App* cmd, ParamArgs& args) {
  cmd->add_option("a", args.a, "minor rows")->required();
  cmd->add_option("b", args.b, "minor columns")->required();
  cmd->add_option("m", args.m, "matrix rows")->required();
  cmd->add_option("n", args.n, "matrix columns")->required();
}

SearchOptions search_options(const Globals& g) {
  SearchOptions opt;
  opt.conflict_budget = g.budget;
  opt.workers = g.workers;
  opt.external.command = g.solver.empty() ? ExternalSolver::from_environment().command : g.solver;
  return opt;
}

json to_json(const ProblemParams& p) { return {{"a", p.a}, {"b", p.b}, {"m", p.m}, {"n", p.n}}; }

json to_json(const BoundReport& r) {
  json prov = json::array();
  for (const auto& e : r.provenance)
    prov.push_back({{"source", to_string(e)}, {"value", e.value}, {"exact", e.exact}});
  return {{"lower", r.lower}, {"upper", r.upper}, {"exact", r.exact}, {"provenance", prov}};
}

json to_json(const SolveStats& s) {
  return {{"decisions", s.decisions}, {"propagations", s.propagations}, {"conflicts", s.conflicts},
          {"seconds", s.seconds}};
}

json to_json(const ZResult& r) {
  json attempts = json::array();
  for (const auto& at : r.attempts) {
    json outcomes = json::array();
    for (const auto& o : at.outcomes)
      outcomes.push_back({{"pair", format_pair(o.pair)}, {"status", to_string(o.status)}, {"stats", to_json(o.stats)}});
    attempts.push_back({{"weight", at.weight}, {"pair_count", at.pair_count}, {"outcomes", outcomes}});
  }
  return {{"params", to_json(r.params)},   {"z", r.z},
          {"exact", r.exact},              {"upper", r.upper},
          {"witness", encode_matrix(r.witness)},
          {"refuted_weight", r.refuted_weight},
          {"refutation", to_string(r.refutation)},
          {"method", to_string(r.method)}, {"bounds", to_json(r.bounds)},
          {"attempts", attempts},          {"seconds", r.seconds}};
}

ReferenceTable load_reference(const Globals& g) {
  const auto path = g.data_dir.empty() ? ReferenceTable::default_path()
                                       : std::filesystem::path(g.data_dir) / "reference_tables.txt";
  return ReferenceTable::load(path);
}

void load_cache(const Globals& g, ExactCache& cache) {
  if (!g.cache.empty())
    load_results(g.cache, cache);
}

// Subcommands ------------------------------------------------------------------------

int cmd_compute(const Globals& g, const ParamArgs& args) {
  const auto p = args.params();
  ExactCache cache;
  load_cache(g, cache);
  const auto r = compute_z(p, search_options(g), &cache);
  if (!g.cache.empty())
    append_result(g.cache, r);
  if (g.as_json) {
    std::cout << to_json(r).dump(2) << '\n';
  } else {
    std::cout << "z=" << r.z << (r.exact ? "" : " (bracket, upper " + std::to_string(r.upper) + ")") << '\n'
              << "witness " << encode_matrix(r.witness) << '\n'
              << "method " << to_string(r.method) << ", refutation: " << to_string(r.refutation) << '\n'
              << "bounds " << r.bounds.lower << ".." << r.bounds.upper << '\n'
              << "weights tried " << r.attempts.size() << ", seconds " << std::fixed << std::setprecision(3)
              << r.seconds << '\n';
  }
  return r.exact ? exit_ok : exit_bracket;
}

int cmd_bounds(const Globals& g, const ParamArgs& args) {
  const auto p = args.params();
  ExactCache cache;
  load_cache(g, cache);
  const auto r = z_upper(p, &cache);
  const auto rb = roman_best(p);
  if (g.as_json) {
    auto j = to_json(r);
    j["params"] = to_json(p);
    j["roman_best"] = {{"bound", rb.bound}, {"q", rb.q}, {"transposed", rb.transposed}};
    std::cout << j.dump(2) << '\n';
    return exit_ok;
  }
  std::cout << "lower " << r.lower << '\n'
            << "upper " << r.upper << (r.exact ? " exact" : "") << '\n'
            << "roman q=" << rb.q << (rb.transposed ? " transposed" : "") << " bound " << rb.bound << '\n';
  for (const auto& e : r.provenance)
    std::cout << "  " << to_string(e) << ' ' << e.value << (e.exact ? " exact" : "") << '\n';
  return exit_ok;
}

int cmd_partitions(const Globals& g, const ParamArgs& args, int w, bool rows, bool pairs) {
  const auto p = args.params();
  ExactCache cache;
  load_cache(g, cache);
  const auto z_ub = live_z_upper(p, &cache);
  json out = json::array();
  if (pairs) {
    for (const auto& pp : admissible_pairs(p, w, z_ub)) {
      if (g.as_json)
        out.push_back({{"rows", pp.rows.parts}, {"cols", pp.cols.parts}});
      else
        std::cout << format_pair(pp) << '\n';
    }
  } else {
    for_each_partition(p, w, rows ? Orientation::rows : Orientation::cols, z_ub, [&](const Partition& part) {
      if (g.as_json)
        out.push_back(part.parts);
      else
        std::cout << format_parts(part.parts) << '\n';
      return true;
    });
  }
  if (g.as_json)
    std::cout << out.dump() << '\n';
  return exit_ok;
}

int cmd_encode(const ParamArgs& args, const std::string& rows, const std::string& cols, const std::string& output) {
  const auto p = args.params();
  PartitionPair pp;
  pp.rows.parts = parse_parts(rows);
  pp.cols.parts = parse_parts(cols);
  pp.rows.bound = p.n;
  pp.cols.bound = p.m;
  pp.rows.weight = std::accumulate(pp.rows.parts.begin(), pp.rows.parts.end(), 0);
  pp.cols.weight = std::accumulate(pp.cols.parts.begin(), pp.cols.parts.end(), 0);
  const auto text = emit_dimacs(build_instance(p, pp));
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!(out << text))
      throw InputError("cannot write " + output);
  }
  return exit_ok;
}

int cmd_enumerate(const Globals& g, const ParamArgs& args) {
  const auto p = args.params();
  if (p.m != p.n)
    throw InputError("enumerate needs a square matrix (m == n)");
  ExactCache cache;
  load_cache(g, cache);
  const auto r = compute_z(p, search_options(g), &cache);
  if (!r.exact) {
    std::cerr << "z is not settled within the budget; nothing enumerated\n";
    return exit_bracket;
  }
  EnumerateOptions eo;
  eo.conflict_budget = g.budget;
  const auto set = enumerate_maximal(p, r.z, eo, &cache);
  if (g.as_json) {
    json reps = json::array();
    for (const auto& c : set.representatives) {
      const auto cs = complement_structure(c.matrix);
      reps.push_back({{"code", c.code},
                      {"row_sums", c.row_sums},
                      {"col_sums", c.col_sums},
                      {"automorphisms", c.automorphism_count},
                      {"complement",
                       {{"isolated_edges", cs.isolated_edges}, {"cycles", cs.cycles}, {"paths", cs.paths},
                        {"other", cs.other}}}});
    }
    std::cout << json{{"params", to_json(p)},      {"z", set.z},           {"complete", set.complete},
                      {"pairs", set.pairs},        {"models", set.models}, {"representatives", reps}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "z=" << set.z << " classes=" << set.representatives.size()
              << (set.complete ? "" : " (incomplete)") << '\n';
    for (const auto& c : set.representatives)
      std::cout << format_representative(set, c) << '\n';
  }
  return set.complete ? exit_ok : exit_bracket;
}

int cmd_verify(const Globals& g, int a, int b, const std::string& code) {
  const auto mat = decode_matrix(code);
  ProblemParams p{a, b, mat.rows(), mat.cols()};
  p.validate();
  const bool admissible = !has_forbidden_minor(mat, p);
  if (g.as_json)
    std::cout << json{{"admissible", admissible}, {"weight", mat.weight()}, {"rows", mat.rows()},
                      {"cols", mat.cols()}}
                     .dump()
              << '\n';
  else
    std::cout << (admissible ? "admissible" : "not admissible") << ", weight " << mat.weight() << '\n';
  return admissible ? exit_ok : exit_failure;
}

int cmd_oracle(const Globals& g, const ParamArgs& args, int cells) {
  const auto p = args.params();
  const int z = brute_force_z(p, cells);
  if (g.as_json)
    std::cout << json{{"params", to_json(p)}, {"z", z}}.dump() << '\n';
  else
    std::cout << "z=" << z << '\n';
  return exit_ok;
}

int cmd_table(const Globals& g, int a, int max_m, int max_n, bool reference_only) {
  if (a < 1 || max_m < a || max_n < a)
    throw InputError("table needs a >= 1 and limits of at least a");
  const auto ref = load_reference(g);
  ExactCache cache;
  load_cache(g, cache);
  const auto opt = search_options(g);

  int mismatches = 0;
  bool all_exact = true;
  json cells = json::array();
  std::ostringstream grid;
  grid << std::setw(4) << "m\\n";
  for (int n = a; n <= max_n; ++n)
    grid << std::setw(8) << n;
  grid << '\n';
  for (int m = a; m <= max_m; ++m) {
    grid << std::setw(4) << m;
    for (int n = a; n <= max_n; ++n) {
      if (n < m) {
        grid << std::setw(8) << "";
        continue;
      }
      const ProblemParams p{a, a, m, n};
      const auto expected = ref.lookup(p);
      std::string text;
      json cell{{"m", m}, {"n", n}};
      if (reference_only) {
        if (expected) {
          text = std::to_string(expected->value) + (expected->exact ? "" : "?");
          cell["value"] = expected->value;
          cell["exact"] = expected->exact;
        }
      } else {
        const auto r = compute_z(p, opt, &cache);
        all_exact = all_exact && r.exact;
        text = r.exact ? std::to_string(r.z) : std::to_string(r.z) + ".." + std::to_string(r.upper);
        cell["value"] = r.z;
        cell["exact"] = r.exact;
        cell["upper"] = r.upper;
        bool bad = false;
        if (expected) {
          cell["reference"] = expected->value;
          // An exact reference must match; an upper bound must not be beaten.
          if (expected->exact)
            bad = r.z > expected->value || (r.exact && r.z != expected->value) || r.upper < expected->value;
          else
            bad = r.z > expected->value;
        }
        if (bad) {
          ++mismatches;
          text += "!";
          cell["mismatch"] = true;
        }
      }
      cells.push_back(cell);
      grid << std::setw(8) << text;
    }
    grid << '\n';
  }
  if (g.as_json) {
    std::cout << json{{"a", a}, {"cells", cells}, {"mismatches", mismatches}}.dump(2) << '\n';
  } else {
    std::cout << grid.str();
    if (mismatches)
      std::cout << mismatches << " disagreement(s) with the reference table\n";
  }
  if (mismatches)
    return exit_mismatch;
  return all_exact ? exit_ok : exit_bracket;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zarankiewicz numbers via SAT"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Globals g;
  app.add_option("--solver", g.solver, "external DIMACS solver command (default: $KYOTO_SOLVER)");
  app.add_option("--budget", g.budget, "conflict budget per SAT instance (0 = unlimited)");
  app.add_option("--workers", g.workers, "parallel SAT instances")->check(CLI::PositiveNumber);
  app.add_option("--cache", g.cache, "results file read before and appended after computing");
  app.add_option("--data", g.data_dir, "directory holding reference_tables.txt");
  app.add_flag("--json", g.as_json, "machine-readable output");

  ParamArgs params;
  int weight = 0, cells = default_oracle_cell_budget, a = 0, b = 0, max_m = 0, max_n = 0;
  bool rows = false, pairs = false, reference_only = false;
  std::string row_sums, col_sums, output, code;

  auto* compute = app.add_subcommand("compute", "compute z_{a,b}(m,n)");
  add_params(compute, params);
  auto* bounds = app.add_subcommand("bounds", "analytic bounds");
  add_params(bounds, params);
  auto* partitions = app.add_subcommand("partitions", "admissible column (or row) partitions of weight w");
  add_params(partitions, params);
  partitions->add_option("w", weight, "weight")->required();
  partitions->add_flag("--rows", rows, "row partitions instead of column partitions");
  partitions->add_flag("--pairs", pairs, "surviving partition pairs");
  auto* encode = app.add_subcommand("encode", "DIMACS for one partition pair");
  add_params(encode, params);
  encode->add_option("--row-sums", row_sums, "comma-separated row sums")->required();
  encode->add_option("--col-sums", col_sums, "comma-separated column sums")->required();
  encode->add_option("-o,--output", output, "output file (default stdout)");
  auto* enumerate = app.add_subcommand("enumerate", "maximal matrices up to isomorphism");
  add_params(enumerate, params);
  auto* verify = app.add_subcommand("verify", "check a matrix code for forbidden minors");
  verify->add_option("a", a)->required();
  verify->add_option("b", b)->required();
  verify->add_option("code", code, "\"H W payload\"")->required();
  auto* table = app.add_subcommand("table", "table of z_a(m,n) for m <= n against reference values");
  table->add_option("a", a)->required();
  table->add_option("max_m", max_m)->required();
  table->add_option("max_n", max_n)->required();
  table->add_flag("--reference", reference_only, "print the reference values without computing");
  auto* oracle = app.add_subcommand("oracle", "exhaustive search for small cases");
  add_params(oracle, params);
  oracle->add_option("--cells", cells, "largest m*n accepted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  try {
    if (*compute)
      return cmd_compute(g, params);
    if (*bounds)
      return cmd_bounds(g, params);
    if (*partitions)
      return cmd_partitions(g, params, weight, rows, pairs);
    if (*encode)
      return cmd_encode(params, row_sums, col_sums, output);
    if (*enumerate)
      return cmd_enumerate(g, params);
    if (*verify)
      return cmd_verify(g, a, b, code);
    if (*table)
      return cmd_table(g, a, max_m, max_n, reference_only);
    if (*oracle)
      return cmd_oracle(g, params, cells);
  } catch (const InputError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ParseError& e) {
    std::cerr << "usage error: malformed matrix code: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}
