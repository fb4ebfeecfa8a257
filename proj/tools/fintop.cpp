#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fintop/io.hpp"

namespace {

using fintop::ordered_json;

// Exit codes: 0 success/proven, 1 invalid input, 2 inconclusive result,
// 3 certificate verification failure.
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitCertFailure = 3;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write to " + path);
  out << text;
  if (!out) throw std::invalid_argument("write failed for " + path);
}

void emit(const std::string& out_path, const ordered_json& j) {
  if (out_path.empty())
    std::cout << fintop::canonical_text(j);
  else
    write_text(out_path, fintop::canonical_text(j));
}

int run_invariant(fintop::Invariant inv, const std::string& expr,
                  const std::string& limits_text, bool reduced, bool serial, int threads,
                  std::string out_path) {
  fintop::SpacePtr x = fintop::parse_space_expression(expr);
  fintop::SearchOptions opt;
  opt.limits = fintop::parse_limits_option(limits_text);
  opt.parallel = !serial;
  opt.threads = threads;
  const fintop::SearchReport rep = fintop::run_search(inv, x, opt);
  if (out_path.empty())
    out_path = inv == fintop::Invariant::tc ? "tc-report.json" : "cat-report.json";
  write_text(out_path, fintop::canonical_text(fintop::report_to_json(rep)));
  std::cout << "value=" << (reduced ? rep.value - 1 : rep.value)
            << " status=" << (rep.proven ? "proven" : "upper-bound-only")
            << (reduced ? " convention=reduced" : "") << "\n";
  std::cerr << "report written to " << out_path << "\n";
  return rep.proven ? kExitOk : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact LS-category and topological complexity for finite T0 spaces,\n"
               "with independently checkable certificates"};
  app.require_subcommand(1);

  std::string expr, out_path, limits_text, cert_path;
  bool reduced = false, serial = false;
  int threads = 0, circle_n = 0;

  const auto add_space_arg = [&](CLI::App* sc) {
    sc->add_option("space", expr,
                   "space source: constructor expression (discrete:n, interval:m, circle:n, "
                   "sphere:n, join:A,B, product:A,B, op:A, susp:A, wedge:A@bp,...) or a "
                   "space JSON file")
        ->required();
  };
  const auto add_out = [&](CLI::App* sc, const char* help) {
    sc->add_option("-o,--output", out_path, help);
  };
  const auto add_search_opts = [&](CLI::App* sc) {
    sc->add_option("--limits", limits_text,
                   "search limits as visited=N,seconds=T (seconds=0 keeps runs deterministic)");
    sc->add_flag("--serial", serial, "disable the parallel sweep");
    sc->add_option("--threads", threads, "thread count for the parallel sweep (0 = default)");
  };

  auto* sc_build = app.add_subcommand("build", "materialize a space and print its JSON");
  add_space_arg(sc_build);
  add_out(sc_build, "output path (default: stdout)");

  auto* sc_validate = app.add_subcommand("validate", "check a space source and report problems");
  add_space_arg(sc_validate);

  auto* sc_cat = app.add_subcommand("cat", "Lusternik-Schnirelmann category with certificates");
  add_space_arg(sc_cat);
  add_search_opts(sc_cat);
  sc_cat->add_flag("--reduced", reduced, "print the reduced value (one less); presentation only");
  add_out(sc_cat, "report path (default: cat-report.json)");

  auto* sc_tc = app.add_subcommand("tc", "topological complexity with certificates");
  add_space_arg(sc_tc);
  add_search_opts(sc_tc);
  sc_tc->add_flag("--reduced", reduced, "print the reduced value (one less); presentation only");
  add_out(sc_tc, "report path (default: tc-report.json)");

  auto* sc_core = app.add_subcommand("core", "iterated beat-point removal down to the core");
  add_space_arg(sc_core);
  add_out(sc_core, "write the removal trace as JSON");

  auto* sc_hom = app.add_subcommand("homology",
                                    "order complex: simplex counts, Euler characteristic, b0, b1");
  add_space_arg(sc_hom);
  add_out(sc_hom, "write the homology summary as JSON");

  auto* sc_cert = app.add_subcommand("certify", "re-verify a previously written artifact");
  sc_cert->add_option("artifact", cert_path, "JSON artifact (search report, exploration, or fence)")
      ->required();

  auto* sc_exp = app.add_subcommand("explore-circle",
                                    "study the antidiagonal complement of a circle square");
  sc_exp->add_option("n", circle_n, "circle size (number of maximal points, at least 5)")
      ->required();
  sc_exp->add_option("--limits", limits_text, "search limits as visited=N,seconds=T");
  sc_exp->add_flag("--serial", serial, "disable the parallel sweep");
  sc_exp->add_option("--threads", threads, "thread count (0 = default)");
  add_out(sc_exp, "report path (default: explore-circle-<n>.json)");

  auto* sc_dot = app.add_subcommand("export-dot", "Graphviz rendering of the cover relation");
  add_space_arg(sc_dot);
  add_out(sc_dot, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (app.got_subcommand(sc_build)) {
      emit(out_path, fintop::space_to_json(*fintop::parse_space_expression(expr)));
      return kExitOk;
    }
    if (app.got_subcommand(sc_validate)) {
      fintop::SpacePtr x;
      try {
        x = fintop::parse_space_expression(expr);
      } catch (const std::exception& e) {
        std::cout << "invalid: " << e.what() << "\n";
        return kExitInvalid;
      }
      std::cout << "valid: " << x->size() << " points, " << x->hasse().size()
                << " cover relations, kind=" << x->kind() << "\n";
      return kExitOk;
    }
    if (app.got_subcommand(sc_cat))
      return run_invariant(fintop::Invariant::cat, expr, limits_text, reduced, serial, threads,
                           out_path);
    if (app.got_subcommand(sc_tc))
      return run_invariant(fintop::Invariant::tc, expr, limits_text, reduced, serial, threads,
                           out_path);
    if (app.got_subcommand(sc_core)) {
      fintop::SpacePtr x = fintop::parse_space_expression(expr);
      const fintop::CoreTrace tr = fintop::core_trace(*x, fintop::Bits::full(x->size()));
      std::cout << "core: " << x->size() << " -> " << tr.core.count() << " points\n";
      if (!out_path.empty())
        write_text(out_path, fintop::canonical_text(fintop::core_trace_to_json(x, tr)));
      return kExitOk;
    }
    if (app.got_subcommand(sc_hom)) {
      fintop::SpacePtr x = fintop::parse_space_expression(expr);
      const fintop::SimplicialComplex k = fintop::order_complex(x);
      const ordered_json j = fintop::homology_to_json(k);
      std::cout << "simplices=" << j["simplex_counts"].dump()
                << " chi=" << j["euler_characteristic"].get<long long>()
                << " b0=" << j["b0"].get<long long>() << " b1=" << j["b1"].get<long long>()
                << "\n";
      if (!out_path.empty()) write_text(out_path, fintop::canonical_text(j));
      return kExitOk;
    }
    if (app.got_subcommand(sc_cert)) {
      std::ifstream in(cert_path);
      if (!in) {
        std::cerr << "error: cannot open " << cert_path << "\n";
        return kExitInvalid;
      }
      ordered_json j;
      try {
        j = ordered_json::parse(in);
      } catch (const ordered_json::parse_error& e) {
        std::cerr << "error: JSON parse error in " << cert_path << ": " << e.what() << "\n";
        return kExitInvalid;
      }
      const fintop::CertifyResult res = fintop::certify_artifact(j);
      if (res.ok) {
        std::cout << "certificate OK (" << res.checks << " checks)\n";
        return kExitOk;
      }
      std::cout << "certificate REJECTED (" << res.problems.size() << " problems, "
                << res.checks << " checks)\n";
      for (const auto& p : res.problems) std::cout << "  - " << p << "\n";
      return kExitCertFailure;
    }
    if (app.got_subcommand(sc_exp)) {
      fintop::SearchOptions opt;
      opt.limits = fintop::parse_limits_option(limits_text);
      opt.parallel = !serial;
      opt.threads = threads;
      const fintop::ExplorationReport rep = fintop::explore_antidiagonal(circle_n, opt);
      if (out_path.empty()) out_path = "explore-circle-" + std::to_string(circle_n) + ".json";
      write_text(out_path, fintop::canonical_text(fintop::exploration_to_json(rep)));
      bool inconclusive = false;
      for (const auto& s : rep.sets) {
        std::cout << "set " << s.name << ": open=" << (s.open ? "yes" : "no")
                  << " obstruction=" << (s.obstruction ? "yes" : "no") << " decision=";
        switch (s.decision.verdict) {
          case fintop::Verdict::yes: std::cout << "planner"; break;
          case fintop::Verdict::no: std::cout << "no-planner"; break;
          default:
            std::cout << "inconclusive";
            inconclusive = true;
        }
        std::cout << "\n";
      }
      std::cout << "covers=" << (rep.covers ? "yes" : "no") << "\n";
      std::cerr << "report written to " << out_path << "\n";
      return inconclusive ? kExitInconclusive : kExitOk;
    }
    if (app.got_subcommand(sc_dot)) {
      const std::string dot = fintop::export_dot(*fintop::parse_space_expression(expr));
      if (out_path.empty())
        std::cout << dot;
      else
        write_text(out_path, dot);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
