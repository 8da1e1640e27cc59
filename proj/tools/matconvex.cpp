// Batch command-line front end. Exit codes: 0 all pass, 1 a check failed or
// was violated, 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "matconvex/commands.hpp"

namespace {

struct Output {
  std::string path;
  std::string format = "json";
  bool timing = false;
};

void common_options(CLI::App* sub, matconvex::RunConfig& c, Output& out, std::optional<std::uint64_t>& seed) {
  sub->add_option("--seed", seed, "RNG seed (falls back to MATCONVEX_SEED, then 0)");
  sub->add_option("--trials", c.trials, "number of random trials")->check(CLI::NonNegativeNumber);
  sub->add_option("--n", c.n, "matrix dimension")->check(CLI::Range(1, 64));
  sub->add_option("--out", out.path, "also write the report to this file");
  sub->add_option("--format", out.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  sub->add_flag("--timing", out.timing, "include per-check wall time");
  sub->add_option("--certify-tol", c.certify_tol, "override the certify threshold");
  sub->add_option("--violate-tol", c.violate_tol, "override the violate threshold");
}

std::string render(const matconvex::Report& r, const Output& out) {
  if (out.format == "text") return r.to_text(out.timing);
  return r.to_json(out.timing).dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized certification of matrix convexity and entropy inequalities"};
  app.require_subcommand(1);
  matconvex::RunConfig c;
  Output out;
  std::optional<std::uint64_t> seed;

  auto* cf = app.add_subcommand("certify-function", "definition, Jensen, second-derivative and Loewner tests");
  common_options(cf, c, out, seed);
  cf->add_option("--f,--function", c.function, "builtin function name")->required();
  cf->add_option("--window", c.window, "spectrum window a,b")->required();
  cf->add_option("--mode", c.mode, "convex, monotone or all")->check(CLI::IsMember({"convex", "monotone", "all"}));
  cf->add_option("--secant", c.secant, "test the secant transform at this point");
  cf->add_option("--sites", c.sites, "largest Loewner site count")->check(CLI::Range(1, 64));
  cf->add_option("--atoms", c.atoms, "Jensen atoms per trial")->check(CLI::Range(1, 64));

  auto* ce = app.add_subcommand("check-entropy", "entropy inequality slacks on a state file or random ensemble");
  common_options(ce, c, out, seed);
  ce->add_option("--state", c.state_path, "density-operator JSON file");
  ce->add_option("--random", c.random_dims, "factor dimensions, e.g. 2x2x2");
  ce->add_option("--check", c.check, "ssa, subadditivity, decomposition, lieb-ruskai or all");
  ce->add_option("--slack-tol", c.slack_tol, "one-sided slack tolerance");

  auto* cr = app.add_subcommand("certify-representation", "second-derivative test of a Pick representation");
  common_options(cr, c, out, seed);
  cr->add_option("--rep", c.rep_path, "representation JSON file")->required();
  cr->add_option("--window", c.window, "compact sampling sub-window a,b");

  auto* cc = app.add_subcommand("check-concavity", "joint-concavity batteries");
  common_options(cc, c, out, seed);
  cc->add_option("--suite", c.suite, "parallel-sum, tensor-power, lieb, wyd, perspective or kubo-ando")->required();
  cc->add_option("--k", c.k, "number of factors");
  cc->add_option("--p", c.p, "comma-separated exponents")->delimiter(',');
  cc->add_option("--nodes", c.nodes, "quadrature nodes per axis");
  cc->add_flag("--curve", c.curve, "report the 16..128 node error curve");
  cc->add_option("--rep", c.rep_path, "Kubo-Ando representation JSON file");

  auto* rs = app.add_subcommand("run-suite", "the full acceptance battery");
  common_options(rs, c, out, seed);
  rs->add_option("--only", c.only, "restrict to these groups")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  c.command = app.get_subcommands().front()->get_name();
  if (seed) {
    c.seed = *seed;
  } else if (const char* env = std::getenv("MATCONVEX_SEED")) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      std::cerr << "error: MATCONVEX_SEED='" << env << "' is not an unsigned integer\n";
      return 2;
    }
  }

  try {
    const matconvex::Report report = matconvex::run_command(c);
    const std::string text = render(report, out);
    std::cout << text;
    if (!out.path.empty()) {
      std::ofstream f(out.path, std::ios::binary);
      if (!(f << text)) {
        std::cerr << "error: cannot write " << out.path << "\n";
        return 2;
      }
    }
    return report.exit_code();
  } catch (const matconvex::ParseError& e) {
    std::cerr << "parse error at " << e.where() << ": " << e.what() << "\n";
    return 2;
  } catch (const matconvex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
