#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "formbound/errors.hpp"
#include "verbs.hpp"

namespace formbound::cli {

std::vector<int> parse_dimension_list(const std::vector<std::string>& items) {
  std::vector<int> out;
  auto push = [&out](int n) {
    if (n < 1) throw ParameterError("dimension must be positive");
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  auto to_int = [](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ParameterError("bad dimension '" + s + "'");
    return v;
  };
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      const auto dots = part.find("..");
      if (dots == std::string::npos) {
        push(to_int(part));
        continue;
      }
      const int lo = to_int(part.substr(0, dots));
      const int hi = to_int(part.substr(dots + 2));
      if (hi < lo) throw ParameterError("empty range '" + part + "'");
      for (int n = lo; n <= hi; ++n) push(n);
    }
  }
  return out;
}

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  int t_steps = 0;
  std::string format = "pretty";
  std::string out_path;
  std::string config_path;
  std::string manifest_path;
};

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = args_in;
  if (args.size() > 1 && args[1] == "verify-poincare") {
    args[1] = "poincare";
    args.insert(args.begin() + 1, "verify");
  }

  CLI::App app{"Exact and sampled norm bounds for homotopy operators on differential forms",
               "formbound-tool"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed");
  auto* samples_opt = app.add_option("--samples", g.samples, "Monte Carlo sample count");
  auto* tsteps_opt = app.add_option("--t-steps", g.t_steps, "Panels for the kernel's radial integral");
  app.add_option("--format", g.format, "pretty, csv or json")->check(CLI::IsMember({"pretty", "csv", "json"}));
  app.add_option("--out", g.out_path, "Write the primary output to this file");
  app.add_option("--config", g.config_path, "key = value file with samples, seed, t-steps");
  app.add_option("--manifest", g.manifest_path, "Write the run manifest here instead of stderr");

  ConstantsArgs ca;
  auto* constants = app.add_subcommand("constants", "Print constant tables");
  constants->add_option("--table", ca.table, "appendix, gt06 or asymptotic")
      ->check(CLI::IsMember({"appendix", "gt06", "asymptotic"}));
  constants->add_option("--n", ca.n, "Dimensions: 5, 2..10 or 3,7");
  constants->add_option("--p", ca.p, "Exponent p (repeatable)");
  constants->add_option("--k", ca.k, "Form degree (asymptotic table)");
  constants->add_option("--r", ca.r, "Radius (gt06 table)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("suite", va.suite, "poincare, bound, pullback, transfer, il or pharmonic")
      ->required()
      ->check(CLI::IsMember({"poincare", "bound", "pullback", "transfer", "il", "pharmonic"}));
  verify->add_option("--n", va.n);
  verify->add_option("--k", va.k);
  verify->add_option("--p", va.p);
  verify->add_option("--q", va.q);
  verify->add_option("--r", va.r);
  verify->add_option("--count", va.count);
  verify->add_option("--max-degree", va.max_degree);
  verify->add_option("--C", va.C, "Lipschitz constants (pullback)");
  verify->add_option("--points", va.points);
  verify->add_option("--grid", va.grid);
  verify->add_option("--decay-index", va.decay_index);
  verify->add_option("--decay-ratio", va.decay_ratio);
  verify->add_option("--residual-tol", va.residual_tol);

  TransferCheckArgs ta;
  auto* transfer = app.add_subcommand("transfer-check", "Check a map and a form against the transfer bounds");
  transfer->add_option("map", ta.map_path)->required()->check(CLI::ExistingFile);
  transfer->add_option("form", ta.form_path)->required()->check(CLI::ExistingFile);
  transfer->add_option("--p", ta.p);
  transfer->add_option("--radius", ta.radius);
  transfer->add_option("--points", ta.points);

  IlArgs ia;
  auto* il = app.add_subcommand("il-compactness", "Singular values of the discretized averaged operator");
  il->add_option("--n", ia.n);
  il->add_option("--k", ia.k);
  il->add_option("--p", ia.p);
  il->add_option("--q", ia.q);
  il->add_option("--grid", ia.grid);
  il->add_flag("--allow-inadmissible", ia.allow_inadmissible);

  PharmonicArgs pa;
  auto* pharmonic = app.add_subcommand("pharmonic", "Minimal-energy primitive of a closed form");
  pharmonic->add_option("form", pa.form_path)->required()->check(CLI::ExistingFile);
  pharmonic->add_option("--p", pa.p);
  pharmonic->add_option("--max-degree", pa.max_degree);
  pharmonic->add_option("--tol", pa.tol);
  pharmonic->add_option("--max-iterations", pa.max_iterations);
  pharmonic->add_option("--radius", pa.radius);
  pharmonic->add_flag("--force-iterative", pa.force_iterative);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::pass : ExitCode::usage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    QuadratureConfig cfg;
    if (!g.config_path.empty()) cfg = load_quadrature_config(g.config_path, cfg);
    if (seed_opt->count()) cfg.seed = g.seed;
    if (samples_opt->count()) cfg.sample_count = g.samples;
    if (tsteps_opt->count()) cfg.t_subdivisions = g.t_steps;
    if (cfg.sample_count == 0) throw ParameterError("--samples must be positive");
    if (cfg.t_subdivisions < 1) throw ParameterError("--t-steps must be positive");
    const Format format = parse_format(g.format);

    std::ofstream file;
    if (!g.out_path.empty()) {
      file.open(g.out_path);
      if (!file) throw ParameterError("cannot write '" + g.out_path + "'");
    }
    std::ostream& primary = g.out_path.empty() ? out : file;

    Report report;
    if (*constants) {
      report = cmd_constants(ca, format, primary);
    } else if (*verify) {
      report = cmd_verify(va, cfg, format, primary);
    } else if (*transfer) {
      report = cmd_transfer_check(ta, cfg, format, primary);
    } else if (*il) {
      report = cmd_il_compactness(ia, cfg, format, primary);
    } else {
      report = cmd_pharmonic(pa, cfg, primary);
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const json m = manifest(report, cfg, wall);
    if (g.manifest_path.empty()) {
      err << m.dump() << '\n';
    } else {
      std::ofstream mf(g.manifest_path);
      if (!mf) throw ParameterError("cannot write '" + g.manifest_path + "'");
      mf << m.dump(2) << '\n';
    }
    if (const Check* c = report.first_failure()) {
      err << "check failed: " << c->name << ": " << c->detail << '\n';
      return ExitCode::check_failed;
    }
    return ExitCode::pass;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::check_failed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::usage;
  }
}

}  // namespace formbound::cli
