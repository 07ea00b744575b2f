#include "svstokes/cli.hpp"

#include "svstokes/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

namespace svstokes {

namespace {

struct Options {
  std::string experiment = "custom";
  std::string method = "mixed-sv";
  std::string bc = "compatible";
  std::string mesh_mod = "full";
  std::string pattern = "diagonal";
  std::vector<int> n;
  std::vector<double> ra;
  int k = 4;
  double nu = 1.0;
  double rho = 100.0;
  double tol = 1e-11;
  int max_iter = 100;
  std::string out;
  std::string log;
  unsigned seed = 0;
};

MeshPattern pattern_from_string(const std::string &s) {
  if (s == "diagonal")
    return MeshPattern::diagonal;
  if (s == "crisscross")
    return MeshPattern::crisscross;
  throw Error("unknown mesh pattern '" + s + "'");
}

bool write_text(const std::string &path, const std::string &text, std::ostream &out, std::ostream &err) {
  if (path.empty()) {
    out << text;
    return true;
  }
  std::ofstream f(path);
  if (!f) {
    err << "error: cannot open " << path << " for writing\n";
    return false;
  }
  f << text;
  return bool(f);
}

} // namespace

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Scott-Vogelius Stokes solver and experiment harness", "svstokes"};
  app.add_option("--experiment", o.experiment, "Preset run")
      ->check(CLI::IsMember({"table1", "table2", "table3", "table4", "fig1", "fig2", "custom"}));
  auto *method = app.add_option("--method", o.method, "Discretization")
                     ->check(CLI::IsMember({"mixed-sv", "taylor-hood", "ipm"}));
  auto *bc = app.add_option("--bc", o.bc, "Boundary interpolation")->check(CLI::IsMember({"lagrange", "compatible"}));
  auto *mod = app.add_option("--mesh-mod", o.mesh_mod, "Mesh modification")
                  ->check(CLI::IsMember({"none", "corner", "full", "M1", "M2", "M3"}));
  auto *n = app.add_option("--n", o.n, "Mesh sizes (cells per side)")->delimiter(',');
  app.add_option("--k", o.k, "Velocity degree")->capture_default_str();
  app.add_option("--nu", o.nu, "Viscosity")->capture_default_str();
  auto *rho = app.add_option("--rho", o.rho, "Penalty parameter")->capture_default_str();
  auto *ra = app.add_option("--ra", o.ra, "Load scalings")->delimiter(',');
  app.add_option("--tol", o.tol, "Stopping tolerance")->capture_default_str();
  app.add_option("--max-iter", o.max_iter, "Iteration limit")->capture_default_str();
  app.add_option("--pattern", o.pattern, "Mesh pattern")->check(CLI::IsMember({"diagonal", "crisscross"}));
  app.add_option("--out", o.out, "CSV output file (default stdout)");
  app.add_option("--log", o.log, "JSON log file");
  app.add_option("--seed", o.seed, "Seed for randomized checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  StokesConfig cfg;
  std::vector<int> Ns = {4, 8, 16};
  std::vector<double> Ras = {1.0};
  try {
    cfg.method = method_from_string(o.method);
    cfg.bc_mode = bc_mode_from_string(o.bc);
    cfg.mesh_mod = mesh_mod_from_string(o.mesh_mod);
    cfg.k = o.k;
    cfg.nu = o.nu;
    cfg.rho = o.rho;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;

    // presets; explicit flags still win
    const auto preset = [&](Method m, BcMode b, double r, std::vector<int> ns) {
      if (!method->count())
        cfg.method = m;
      if (!bc->count())
        cfg.bc_mode = b;
      if (!mod->count())
        cfg.mesh_mod = MeshModMode::full;
      if (!rho->count())
        cfg.rho = r;
      Ns = std::move(ns);
    };
    if (o.experiment == "table1")
      preset(Method::mixed_sv, BcMode::compatible, cfg.rho, {4, 8, 16, 32});
    else if (o.experiment == "table2")
      preset(Method::mixed_sv, BcMode::lagrange, cfg.rho, {4, 8, 16, 32});
    else if (o.experiment == "table3")
      preset(Method::ipm, BcMode::compatible, 1e2, {4, 8, 16});
    else if (o.experiment == "table4")
      preset(Method::ipm, BcMode::compatible, 1e4, {4, 8, 16});
    else if (o.experiment == "fig1") {
      preset(cfg.method, BcMode::compatible, cfg.rho, {16});
      Ras = {10.0, 100.0, 1000.0, 10000.0};
    } else if (o.experiment == "fig2")
      preset(Method::ipm, BcMode::compatible, 1e2, {16});
    if (n->count())
      Ns = o.n;
    if (ra->count())
      Ras = o.ra;
    cfg.validate();
    if (std::any_of(Ns.begin(), Ns.end(), [](int v) { return v < 1; }))
      throw Error("mesh sizes must be positive");
    if (Ras.empty() || Ns.empty())
      throw Error("empty --n or --ra list");
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const MeshPattern pattern = pattern_from_string(o.pattern);

  if (cfg.method == Method::mixed_sv && cfg.mesh_mod != MeshModMode::full && o.experiment != "fig2")
    err << "warning: mixed-sv on a mesh with singular vertices; the saddle system is expected to be singular\n";

  try {
    if (o.experiment == "fig1") {
      const auto rows = run_pressure_robustness(cfg, Ns.front(), Ras, pattern);
      if (!write_text(o.out, robustness_csv(rows), out, err))
        return 1;
      return std::all_of(rows.begin(), rows.end(), [](const auto &r) { return r.sv.ok() && r.th.ok(); }) ? 0 : 1;
    }
    if (o.experiment == "fig2") {
      const MeshModStudy s = run_mesh_mod_study(cfg, Ns.front(), pattern);
      if (!write_text(o.out, mesh_mod_csv(s), out, err))
        return 1;
      if (!o.log.empty() && !write_text(o.log, s.to_json().dump(2) + "\n", out, err))
        return 1;
      return 0;
    }

    std::vector<CaseResult> rows;
    std::vector<double> sorted_ras = Ras;
    std::sort(sorted_ras.begin(), sorted_ras.end());
    for (double r : sorted_ras) {
      cfg.Ra = r;
      auto part = run_convergence(cfg, Ns, pattern);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    if (!write_text(o.out, convergence_csv(rows), out, err))
      return 1;
    if (!o.log.empty()) {
      nlohmann::json logs = nlohmann::json::array();
      for (const auto &r : rows)
        if (r.log) {
          nlohmann::json j = r.log->to_json();
          j["N"] = r.report.N;
          logs.push_back(std::move(j));
        }
      if (!write_text(o.log, logs.dump(2) + "\n", out, err))
        return 1;
    }
    bool ok = true;
    for (const auto &r : rows)
      if (!r.ok()) {
        err << "error: N=" << r.report.N << ": " << r.status << "\n";
        ok = false;
      }
    return ok ? 0 : 1;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

} // namespace svstokes
