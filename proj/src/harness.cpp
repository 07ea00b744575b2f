#include "svstokes/harness.hpp"

#include <algorithm>
#include <cstdio>

namespace svstokes {

MeshSetup build_mesh(const ManufacturedCase &c, int N, MeshPattern pattern, MeshModMode mode) {
  if (N < 1)
    throw Error("mesh size N must be positive");
  ModifiedMesh m = apply_modification(generate_rect_mesh(c.x0, c.x1, c.y0, c.y1, N, pattern), mode, true);
  return {std::make_shared<const Triangulation>(std::move(m.mesh)), std::move(m.report)};
}

CaseResult run_case(const StokesConfig &cfg, int N, MeshPattern pattern) {
  CaseResult r;
  r.Ra = cfg.Ra;
  r.report.N = N;
  const ManufacturedCase c = manufactured(cfg.Ra);
  const int qdeg = std::min(2 * cfg.k + 4, kMaxQuadratureDegree);
  try {
    const MeshSetup ms = build_mesh(c, N, pattern, cfg.mesh_mod);
    r.report.h = ms.mesh->h_max();
    if (cfg.method == Method::ipm) {
      IpmResult res = run_ipm(cfg, ms.mesh, c.velocity(), c.load());
      r.report = error_norms(res.u, res.p, c, qdeg);
      r.report.iterations = int(res.log.records.size());
      r.solve.div_norm = r.report.div_norm;
      r.solve.velocity_dofs = res.u.space->n_dofs();
      r.solve.pressure_dofs = res.p.space->n_dofs();
      r.log = std::move(res.log);
    } else {
      StokesSolution s = cfg.method == Method::mixed_sv ? solve_mixed_sv(cfg, ms.mesh, c.velocity(), c.load())
                                                        : solve_taylor_hood(cfg, ms.mesh, c.velocity(), c.load());
      r.report = error_norms(s.u, s.p, c, qdeg);
      r.solve = s.report;
    }
    r.report.N = N;
  } catch (const Error &e) {
    r.status = e.what();
  }
  return r;
}

std::vector<CaseResult> run_convergence(const StokesConfig &cfg, const std::vector<int> &Ns, MeshPattern pattern) {
  std::vector<int> sorted = Ns;
  std::sort(sorted.begin(), sorted.end());
  std::vector<CaseResult> rows;
  for (int N : sorted)
    rows.push_back(run_case(cfg, N, pattern));
  return rows;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string q = "\"";
  for (char ch : s)
    q += ch == '"' ? std::string("\"\"") : std::string(1, ch == '\n' ? ' ' : ch);
  return q + "\"";
}

} // namespace

std::string convergence_csv(const std::vector<CaseResult> &rows) {
  std::string out = "N,h,err_l2_u,err_h1_u,err_h1semi_u,div_norm,err_l2_p,iterations,status\n";
  for (const auto &r : rows) {
    const auto &e = r.report;
    out += std::to_string(e.N) + "," + fmt(e.h) + "," + fmt(e.err_l2_u) + "," + fmt(e.err_h1_u) + "," +
           fmt(e.err_h1semi_u) + "," + fmt(e.div_norm) + "," + fmt(e.err_l2_p) + "," +
           std::to_string(e.iterations) + "," + csv_field(r.status) + "\n";
  }
  return out;
}

std::vector<RobustnessRow> run_pressure_robustness(const StokesConfig &cfg, int N, const std::vector<double> &Ras,
                                                   MeshPattern pattern) {
  std::vector<double> sorted = Ras;
  std::sort(sorted.begin(), sorted.end());
  std::vector<RobustnessRow> rows;
  for (double Ra : sorted) {
    StokesConfig c = cfg;
    c.Ra = Ra;
    RobustnessRow row;
    row.Ra = Ra;
    c.method = Method::mixed_sv;
    row.sv = run_case(c, N, pattern);
    c.method = Method::taylor_hood;
    row.th = run_case(c, N, pattern);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string robustness_csv(const std::vector<RobustnessRow> &rows) {
  std::string out = "Ra,sv_err_h1semi_u,sv_err_l2_p,th_err_h1semi_u,th_err_l2_p,status\n";
  for (const auto &r : rows) {
    std::string status = r.sv.ok() && r.th.ok() ? "ok" : (r.sv.ok() ? r.th.status : r.sv.status);
    out += fmt(r.Ra) + "," + fmt(r.sv.report.err_h1semi_u) + "," + fmt(r.sv.report.err_l2_p) + "," +
           fmt(r.th.report.err_h1semi_u) + "," + fmt(r.th.report.err_l2_p) + "," + csv_field(status) + "\n";
  }
  return out;
}

std::vector<double> elementwise_divergence(const FeFunction &u) {
  const FeSpace &s = *u.space;
  const auto pts = lattice(s.degree() + 2);
  std::vector<BasisTabulation> tabs;
  for (const auto &a : pts)
    tabs.push_back(reference_basis(s.degree(), lattice_point(a, s.degree() + 2)));
  std::vector<double> out(s.mesh().n_triangles(), 0.0);
  for (std::size_t t = 0; t < out.size(); ++t) {
    const CellGeometry g = cell_geometry(s.mesh(), int(t));
    for (const auto &tab : tabs) {
      const Mat2 G = evaluate_vector_gradient(u, int(t), g, tab);
      out[t] = std::max(out[t], std::abs(G[0][0] + G[1][1]));
    }
  }
  return out;
}

namespace {

double max_of(const std::vector<double> &v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

MeshModRun run_mode(const StokesConfig &cfg, const ManufacturedCase &c, int N, MeshPattern pattern,
                    MeshModMode mode, int match_at) {
  MeshModRun run;
  run.mode = mode;
  StokesConfig mc = cfg;
  mc.method = Method::ipm;
  mc.mesh_mod = mode;
  const MeshSetup ms = build_mesh(c, N, pattern, mode);
  run.modification = ms.modification;
  for (std::size_t t = 0; t < ms.mesh->n_triangles(); ++t) {
    const auto &tr = ms.mesh->triangles()[t];
    const auto &P = ms.mesh->vertices();
    run.centroids.push_back((1.0 / 3.0) * (P[tr[0]] + P[tr[1]] + P[tr[2]]));
  }
  IpmOptions opt;
  opt.observer = [&](int i, const FeFunction &u) {
    if (i == match_at) {
      run.div_matched = elementwise_divergence(u);
      run.matched_iteration = i;
    }
  };
  IpmResult res = run_ipm(mc, ms.mesh, c.velocity(), c.load(), opt);
  run.div_final = elementwise_divergence(res.u);
  if (run.div_matched.empty()) {
    run.div_matched = run.div_final;
    run.matched_iteration = int(res.log.records.size());
  }
  run.linf_final = max_of(run.div_final);
  run.linf_matched = max_of(run.div_matched);
  run.log = std::move(res.log);
  return run;
}

} // namespace

MeshModStudy run_mesh_mod_study(const StokesConfig &cfg, int N, MeshPattern pattern) {
  const ManufacturedCase c = manufactured(cfg.Ra);
  MeshModStudy study;
  study.N = N;
  // the fully modified mesh sets the iteration count the others are compared at
  MeshModRun full = run_mode(cfg, c, N, pattern, MeshModMode::full, -1);
  const int match = int(full.log.records.size());
  study.runs.emplace(MeshModMode::full, std::move(full));
  for (MeshModMode m : {MeshModMode::none, MeshModMode::corner})
    study.runs.emplace(m, run_mode(cfg, c, N, pattern, m, match));
  try {
    StokesConfig mc = cfg;
    mc.method = Method::mixed_sv;
    mc.mesh_mod = MeshModMode::full;
    study.mixed_reference =
        solve_mixed_sv(mc, build_mesh(c, N, pattern, MeshModMode::full).mesh, c.velocity(), c.load()).report.div_norm;
  } catch (const Error &) {
    study.mixed_reference.reset();
  }
  return study;
}

nlohmann::json MeshModStudy::to_json() const {
  nlohmann::json out;
  out["N"] = N;
  out["mixed_reference_div_norm"] = mixed_reference ? nlohmann::json(*mixed_reference) : nlohmann::json(nullptr);
  nlohmann::json modes = nlohmann::json::object();
  for (const auto &[mode, run] : runs) {
    nlohmann::json j = run.log.to_json();
    j["swaps"] = run.modification.swaps.size();
    j["splits"] = run.modification.splits.size();
    j["matched_iteration"] = run.matched_iteration;
    j["linf_div_final"] = run.linf_final;
    j["linf_div_matched"] = run.linf_matched;
    nlohmann::json field = nlohmann::json::array();
    for (std::size_t t = 0; t < run.centroids.size(); ++t)
      field.push_back({run.centroids[t].x, run.centroids[t].y, run.div_final[t], run.div_matched[t]});
    j["div_field"] = std::move(field);
    modes[to_string(mode)] = std::move(j);
  }
  out["modes"] = std::move(modes);
  return out;
}

std::string mesh_mod_csv(const MeshModStudy &s) {
  std::string out = "mode,iterations,status,final_div_norm,linf_div_final,matched_iteration,linf_div_matched\n";
  for (MeshModMode m : {MeshModMode::none, MeshModMode::corner, MeshModMode::full}) {
    const auto it = s.runs.find(m);
    if (it == s.runs.end())
      continue;
    const MeshModRun &r = it->second;
    const double last = r.log.records.empty() ? 0.0 : r.log.records.back().div_norm;
    out += std::string(to_string(m)) + "," + std::to_string(r.log.records.size()) + "," + to_string(r.log.status) +
           "," + fmt(last) + "," + fmt(r.linf_final) + "," + std::to_string(r.matched_iteration) + "," +
           fmt(r.linf_matched) + "\n";
  }
  return out;
}

std::vector<double> observed_orders(const std::vector<double> &e) {
  std::vector<double> out;
  for (std::size_t i = 1; i < e.size(); ++i)
    out.push_back(std::log(e[i - 1] / e[i]) / std::log(2.0));
  return out;
}

} // namespace svstokes
