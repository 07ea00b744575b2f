#pragma once

#include "svstokes/manufactured.hpp"
#include "svstokes/stokes.hpp"

#include <map>

namespace svstokes {

struct MeshSetup {
  MeshPtr mesh;
  MeshModification modification;
};

// Structured mesh of the manufactured domain with N cells per side, then
// modified according to `mode`.
MeshSetup build_mesh(const ManufacturedCase &c, int N, MeshPattern pattern, MeshModMode mode);

struct CaseResult {
  double Ra = 1.0;
  ErrorReport report;
  std::string status = "ok"; // or the failure message
  SolveReport solve;
  std::optional<IpmLog> log;

  bool ok() const { return status == "ok"; }
};

// One manufactured run at mesh size N with the method in cfg.
CaseResult run_case(const StokesConfig &cfg, int N, MeshPattern pattern);

std::vector<CaseResult> run_convergence(const StokesConfig &cfg, const std::vector<int> &Ns,
                                        MeshPattern pattern = MeshPattern::diagonal);
std::string convergence_csv(const std::vector<CaseResult> &rows);

struct RobustnessRow {
  double Ra = 0.0;
  CaseResult sv;
  CaseResult th;
};

std::vector<RobustnessRow> run_pressure_robustness(const StokesConfig &cfg, int N, const std::vector<double> &Ras,
                                                   MeshPattern pattern = MeshPattern::diagonal);
std::string robustness_csv(const std::vector<RobustnessRow> &rows);

// Largest |div u| per triangle, sampled at the degree-(k+2) lattice points.
std::vector<double> elementwise_divergence(const FeFunction &u);

struct MeshModRun {
  MeshModMode mode = MeshModMode::none;
  IpmLog log;
  MeshModification modification;
  std::vector<Vec2> centroids;
  std::vector<double> div_final;   // elementwise max |div| of the last iterate
  std::vector<double> div_matched; // same at the iteration where the full mode stopped
  int matched_iteration = 0;
  double linf_final = 0.0;
  double linf_matched = 0.0;
};

struct MeshModStudy {
  int N = 0;
  std::map<MeshModMode, MeshModRun> runs;
  // ||div u_h|| of the mixed solve on the fully modified mesh
  std::optional<double> mixed_reference;

  nlohmann::json to_json() const;
};

MeshModStudy run_mesh_mod_study(const StokesConfig &cfg, int N, MeshPattern pattern = MeshPattern::diagonal);
std::string mesh_mod_csv(const MeshModStudy &s);

// Observed order log(e1/e2)/log(2) between successive rows.
std::vector<double> observed_orders(const std::vector<double> &errors);

} // namespace svstokes
