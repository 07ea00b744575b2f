#pragma once

#include "svstokes/assembly.hpp"
#include "svstokes/solvers.hpp"

#include <json.hpp>

#include <functional>
#include <optional>

namespace svstokes {

enum class Method { mixed_sv, taylor_hood, ipm };
const char *to_string(Method m);
Method method_from_string(const std::string &s);

struct StokesConfig {
  double nu = 1.0;
  double rho = 100.0;  // penalty in the velocity system
  double rho_p = -1.0; // multiplier step; negative means "same as rho"
  double tol = 1e-11;
  int max_iter = 100;
  Method method = Method::mixed_sv;
  BcMode bc_mode = BcMode::compatible;
  MeshModMode mesh_mod = MeshModMode::full;
  int k = 4;
  double Ra = 1.0;

  double multiplier_step() const { return rho_p > 0.0 ? rho_p : rho; }
  // Throws Error on nu, rho, tol <= 0, k < 1 or max_iter < 1.
  void validate() const;
};

nlohmann::json to_json(const StokesConfig &cfg);

struct SolveReport {
  double div_norm = 0.0;      // ||div u_h||_L2
  double boundary_flux = 0.0; // net flux of g_h
  double multiplier = 0.0;    // Lagrange multiplier of the mean constraint
  double rcond = 0.0;
  std::size_t velocity_dofs = 0;
  std::size_t pressure_dofs = 0;
};

struct StokesSolution {
  FeFunction u;
  FeFunction p;
  SolveReport report;
};

using MeshPtr = std::shared_ptr<const Triangulation>;

// Velocity: continuous vector P_k. Pressure: discontinuous P_{k-1} with zero
// mean. The mesh is used as given; modification is the caller's business.
StokesSolution solve_mixed_sv(const StokesConfig &cfg, MeshPtr mesh, const VectorField &g, const VectorField &f,
                              const SaddleOptions &opt = {});
// Same with continuous P_{k-1} pressure.
StokesSolution solve_taylor_hood(const StokesConfig &cfg, MeshPtr mesh, const VectorField &g,
                                 const VectorField &f, const SaddleOptions &opt = {});
// (nu K + rho D) u = F with u = g_h on the boundary. No pressure.
FeFunction solve_graddiv(const StokesConfig &cfg, MeshPtr mesh, const VectorField &g, const VectorField &f);

struct IpmErrors {
  double err_l2_u = 0.0;
  double err_h1_u = 0.0;
  double err_l2_p = 0.0;
};

struct IpmRecord {
  int i = 0;
  double div_norm = 0.0;
  double energy = 0.0;      // J_i(u_i)
  double energy_prev = 0.0; // J_i(u_{i-1})
  std::optional<IpmErrors> errors;
};

enum class IpmStatus { converged, max_iter_reached };
const char *to_string(IpmStatus s);

struct RateFit {
  enum class Status { ok, no_decay, too_few };
  Status status = Status::too_few;
  double theta = 0.0;
  double beta = 0.0;
  int points = 0;
};
const char *to_string(RateFit::Status s);

struct IpmLog {
  StokesConfig config;
  std::vector<IpmRecord> records;
  IpmStatus status = IpmStatus::max_iter_reached;
  RateFit fit;

  std::vector<double> div_norms() const;
  nlohmann::json to_json() const;
};

struct IpmOptions {
  // Error norms of each iterate against a known solution.
  std::function<IpmErrors(const FeFunction &u, const FeFunction &p)> exact;
  // Called with every velocity iterate.
  std::function<void(int i, const FeFunction &u)> observer;
  // Re-factor the matrix at every iteration (reference path for testing).
  bool refactor_each_step = false;
};

struct IpmResult {
  FeFunction u;
  FeFunction p;
  FeFunction phi;
  IpmLog log;
};

IpmResult run_ipm(const StokesConfig &cfg, MeshPtr mesh, const VectorField &g, const VectorField &f,
                  const IpmOptions &opt = {});

// (nu/2)|grad u|^2 + (rho/2)|div u|^2 - nu (grad u_prev, grad u)
double ipm_energy(const FeFunction &u, const FeFunction &u_prev, double nu, double rho);

// Geometric fit of the divergence norms over [100 tol, 0.01 first]; theta
// inverts to beta = sqrt(nu (1 - theta) / (rho theta)).
RateFit fit_contraction(const std::vector<double> &div_norms, double tol, double nu, double rho);
RateFit estimate_infsup_from_rate(const IpmLog &log, double nu, double rho);

// div u interpolated at the nodes of the discontinuous P_{k-1} space; exact
// because div u is a polynomial of that degree on every cell.
FeFunction nodal_divergence(const FeFunction &u, std::shared_ptr<const FeSpace> pspace);
// Discontinuous P_{k-1} pressure div(phi), shifted to zero mean.
FeFunction pressure_from_multiplier(const FeFunction &phi, std::shared_ptr<const FeSpace> pspace);
// Subtracts the mean from a scalar function whose basis sums to one.
void remove_mean(FeFunction &p);
double l2_divergence(const FeFunction &u);

} // namespace svstokes
