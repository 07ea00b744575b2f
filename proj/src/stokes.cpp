#include "svstokes/stokes.hpp"

#include <cmath>

namespace svstokes {

const char *to_string(Method m) {
  switch (m) {
  case Method::mixed_sv:
    return "mixed-sv";
  case Method::taylor_hood:
    return "taylor-hood";
  case Method::ipm:
    return "ipm";
  }
  return "?";
}

Method method_from_string(const std::string &s) {
  if (s == "mixed-sv")
    return Method::mixed_sv;
  if (s == "taylor-hood")
    return Method::taylor_hood;
  if (s == "ipm")
    return Method::ipm;
  throw Error("unknown method '" + s + "'");
}

void StokesConfig::validate() const {
  if (!(nu > 0.0))
    throw Error("config: nu must be positive");
  if (!(rho > 0.0))
    throw Error("config: rho must be positive");
  if (!(tol > 0.0))
    throw Error("config: tol must be positive");
  if (k < 1)
    throw Error("config: velocity degree must be at least 1");
  if (max_iter < 1)
    throw Error("config: max_iter must be at least 1");
}

nlohmann::json to_json(const StokesConfig &cfg) {
  return {{"nu", cfg.nu},
          {"rho", cfg.rho},
          {"rho_p", cfg.multiplier_step()},
          {"tol", cfg.tol},
          {"max_iter", cfg.max_iter},
          {"method", to_string(cfg.method)},
          {"bc", to_string(cfg.bc_mode)},
          {"mesh_mod", to_string(cfg.mesh_mod)},
          {"k", cfg.k},
          {"Ra", cfg.Ra}};
}

double l2_divergence(const FeFunction &u) {
  const FeSpace &s = *u.space;
  const Tabulation tab = tabulate(s.degree(), quadrature_rule(std::max(2 * s.degree(), 1)));
  double sum = 0.0;
  for (std::size_t t = 0; t < s.mesh().n_triangles(); ++t) {
    const CellGeometry g = cell_geometry(s.mesh(), int(t));
    for (std::size_t q = 0; q < tab.rule.size(); ++q) {
      const Mat2 G = evaluate_vector_gradient(u, int(t), g, tab.at[q]);
      const double d = G[0][0] + G[1][1];
      sum += tab.rule.weights[q] * g.abs_det() * d * d;
    }
  }
  return std::sqrt(sum);
}

void remove_mean(FeFunction &p) {
  const FeSpace &s = *p.space;
  const std::vector<double> m = assemble_pressure_mean(s);
  double area = 0.0;
  for (double v : m)
    area += v;
  const double mean = dot(m, p.coefficients) / area;
  for (double &c : p.coefficients)
    c -= mean;
}

FeFunction nodal_divergence(const FeFunction &u, std::shared_ptr<const FeSpace> pspace) {
  if (pspace->element().family != Family::scalar_discontinuous || pspace->degree() != u.space->degree() - 1)
    throw Error("nodal_divergence: discontinuous space of one degree lower required");
  const auto nodes = lattice(pspace->degree());
  std::vector<BasisTabulation> tabs;
  for (const auto &a : nodes)
    tabs.push_back(reference_basis(u.space->degree(), lattice_point(a, pspace->degree())));
  FeFunction d(pspace);
  for (std::size_t t = 0; t < u.space->mesh().n_triangles(); ++t) {
    const CellGeometry g = cell_geometry(u.space->mesh(), int(t));
    const auto dofs = pspace->cell_dofs(int(t));
    for (std::size_t i = 0; i < tabs.size(); ++i) {
      const Mat2 G = evaluate_vector_gradient(u, int(t), g, tabs[i]);
      d.coefficients[dofs[i]] = G[0][0] + G[1][1];
    }
  }
  return d;
}

FeFunction pressure_from_multiplier(const FeFunction &phi, std::shared_ptr<const FeSpace> pspace) {
  FeFunction p = project_dg(pspace, [&](int t, const Barycentric &b) { return evaluate_divergence(phi, t, b); });
  remove_mean(p);
  return p;
}

namespace {

std::shared_ptr<const FeSpace> velocity_space(MeshPtr mesh, int k) {
  return build_space(std::move(mesh), {Family::vector_continuous, k});
}

StokesSolution saddle_solve(const StokesConfig &cfg, MeshPtr mesh, const VectorField &g, const VectorField &f,
                            ElementKind pressure, const SaddleOptions &opt) {
  cfg.validate();
  auto vspace = velocity_space(mesh, cfg.k);
  auto pspace = build_space(mesh, pressure, true);

  const SparseMatrix K = assemble_stiffness(*vspace, cfg.nu);
  const SparseMatrix B = assemble_div_coupling(*vspace, *pspace);
  const BoundaryData bc = make_boundary_data(vspace, g, cfg.bc_mode);
  const AssembledSystem sys = apply_dirichlet(K, assemble_load(*vspace, f), bc);
  const auto [Bc, gp] = eliminate_coupling(B, bc);

  // The symmetric block carries -p: nu K u - B^T p = F.
  SaddleSolution s = solve_saddle(sys.matrix, Bc, assemble_pressure_mean(*pspace), sys.rhs, gp, opt);
  for (double &v : s.p)
    v = -v;

  StokesSolution out{FeFunction(vspace, std::move(s.u)), FeFunction(pspace, std::move(s.p)), {}};
  out.report.div_norm = l2_divergence(out.u);
  out.report.boundary_flux = bc.flux;
  out.report.multiplier = s.lambda;
  out.report.rcond = s.rcond;
  out.report.velocity_dofs = vspace->n_dofs();
  out.report.pressure_dofs = pspace->n_dofs();
  return out;
}

// J(u) with precomputed unit stiffness and grad-div matrices.
double energy(const SparseMatrix &K1, const SparseMatrix &D, const std::vector<double> &u,
              const std::vector<double> &u_prev, double nu, double rho) {
  const std::vector<double> Ku = K1.multiply(u);
  return 0.5 * nu * dot(u, Ku) + 0.5 * rho * D.quadratic_form(u) - nu * dot(u_prev, Ku);
}

} // namespace

StokesSolution solve_mixed_sv(const StokesConfig &cfg, MeshPtr mesh, const VectorField &g, const VectorField &f,
                              const SaddleOptions &opt) {
  return saddle_solve(cfg, std::move(mesh), g, f, {Family::scalar_discontinuous, cfg.k - 1}, opt);
}

StokesSolution solve_taylor_hood(const StokesConfig &cfg, MeshPtr mesh, const VectorField &g,
                                 const VectorField &f, const SaddleOptions &opt) {
  if (cfg.k < 2)
    throw UnsupportedError("taylor-hood needs velocity degree >= 2");
  return saddle_solve(cfg, std::move(mesh), g, f, {Family::scalar_continuous, cfg.k - 1}, opt);
}

FeFunction solve_graddiv(const StokesConfig &cfg, MeshPtr mesh, const VectorField &g, const VectorField &f) {
  cfg.validate();
  auto vspace = velocity_space(std::move(mesh), cfg.k);
  const SparseMatrix A = assemble_stiffness(*vspace, 1.0).combine(cfg.nu, assemble_graddiv(*vspace), cfg.rho);
  const BoundaryData bc = make_boundary_data(vspace, g, cfg.bc_mode);
  const AssembledSystem sys = apply_dirichlet(A, assemble_load(*vspace, f), bc);
  return FeFunction(vspace, factor_spd(sys.matrix).solve(sys.rhs));
}

double ipm_energy(const FeFunction &u, const FeFunction &u_prev, double nu, double rho) {
  if (u.space != u_prev.space && u.space->n_dofs() != u_prev.space->n_dofs())
    throw Error("ipm_energy: functions live in different spaces");
  return energy(assemble_stiffness(*u.space, 1.0), assemble_graddiv(*u.space), u.coefficients,
                u_prev.coefficients, nu, rho);
}

const char *to_string(IpmStatus s) { return s == IpmStatus::converged ? "converged" : "max_iter_reached"; }

const char *to_string(RateFit::Status s) {
  switch (s) {
  case RateFit::Status::ok:
    return "ok";
  case RateFit::Status::no_decay:
    return "no_decay";
  case RateFit::Status::too_few:
    return "too_few";
  }
  return "?";
}

std::vector<double> IpmLog::div_norms() const {
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto &r : records)
    v.push_back(r.div_norm);
  return v;
}

nlohmann::json IpmLog::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto &r : records) {
    nlohmann::json j = {{"i", r.i}, {"div_norm", r.div_norm}, {"energy", r.energy}};
    if (r.errors) {
      j["err_l2_u"] = r.errors->err_l2_u;
      j["err_h1_u"] = r.errors->err_h1_u;
      j["err_l2_p"] = r.errors->err_l2_p;
    } else {
      j["err_l2_u"] = nullptr;
      j["err_h1_u"] = nullptr;
      j["err_l2_p"] = nullptr;
    }
    recs.push_back(std::move(j));
  }
  nlohmann::json out = {{"config", svstokes::to_json(config)},
                        {"iterations", recs},
                        {"status", to_string(status)},
                        {"fit_status", to_string(fit.status)}};
  out["theta_obs"] = fit.status == RateFit::Status::too_few ? nlohmann::json(nullptr) : nlohmann::json(fit.theta);
  out["beta_est"] = fit.status == RateFit::Status::ok ? nlohmann::json(fit.beta) : nlohmann::json(nullptr);
  return out;
}

namespace {

// Least-squares slope of log(norm) against the iteration number.
double geometric_ratio(const std::vector<std::pair<int, double>> &pts) {
  double si = 0, sl = 0, sii = 0, sil = 0;
  for (const auto &[i, v] : pts) {
    const double l = std::log(v);
    si += i;
    sl += l;
    sii += double(i) * i;
    sil += i * l;
  }
  const double n = double(pts.size());
  return std::exp((n * sil - si * sl) / (n * sii - si * si));
}

} // namespace

RateFit fit_contraction(const std::vector<double> &norms, double tol, double nu, double rho) {
  RateFit fit;
  if (norms.empty() || !(norms.front() > 0.0))
    return fit;
  const double lo = 100.0 * tol, hi = 0.01 * norms.front();
  std::vector<std::pair<int, double>> window, prefloor;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (!(norms[i] > 0.0))
      continue;
    if (norms[i] >= lo)
      prefloor.emplace_back(int(i) + 1, norms[i]);
    if (norms[i] >= lo && norms[i] <= hi)
      window.emplace_back(int(i) + 1, norms[i]);
  }
  if (window.size() >= 4) {
    fit.points = int(window.size());
    fit.theta = geometric_ratio(window);
    fit.status = fit.theta < 1.0 ? RateFit::Status::ok : RateFit::Status::no_decay;
  } else if (prefloor.size() >= 4) {
    // nothing decayed two decades: a plateau if the ratio is essentially one
    fit.points = int(prefloor.size());
    fit.theta = geometric_ratio(prefloor);
    fit.status = fit.theta > 0.99 ? RateFit::Status::no_decay : RateFit::Status::too_few;
  }
  if (fit.status == RateFit::Status::ok)
    fit.beta = std::sqrt(nu * (1.0 - fit.theta) / (rho * fit.theta));
  return fit;
}

RateFit estimate_infsup_from_rate(const IpmLog &log, double nu, double rho) {
  return fit_contraction(log.div_norms(), log.config.tol, nu, rho);
}

IpmResult run_ipm(const StokesConfig &cfg, MeshPtr mesh, const VectorField &g, const VectorField &f,
                  const IpmOptions &opt) {
  cfg.validate();
  auto vspace = velocity_space(mesh, cfg.k);
  auto pspace = build_space(mesh, {Family::scalar_discontinuous, cfg.k - 1}, true);

  const SparseMatrix K1 = assemble_stiffness(*vspace, 1.0);
  const SparseMatrix D = assemble_graddiv(*vspace);
  const SparseMatrix A = K1.combine(cfg.nu, D, cfg.rho);
  const SparseMatrix Bt = assemble_div_coupling(*vspace, *pspace).transpose();
  const std::vector<double> F = assemble_load(*vspace, f);
  const BoundaryData bc = make_boundary_data(vspace, g, cfg.bc_mode);
  const AssembledSystem sys = apply_dirichlet(A, F, bc);
  std::optional<SpdFactorization> fact;
  fact.emplace(factor_spd(sys.matrix));

  const std::size_t n = vspace->n_dofs();
  const double step = cfg.multiplier_step();
  IpmResult res;
  res.log.config = cfg;
  res.phi = FeFunction(vspace);
  // div(phi) is tracked in the pressure space: D phi = B^T div(phi), and phi
  // itself grows linearly with i, so forming D phi would lose digits.
  FeFunction pressure(pspace);
  std::vector<double> u_prev(n, 0.0);

  for (int i = 1; i <= cfg.max_iter; ++i) {
    std::vector<double> load = F;
    Bt.multiply_add(pressure.coefficients, load);
    const std::vector<double> rhs = apply_dirichlet_rhs(A, load, bc);
    if (opt.refactor_each_step && i > 1)
      fact.emplace(factor_spd(sys.matrix));
    FeFunction ui(vspace, fact->solve(rhs));

    IpmRecord rec;
    rec.i = i;
    // elementwise quadrature; u^T D u loses half the digits to cancellation
    rec.div_norm = l2_divergence(ui);
    rec.energy = energy(K1, D, ui.coefficients, u_prev, cfg.nu, cfg.rho);
    rec.energy_prev = energy(K1, D, u_prev, u_prev, cfg.nu, cfg.rho);
    for (std::size_t j = 0; j < n; ++j)
      res.phi.coefficients[j] -= step * ui.coefficients[j];
    const FeFunction div_u = nodal_divergence(ui, pspace);
    for (std::size_t j = 0; j < pspace->n_dofs(); ++j)
      pressure.coefficients[j] -= step * div_u.coefficients[j];

    res.u = std::move(ui);
    if (opt.exact) {
      FeFunction p = pressure;
      remove_mean(p);
      rec.errors = opt.exact(res.u, p);
    }
    if (opt.observer)
      opt.observer(i, res.u);
    res.log.records.push_back(rec);
    u_prev = res.u.coefficients;
    if (rec.div_norm < cfg.tol) {
      res.log.status = IpmStatus::converged;
      break;
    }
  }
  res.p = std::move(pressure);
  remove_mean(res.p);
  res.log.fit = estimate_infsup_from_rate(res.log, cfg.nu, cfg.rho);
  return res;
}

} // namespace svstokes
