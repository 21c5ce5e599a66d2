#include "aptsim/propagate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "aptsim/errors.hpp"
#include "aptsim/numerics.hpp"

namespace aptsim {

double default_step(const ModelParams& p, double length) {
  double rate = std::max(p.Gamma, p.g_eps);
  if (p.kappa) rate = std::max(rate, *p.kappa);
  if (p.gamma_c) rate = std::max(rate, *p.gamma_c);
  double h = length > 0.0 ? length / 400.0 : 1.0;
  if (rate > 0.0) h = std::min(h, 1.0 / (40.0 * rate));
  return h;
}

namespace {

std::vector<double> checked_grid(const ModelParams& p) {
  if (p.z_grid.empty())
    throw ValidationError("propagation needs a non-empty z_grid");
  return p.z_grid;
}

// Advance y by one RK4 step of dy/dz = f(y).
template <typename State, typename Rhs>
void rk4_step(State& y, double h, const Rhs& f, State& k1, State& k2, State& k3,
              State& k4, State& tmp) {
  k1 = f(y);
  tmp = y + (0.5 * h) * k1;
  k2 = f(tmp);
  tmp = y + (0.5 * h) * k2;
  k3 = f(tmp);
  tmp = y + h * k3;
  k4 = f(tmp);
  y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_density(const DensityMatrix& rho, double z, bool positivity) {
  const double tr_err = std::abs(rho.trace().real() - 1.0);
  const double herm = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
  if (!(tr_err < 1e-6) || std::isnan(tr_err))
    throw NumericalError("master equation unstable: |trace-1| = " +
                         std::to_string(tr_err) + " at z = " +
                         std::to_string(z));
  if (herm > 1e-10)
    throw NumericalError("master equation unstable: Hermiticity drift " +
                         std::to_string(herm) + " at z = " + std::to_string(z));
  if (positivity) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho,
                                                    Eigen::EigenvaluesOnly);
    const double min_ev = es.eigenvalues().minCoeff();
    if (min_ev < -1e-8)
      throw NumericalError("density matrix lost positivity (min eigenvalue " +
                           std::to_string(min_ev) + ") at z = " +
                           std::to_string(z));
  }
}

}  // namespace

Trajectory evolve_master(const ModelParams& params, const DensityMatrix& rho0,
                         const EvolveOptions& opts) {
  ModelParams p = params.validated();
  if (p.scheme == Scheme::AntiPT_NHH)
    throw ValidationError("evolve_master: use evolve_nhh for the NHH scheme");
  const auto grid = checked_grid(p);
  FockBasis basis = p.make_basis();
  if (rho0.rows() != basis.size() || rho0.cols() != basis.size())
    throw ValidationError("evolve_master: rho0/basis dimension mismatch");
  const double herm0 = (rho0 - rho0.adjoint().eval()).cwiseAbs().maxCoeff();
  if (herm0 > 1e-10)
    throw ValidationError("evolve_master: rho0 is not Hermitian");
  {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho0,
                                                    Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw ValidationError("evolve_master: rho0 is not positive semidefinite");
  }

  LindbladSystem sys = make_system(p, basis);
  FockObservables obs(basis);
  const bool jumps = opts.include_jumps;
  auto rhs = [&](const DensityMatrix& r) {
    return jumps ? sys.rhs(r) : sys.no_jump_rhs(r);
  };

  const double trace0 = rho0.trace().real();
  const double h_target =
      opts.step.value_or(default_step(p, grid.back()));
  if (!(h_target > 0.0)) throw ValidationError("integrator step must be > 0");

  Trajectory traj;
  traj.scheme = p.scheme;
  traj.params = p;
  DensityMatrix rho = rho0;
  DensityMatrix k1, k2, k3, k4, tmp;

  auto record = [&](double z) {
    traj.z_samples.push_back(z);
    traj.records.push_back(obs.record(rho, z, p.theta));
    if (opts.record_states) traj.rho_samples.push_back(rho);
    // Trace is conserved only with the recycling term present. Positivity is
    // monitored, not enforced, so truncation and step errors surface.
    if (jumps && std::abs(trace0 - 1.0) < 1e-9)
      check_density(rho, z, opts.check_positivity);
  };

  double z = 0.0;
  std::size_t start = 0;
  if (grid.front() == 0.0) {
    record(0.0);
    start = 1;
  }
  for (std::size_t i = start; i < grid.size(); ++i) {
    const double seg = grid[i] - z;
    const int steps = std::max(1, static_cast<int>(std::ceil(seg / h_target)));
    const double h = seg / steps;
    for (int s = 0; s < steps; ++s) rk4_step(rho, h, rhs, k1, k2, k3, k4, tmp);
    z = grid[i];
    record(z);
  }
  return traj;
}

namespace {

Trajectory evolve_vector(const ModelParams& p, const FockBasis& basis,
                         const SparseOp& generator, const StateVector& psi0,
                         const EvolveOptions& opts, Scheme tag,
                         bool norm_conserved) {
  const auto grid = checked_grid(p);
  if (psi0.size() != basis.size())
    throw ValidationError("evolve: psi0/basis dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-9)
    throw ValidationError("evolve: psi0 must be normalized");

  FockObservables obs(basis);
  auto rhs = [&](const StateVector& v) {
    return StateVector(-iu * (generator * v));
  };

  const double h_target = opts.step.value_or(default_step(p, grid.back()));
  if (!(h_target > 0.0)) throw ValidationError("integrator step must be > 0");

  Trajectory traj;
  traj.scheme = tag;
  traj.params = p;
  StateVector psi = psi0;
  StateVector k1, k2, k3, k4, tmp;
  double last_norm = psi.norm();

  auto record = [&](double z) {
    traj.z_samples.push_back(z);
    traj.records.push_back(obs.record(psi, z, p.theta));
    if (opts.record_states) traj.psi_samples.push_back(psi);
    const double norm = psi.norm();
    const double limit = norm_conserved ? 1.0 + 1e-9 : last_norm * (1.0 + 1e-9);
    if (std::isnan(norm) || norm > limit)
      throw NumericalError("state-vector propagation unstable: norm " +
                           std::to_string(norm) + " at z = " +
                           std::to_string(z));
    last_norm = norm;
  };

  double z = 0.0;
  std::size_t start = 0;
  if (grid.front() == 0.0) {
    record(0.0);
    start = 1;
  }
  for (std::size_t i = start; i < grid.size(); ++i) {
    const double seg = grid[i] - z;
    const int steps = std::max(1, static_cast<int>(std::ceil(seg / h_target)));
    const double h = seg / steps;
    for (int s = 0; s < steps; ++s) rk4_step(psi, h, rhs, k1, k2, k3, k4, tmp);
    z = grid[i];
    record(z);
  }
  return traj;
}

}  // namespace

Trajectory evolve_nhh(const ModelParams& params, const StateVector& psi0,
                      const EvolveOptions& opts) {
  ModelParams p = params.validated();
  FockBasis basis = p.make_basis();
  SparseOp h_eff = build_h_nl(p, basis) + build_h_linear_eff(p, basis);
  h_eff.makeCompressed();
  return evolve_vector(p, basis, h_eff, psi0, opts, Scheme::AntiPT_NHH, false);
}

Trajectory evolve_coherent_pure(const ModelParams& params,
                                const StateVector& psi0,
                                const EvolveOptions& opts) {
  ModelParams p = params.validated();
  FockBasis basis = p.make_basis();
  SparseOp h = build_h_coherent(p, basis);
  return evolve_vector(p, basis, h, psi0, opts, Scheme::CoherentHermitian,
                       true);
}

ClassicalTrajectory evolve_classical(double Gamma, cplx a0, cplx b0,
                                     const std::vector<double>& z_grid) {
  if (Gamma < 0.0) throw ValidationError("evolve_classical: Gamma must be >= 0");
  ClassicalTrajectory traj;
  traj.z_samples = z_grid;
  traj.amplitudes.reserve(z_grid.size());
  const cplx s = a0 + b0;
  for (double z : z_grid) {
    const double decay = -std::expm1(-2.0 * Gamma * z);  // 1 - e^{-2 Gamma z}
    const cplx shift = 0.5 * s * decay;
    traj.amplitudes.emplace_back(a0 - shift, b0 - shift);
  }
  return traj;
}

}  // namespace aptsim
