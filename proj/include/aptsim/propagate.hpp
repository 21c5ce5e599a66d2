#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "aptsim/model.hpp"
#include "aptsim/observables.hpp"
#include "aptsim/types.hpp"

namespace aptsim {

/// Options of a single propagation run.
struct EvolveOptions {
  bool include_jumps = true;   // drop the recycling term to mimic the NHH
  bool record_states = false;  // keep full rho/psi snapshots (memory!)
  std::optional<double> step;  // integrator step override, in m
  bool check_positivity = true;
};

/// Recorded z-evolution. Observables are stored per sample; full states only
/// when requested.
struct Trajectory {
  Scheme scheme = Scheme::AntiPT_Master;
  std::vector<double> z_samples;
  std::vector<CorrelationRecord> records;
  std::vector<DensityMatrix> rho_samples;  // only with record_states
  std::vector<StateVector> psi_samples;
  ModelParams params;

  const CorrelationRecord& back() const { return records.back(); }
};

/// Default integrator step: h = min(1/(40 max(Gamma, g_eps, kappa, gamma_c)),
/// L / 400). The stiffest scale is the dissipative rate; convergence is
/// certified by step halving, not assumed.
double default_step(const ModelParams& p, double length);

/// Fixed-step RK4 integration of the master equation from rho0 over
/// p.z_grid. Monitors trace, Hermiticity and positivity at every sample and
/// aborts with NumericalError on instability.
Trajectory evolve_master(const ModelParams& p, const DensityMatrix& rho0,
                         const EvolveOptions& opts = {});

/// RK4 integration of i d|psi>/dz = (H_NL + H_L') |psi>. Records the
/// unnormalized state; expectation values follow the same convention.
Trajectory evolve_nhh(const ModelParams& p, const StateVector& psi0,
                      const EvolveOptions& opts = {});

/// Norm-preserving Schrödinger evolution under the Hermitian coherent
/// reference Hamiltonian; the cheap pure-state route to the closed system.
Trajectory evolve_coherent_pure(const ModelParams& p, const StateVector& psi0,
                                const EvolveOptions& opts = {});

/// Classical single-frequency limit: d(a,b)/dz = -Gamma (a+b, a+b), solved in
/// closed form. The difference a - b is conserved exactly.
struct ClassicalTrajectory {
  std::vector<double> z_samples;
  std::vector<std::pair<cplx, cplx>> amplitudes;
};
ClassicalTrajectory evolve_classical(double Gamma, cplx a0, cplx b0,
                                     const std::vector<double>& z_grid);

}  // namespace aptsim
