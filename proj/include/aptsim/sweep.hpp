#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aptsim/observables.hpp"
#include "aptsim/propagate.hpp"

namespace aptsim {

enum class Engine { ME, NHH, Gaussian, Coherent };
const char* engine_name(Engine e);
std::optional<Engine> engine_from_name(const std::string& name);

/// The paper's three showcased phases on a 33-point uniform grid over
/// [0, 2*pi].
std::vector<double> default_theta_grid();

struct SweepPoint {
  double theta = 0.0;
  std::optional<CorrelationRecord> record;
  std::string error;  // non-empty when the solver failed at this phase
};

/// One endpoint record per grid phase, evaluated independently (and
/// concurrently when workers > 1). Solver failures are flagged per point so
/// the sweep continues. Output order and values do not depend on the worker
/// count.
std::vector<SweepPoint> sweep_phase_collect(const ModelParams& params,
                                            const std::vector<double>& theta_grid,
                                            Engine engine, int workers = 0);

/// Strict variant: throws the first per-point failure, annotated with theta.
std::vector<CorrelationRecord> sweep_phase(const ModelParams& params,
                                           const std::vector<double>& theta_grid,
                                           Engine engine, int workers = 0);

/// Endpoint record of a single run at the template's theta.
CorrelationRecord run_endpoint(const ModelParams& params, Engine engine);

}  // namespace aptsim
