#include "aptsim/sweep.hpp"

#include <atomic>
#include <thread>

#include "aptsim/errors.hpp"
#include "aptsim/numerics.hpp"

namespace aptsim {

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::ME: return "me";
    case Engine::NHH: return "nhh";
    case Engine::Gaussian: return "gaussian";
    case Engine::Coherent: return "coherent";
  }
  return "?";
}

std::optional<Engine> engine_from_name(const std::string& name) {
  if (name == "me") return Engine::ME;
  if (name == "nhh") return Engine::NHH;
  if (name == "gaussian") return Engine::Gaussian;
  if (name == "coherent") return Engine::Coherent;
  return std::nullopt;
}

std::vector<double> default_theta_grid() { return linspace(0.0, 2.0 * pi, 33); }

CorrelationRecord run_endpoint(const ModelParams& params, Engine engine) {
  ModelParams p = params.validated();
  if (p.z_grid.empty())
    throw ValidationError("run_endpoint: params need a z_grid");
  // Only the endpoint matters; skip intermediate recording.
  p.z_grid = {0.0, p.z_grid.back()};

  switch (engine) {
    case Engine::ME: {
      if (p.scheme == Scheme::AntiPT_NHH) p.scheme = Scheme::AntiPT_Master;
      FockBasis basis = p.make_basis();
      return evolve_master(p, vacuum_density(basis)).back();
    }
    case Engine::NHH: {
      p.scheme = Scheme::AntiPT_NHH;
      FockBasis basis = p.make_basis();
      return evolve_nhh(p, vacuum_state(basis)).back();
    }
    case Engine::Gaussian: {
      auto covs = moment_ode(p, p.z_grid);
      CorrelationRecord rec = record_from_covariance(covs.back(), p.theta);
      return rec;
    }
    case Engine::Coherent: {
      p.scheme = Scheme::CoherentHermitian;
      FockBasis basis = p.make_basis();
      return evolve_coherent_pure(p, vacuum_state(basis)).back();
    }
  }
  throw ValidationError("unknown engine");
}

std::vector<SweepPoint> sweep_phase_collect(const ModelParams& params,
                                            const std::vector<double>& theta_grid,
                                            Engine engine, int workers) {
  if (theta_grid.empty()) throw ValidationError("sweep: empty theta grid");
  ModelParams base = params.validated();

  std::vector<SweepPoint> out(theta_grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= theta_grid.size()) return;
      SweepPoint& pt = out[i];
      pt.theta = theta_grid[i];
      try {
        ModelParams p = base;
        p.theta = theta_grid[i];
        CorrelationRecord rec = run_endpoint(p, engine);
        rec.theta = theta_grid[i];
        pt.record = std::move(rec);
      } catch (const std::exception& e) {
        pt.error = e.what();
      }
    }
  };

  int n_workers = workers;
  if (n_workers <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n_workers = hw == 0 ? 1 : static_cast<int>(hw);
  }
  n_workers = std::min<int>(n_workers, static_cast<int>(theta_grid.size()));
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

std::vector<CorrelationRecord> sweep_phase(const ModelParams& params,
                                           const std::vector<double>& theta_grid,
                                           Engine engine, int workers) {
  auto points = sweep_phase_collect(params, theta_grid, engine, workers);
  std::vector<CorrelationRecord> records;
  records.reserve(points.size());
  for (const auto& pt : points) {
    if (!pt.record)
      throw NumericalError("sweep failed at theta = " +
                           format_g17(pt.theta) + ": " + pt.error);
    records.push_back(*pt.record);
  }
  return records;
}

}  // namespace aptsim
