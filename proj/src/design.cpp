#include "aptsim/design.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "aptsim/errors.hpp"
#include "aptsim/types.hpp"

namespace aptsim::design {

namespace {
constexpr double kSpeedOfLight = 299792458.0;          // m/s
constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
}  // namespace

double qpm_period(double n_pump, double n_fund, double lambda_fund) {
  if (lambda_fund <= 0.0) throw ValidationError("qpm_period: wavelength <= 0");
  if (!(n_pump > n_fund))
    throw RegimeError("qpm_period: no phase matching, needs n_pump > n_fund");
  return lambda_fund / (2.0 * (n_pump - n_fund));
}

double qpm_mismatch(double n_pump, double n_fund, double lambda_fund,
                    double period) {
  const double lambda_pump = 0.5 * lambda_fund;
  return 2.0 * pi * n_pump / lambda_pump - 4.0 * pi * n_fund / lambda_fund -
         2.0 * pi / period;
}

double hopping_rate(double l_beat) {
  if (l_beat <= 0.0) throw ValidationError("hopping_rate: beating length <= 0");
  return pi / (2.0 * l_beat);
}

double effective_coupling(double kappa, double gamma_c) {
  if (gamma_c <= 0.0)
    throw ValidationError("effective_coupling: gamma must be > 0");
  return kappa * kappa / gamma_c;
}

FieldGrid read_field_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open field grid file " + path);
  FieldGrid grid;
  std::string header;
  if (!std::getline(in, header))
    throw ValidationError(path + ": missing header line");
  {
    std::istringstream hs(header);
    if (!(hs >> grid.nx >> grid.ny >> grid.dx >> grid.dy))
      throw ValidationError(path + ": header must be 'nx ny dx dy' in meters");
  }
  if (grid.nx <= 0 || grid.ny <= 0 || grid.dx <= 0.0 || grid.dy <= 0.0)
    throw ValidationError(path + ": header values must be positive");
  grid.values.resize(grid.ny, grid.nx);
  for (int r = 0; r < grid.ny; ++r)
    for (int c = 0; c < grid.nx; ++c)
      if (!(in >> grid.values(r, c)))
        throw ValidationError(path + ": expected " +
                              std::to_string(grid.nx * grid.ny) +
                              " field values");
  return grid;
}

OverlapResult overlap_and_area(const FieldGrid& field_omega,
                               const FieldGrid& field_2omega) {
  if (field_omega.nx != field_2omega.nx || field_omega.ny != field_2omega.ny ||
      field_omega.dx != field_2omega.dx || field_omega.dy != field_2omega.dy)
    throw ValidationError("overlap_and_area: field grids do not match");
  const double cell = field_omega.dx * field_omega.dy;
  const auto& ew = field_omega.values;
  const auto& e2 = field_2omega.values;
  if (ew.cwiseAbs().maxCoeff() == 0.0 || e2.cwiseAbs().maxCoeff() == 0.0)
    throw ValidationError("overlap_and_area: field identically zero");

  // Cell-area-weighted sums of the Methods-section integrals.
  const double num = (ew.array().square() * e2.array()).sum() * cell;
  const double i3w = (ew.array().square() * ew.array().abs()).abs().sum() * cell;
  const double i32 = (e2.array().square() * e2.array().abs()).abs().sum() * cell;
  const double i2w = ew.array().square().sum() * cell;
  const double i22 = e2.array().square().sum() * cell;

  OverlapResult out;
  out.zeta = num / (std::pow(i3w, 2.0 / 3.0) * std::pow(i32, 1.0 / 3.0));
  const double a_w = std::pow(i2w, 3) / (i3w * i3w);
  const double a_2 = std::pow(i22, 3) / (i32 * i32);
  out.a_eff = std::cbrt(a_w * a_w * a_2);
  return out;
}

double nonlinear_g(double zeta, double a_eff, double n_omega, double n_2omega,
                   double lambda_omega, double lambda_2omega, double d_eff) {
  if (a_eff <= 0.0 || n_omega <= 0.0 || n_2omega <= 0.0 ||
      lambda_omega <= 0.0 || lambda_2omega <= 0.0)
    throw ValidationError("nonlinear_g: inputs must be positive");
  const double prefactor =
      std::sqrt(16.0 * pi * pi * pi /
                (kVacuumPermittivity * std::pow(n_omega, 4) *
                 n_2omega * n_2omega * lambda_omega * lambda_omega *
                 lambda_2omega));
  return prefactor * d_eff * zeta / std::sqrt(a_eff);
}

double pump_amplitude(double power, double lambda_2omega) {
  if (power < 0.0) throw ValidationError("pump_amplitude: power < 0");
  if (lambda_2omega <= 0.0)
    throw ValidationError("pump_amplitude: wavelength <= 0");
  return std::sqrt(lambda_2omega * power / (8.0 * pi * kSpeedOfLight));
}

double g_exp_from_shg(double p_fund_in, double p_shg_out, double length,
                      double lambda_omega, double lambda_2omega) {
  if (p_fund_in <= 0.0 || length <= 0.0 || lambda_omega <= 0.0 ||
      lambda_2omega <= 0.0)
    throw ValidationError("g_exp_from_shg: inputs must be positive");
  if (p_shg_out < 0.0) throw ValidationError("g_exp_from_shg: P_2w < 0");
  return std::sqrt(p_shg_out / p_fund_in * 2.0 * pi * kSpeedOfLight *
                   lambda_2omega / (length * length * lambda_omega *
                                    lambda_omega));
}

double g4_exp_normalization(double c4, const std::array<double, 4>& rates,
                            double integration_time,
                            const std::array<double, 3>& windows) {
  double denom = integration_time;
  for (double r : rates) denom *= r;
  for (double w : windows) denom *= w;
  if (!(denom > 0.0))
    throw ValidationError("g4_exp_normalization: zero denominator factor");
  return c4 / denom;
}

std::vector<CalibrationSample> read_calibration_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open calibration file " + path);
  std::vector<CalibrationSample> samples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    CalibrationSample s{};
    if (!(ls >> s.p_heater_mw >> s.p_a >> s.p_b)) {
      // Allow a single header line of column names.
      if (lineno == 1) continue;
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected 'P_heater_mW, P_a_W, P_b_W'");
    }
    samples.push_back(s);
  }
  return samples;
}

namespace {

// Residuals of the complementary fringe model, stacked (P_a then P_b).
Eigen::VectorXd fit_residuals(const Eigen::Vector4d& x,
                              const std::vector<CalibrationSample>& s) {
  const double a = x[0], c = x[1], b = x[2], th0 = x[3];
  Eigen::VectorXd r(2 * static_cast<int>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double th = b * s[i].p_heater_mw + th0;
    r(static_cast<int>(2 * i)) = a * std::cos(th) + c - s[i].p_a;
    r(static_cast<int>(2 * i + 1)) = -a * std::cos(th) + c - s[i].p_b;
  }
  return r;
}

Eigen::MatrixXd fit_jacobian(const Eigen::Vector4d& x,
                             const std::vector<CalibrationSample>& s) {
  const double a = x[0], b = x[2], th0 = x[3];
  Eigen::MatrixXd j(2 * static_cast<int>(s.size()), 4);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double p = s[i].p_heater_mw;
    const double th = b * p + th0;
    const double ct = std::cos(th);
    const double st = std::sin(th);
    const int ra = static_cast<int>(2 * i);
    const int rb = ra + 1;
    j(ra, 0) = ct;
    j(ra, 1) = 1.0;
    j(ra, 2) = -a * st * p;
    j(ra, 3) = -a * st;
    j(rb, 0) = -ct;
    j(rb, 1) = 1.0;
    j(rb, 2) = a * st * p;
    j(rb, 3) = a * st;
  }
  return j;
}

// Initial guess from the dominant discrete-Fourier component of P_a over the
// heater-power axis; keeps the cosine fit out of the reflected local minimum.
Eigen::Vector4d initial_guess(const std::vector<CalibrationSample>& s) {
  const int n = static_cast<int>(s.size());
  double mean_a = 0.0;
  for (const auto& smp : s) mean_a += smp.p_a;
  mean_a /= n;

  const double span = s.back().p_heater_mw - s.front().p_heater_mw;
  double best_mag = 0.0;
  cplx best_comp = 0.0;
  int best_k = 0;
  for (int k = 1; k <= n / 2; ++k) {
    cplx comp = 0.0;
    for (int i = 0; i < n; ++i) {
      const double phase = 2.0 * pi * k * i / n;
      comp += (s[static_cast<std::size_t>(i)].p_a - mean_a) *
              std::exp(cplx(0.0, -phase));
    }
    if (std::abs(comp) > best_mag) {
      best_mag = std::abs(comp);
      best_comp = comp;
      best_k = k;
    }
  }
  if (best_k == 0 || best_mag < 1e-300)
    throw DegenerateFitError("calibration fit: no fringe in the data");

  Eigen::Vector4d x;
  x[0] = 2.0 * best_mag / n;  // a
  x[1] = mean_a;              // c
  // k cycles across n samples of spacing span/(n-1).
  x[2] = 2.0 * pi * best_k * (n - 1) / (span * n);
  // arg(X_k) is the phase at the first sample; shift back to P_heater = 0.
  x[3] = std::arg(best_comp) - x[2] * s.front().p_heater_mw;
  return x;
}

}  // namespace

CalibrationFit phase_calibration_fit(
    const std::vector<CalibrationSample>& samples) {
  if (samples.size() < 8)
    throw ValidationError("calibration fit needs at least 8 samples");
  double lo = samples.front().p_a, hi = lo;
  for (const auto& s : samples) {
    lo = std::min({lo, s.p_a, s.p_b});
    hi = std::max({hi, s.p_a, s.p_b});
  }
  if (!(hi - lo > 1e-15 * std::max(1.0, std::abs(hi))))
    throw DegenerateFitError("calibration fit: constant samples");

  Eigen::Vector4d x = initial_guess(samples);
  double lambda = 1e-3;
  Eigen::VectorXd r = fit_residuals(x, samples);
  double cost = r.squaredNorm();
  int iter = 0;
  const int max_iter = 200;
  bool converged = false;
  while (iter < max_iter && !converged) {
    ++iter;
    Eigen::MatrixXd j = fit_jacobian(x, samples);
    Eigen::Matrix4d jtj = (j.transpose() * j).eval();
    Eigen::Vector4d jtr = j.transpose() * r;
    bool stepped = false;
    for (int tries = 0; tries < 32; ++tries) {
      Eigen::Matrix4d damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal();
      Eigen::Vector4d dx = damped.ldlt().solve(-jtr);
      Eigen::Vector4d x_new = x + dx;
      Eigen::VectorXd r_new = fit_residuals(x_new, samples);
      const double cost_new = r_new.squaredNorm();
      if (cost_new < cost) {
        const double rel = (cost - cost_new) / std::max(cost, 1e-300);
        x = x_new;
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda / 8.0, 1e-12);
        stepped = true;
        if (rel < 1e-14 || dx.norm() < 1e-14 * (1.0 + x.norm()))
          converged = true;
        break;
      }
      lambda *= 8.0;
      if (lambda > 1e12) break;
    }
    if (!stepped) break;  // no descent direction left
  }

  CalibrationFit fit;
  fit.a = x[0];
  fit.c = x[1];
  fit.b = x[2];
  fit.theta0 = x[3];
  // Normalize: positive amplitude and positive phase slope, theta0 in
  // [0, 2 pi). cos is even, so flipping b's sign is a theta0 reflection.
  if (fit.a < 0.0) {
    fit.a = -fit.a;
    fit.theta0 += pi;
  }
  if (fit.b < 0.0) {
    fit.b = -fit.b;
    fit.theta0 = -fit.theta0;
  }
  fit.theta0 = wrap_angle(fit.theta0);
  fit.residual_rms =
      std::sqrt(cost / static_cast<double>(2 * samples.size()));
  fit.iterations = iter;

  const double span =
      samples.back().p_heater_mw - samples.front().p_heater_mw;
  if (!(fit.b * span > pi))
    throw DegenerateFitError(
        "calibration fit: samples span less than pi of phase");
  return fit;
}

}  // namespace aptsim::design
