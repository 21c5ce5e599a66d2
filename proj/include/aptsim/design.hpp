#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aptsim/types.hpp"

namespace aptsim::design {

// All calculators work in SI internally (m, 1/m, W, J); cm^-1 and um are
// accepted at the CLI boundary with explicit suffixes.

/// Poling period satisfying the first-order QPM condition
/// 2 pi n_pump / (lambda_fund/2) - 4 pi n_fund / lambda_fund - 2 pi / L = 0,
/// i.e. L = lambda_fund / (2 (n_pump - n_fund)).
double qpm_period(double n_pump, double n_fund, double lambda_fund);

/// Residual wavevector mismatch of a candidate period (for verification).
double qpm_mismatch(double n_pump, double n_fund, double lambda_fund,
                    double period);

/// Hopping rate from the beating length, kappa = pi / (2 L_beat).
double hopping_rate(double l_beat);

/// Effective dissipative coupling Gamma = |kappa|^2 / gamma.
double effective_coupling(double kappa, double gamma_c);

/// Discretized transverse field profile on a uniform rectangular grid.
struct FieldGrid {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;  // m
  double dy = 0.0;  // m
  Eigen::MatrixXd values;  // ny rows, nx cols
};

FieldGrid read_field_grid(const std::string& path);

struct OverlapResult {
  double zeta;
  double a_eff;  // m^2
};

/// Spatial mode overlap factor and effective area from the two field
/// profiles; zeta is invariant under separate rescaling of either field.
OverlapResult overlap_and_area(const FieldGrid& field_omega,
                               const FieldGrid& field_2omega);

/// Normalized nonlinear conversion coefficient
/// g = sqrt(16 pi^3 / (eps0 n_w^4 n_2w^2 lam_w^2 lam_2w)) d_eff zeta /
/// sqrt(A_eff), in 1/(m sqrt(J)).
double nonlinear_g(double zeta, double a_eff, double n_omega, double n_2omega,
                   double lambda_omega, double lambda_2omega, double d_eff);

/// Classical pump amplitude eps = sqrt(lambda_2w P / (8 pi c)) in sqrt(J).
double pump_amplitude(double power, double lambda_2omega);

/// SHG-derived conversion coefficient
/// g_exp = sqrt((P_2w(L)/P_w(0)) 2 pi c lam_2w / (L^2 lam_w^2)).
double g_exp_from_shg(double p_fund_in, double p_shg_out, double length,
                      double lambda_omega, double lambda_2omega);

/// Experimental normalization of the four-photon correlation,
/// C4 / (R1 R2 R3 R4 T dt1 dt2 dt3).
double g4_exp_normalization(double c4, const std::array<double, 4>& rates,
                            double integration_time,
                            const std::array<double, 3>& windows);

/// One heater calibration sample.
struct CalibrationSample {
  double p_heater_mw;  // heater power, mW
  double p_a;          // output power of waveguide a, W
  double p_b;          // output power of waveguide b, W
};

std::vector<CalibrationSample> read_calibration_csv(const std::string& path);

/// Result of fitting P_a = a cos(theta) + c, P_b = -a cos(theta) + c with
/// theta = b P_heater + theta0.
struct CalibrationFit {
  double a = 0.0;       // fringe amplitude, W
  double c = 0.0;       // power offset, W
  double b = 0.0;       // phase conversion coefficient, rad/mW
  double theta0 = 0.0;  // initial phase, wrapped to [0, 2 pi)
  double residual_rms = 0.0;
  int iterations = 0;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of the complementary
/// calibration curves. Needs >= 8 samples spanning more than pi of phase.
/// Throws DegenerateFitError when b is unidentifiable.
CalibrationFit phase_calibration_fit(const std::vector<CalibrationSample>& samples);

}  // namespace aptsim::design
