#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aptsim/fock.hpp"
#include "aptsim/model.hpp"
#include "aptsim/types.hpp"

namespace aptsim {

/// Index of a mode in the covariance blocks, ordered (a_s, b_s, a_i, b_i).
int cov_index(Mode m);
Mode cov_mode(int index);

/// 4x4 complex Bogoliubov propagator acting on the operator vector
/// V = [a_s, b_s, a_i+, b_i+].
enum class TMFamily { M1, M2, M3, M4, Numeric };
struct TransferMatrix {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  double z = 0.0;
  TMFamily family = TMFamily::Numeric;
};

/// Zero-mean Gaussian state: normal block n[i][j] = <v_i+ v_j> and anomalous
/// block m[i][j] = <v_i v_j> over modes (a_s, b_s, a_i, b_i).
struct CovarianceState {
  Eigen::Matrix4cd n_block = Eigen::Matrix4cd::Zero();
  Eigen::Matrix4cd m_block = Eigen::Matrix4cd::Zero();
  double z = 0.0;
};

/// Dimensionless propagation kernels of the Langevin noise terms.
struct NoiseKernels {
  std::function<double(double)> K0;
  std::function<double(double)> K1;
  TMFamily family = TMFamily::Numeric;
};

enum class ThetaCase { zero, pi };

/// Closed-form transfer matrix of the coherent system at theta = 0 (requires
/// the unbroken regime Gamma > g*eps).
TransferMatrix transfer_coherent_theta0(const ModelParams& p, double z);
/// Coherent system at theta = pi.
TransferMatrix transfer_coherent_pi(const ModelParams& p, double z);

/// Anti-PT transfer matrix plus the additive second-moment contribution of
/// the vacuum noise vector, at theta in {0, pi}.
std::pair<TransferMatrix, CovarianceState> transfer_antipt(const ModelParams& p,
                                                           double z,
                                                           ThetaCase tcase);

/// Noise kernels of the anti-PT families (M3: theta = 0, M4: theta = pi).
NoiseKernels noise_kernels(const ModelParams& p, TMFamily family);

/// Gaussian state evolved from vacuum: transfer matrix applied to vacuum plus
/// the given noise contribution (pass nullptr for the Hermitian families).
CovarianceState covariance_from_transfer(const TransferMatrix& tm,
                                         const CovarianceState* noise);

/// Full vacuum-input covariance of the anti-PT system at theta in {0, pi}.
CovarianceState covariance_antipt(const ModelParams& p, double z,
                                  ThetaCase tcase);
/// Same for the coherent system.
CovarianceState covariance_coherent(const ModelParams& p, double z,
                                    ThetaCase tcase);

/// <[v_i, v_j+]> of the anti-PT solution including noise; the identity matrix
/// when the noise operators do their job.
Eigen::Matrix4cd antipt_commutator_matrix(const ModelParams& p, double z,
                                          ThetaCase tcase);

/// Second-moment trajectory for arbitrary theta: RK4 integration of the
/// closed linear moment equations implied by the Langevin drift. Scheme is
/// taken from p.scheme (anti-PT for AntiPT_*, coherent drift for
/// CoherentHermitian).
std::vector<CovarianceState> moment_ode(const ModelParams& p,
                                        const std::vector<double>& z_grid);

/// One normally ordered operator factor of a moment specification.
struct OpFactor {
  Mode mode;
  bool dagger;
};

/// Wick expansion of a normally ordered moment (all daggered factors first,
/// even length <= 8): sum over perfect pairings with contractions drawn from
/// conj(m_block) for (+,+), n_block for (+,plain), m_block for (plain,plain).
cplx wick_moment(const CovarianceState& cov, const std::vector<OpFactor>& spec);

/// G4 = <a_s+ a_i+ b_s+ b_i+ b_i b_s a_i a_s> of a Gaussian state.
double g4_from_covariance(const CovarianceState& cov);

// Closed forms of the supplementary material, used as oracles and by the
// acceptance suite. Rates in 1/m, z in m.
double coherent_theta0_mean_photon(const ModelParams& p, double z);
double coherent_theta0_g4(const ModelParams& p, double z);
double coherent_pi_mean_photon(const ModelParams& p, double z);
double coherent_pi_g4(const ModelParams& p, double z);

/// Deterministic part of the anti-PT theta=0 mean photon number,
/// sinh^2(g e z) (1 + e^{-4 Gamma z}) / 2.
double antipt_theta0_mean_deterministic(const ModelParams& p, double z);
/// Vacuum-noise population of the collective bright channel,
/// 4 Gamma int_0^z e^{-4 Gamma u} sinh^2(g e u) du, in closed form. The
/// per-waveguide-mode share is half of this.
double antipt_theta0_bright_noise_population(const ModelParams& p, double z);
/// Total per-mode mean photon number at theta=0 (deterministic + noise).
double antipt_theta0_mean_photon(const ModelParams& p, double z);

double antipt_pi_mean_deterministic(const ModelParams& p, double z);
/// Per-mode vacuum contribution at theta=pi,
/// 2 Gamma (g e / k)^2 int_0^z e^{-2 Gamma u} sinh^2(k u) du.
double antipt_pi_noise_population(const ModelParams& p, double z);
double antipt_pi_mean_photon(const ModelParams& p, double z);

}  // namespace aptsim
