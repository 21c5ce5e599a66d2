#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aptsim/fock.hpp"
#include "aptsim/types.hpp"

namespace aptsim {

enum class Scheme {
  AntiPT_Master,      // Lindblad ME with collective dissipators (Eq. of motion
                      // of the eliminated two-mode system)
  AntiPT_NHH,         // non-Hermitian Hamiltonian, jumps dropped
  CoherentHermitian,  // evanescently coupled reference system
  ThreeMode,          // pre-elimination model with the lossy middle waveguide
};

const char* scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

/// Physical parameters shared by all solvers. Rates are in 1/m, lengths in m,
/// theta in radians (wrapped to [0, 2*pi)).
struct ModelParams {
  double g_eps = 6.93;
  double Gamma = 722.0;
  double theta = 0.0;
  Scheme scheme = Scheme::AntiPT_Master;
  std::optional<double> kappa;    // ThreeMode only
  std::optional<double> gamma_c;  // ThreeMode only
  int per_mode_cap = 6;
  std::optional<int> total_cap = 6;
  std::vector<double> z_grid;  // strictly increasing, starting at 0

  /// Throws ValidationError on bad values; wraps theta.
  void validate();
  ModelParams validated() const;

  FockBasis make_basis() const;
};

/// Co-/cross-generation amplitudes of the B/D-basis SPDC Hamiltonian,
/// Lambda_co = (g*eps/2)(e^{i theta}+1), Lambda_x = (g*eps/2)(e^{i theta}-1).
/// |Lambda_co|^2 + |Lambda_x|^2 = (g*eps)^2 for all theta.
struct NonlinearCoeffs {
  cplx lambda_co;
  cplx lambda_x;
};
NonlinearCoeffs nonlinear_coeffs(double g_eps, double theta);

/// SPDC pair-generation Hamiltonian
/// H = g*eps (e^{i theta} a_s+ a_i+ + h.c.) + g*eps (b_s+ b_i+ + h.c.).
SparseOp build_h_nl(const ModelParams& p, const FockBasis& basis);

/// Eliminated anti-PT linear term
/// H_L' = -i Gamma sum_mu (a+ a + a+ b + b+ a + b+ b); anti-Hermitian.
SparseOp build_h_linear_eff(const ModelParams& p, const FockBasis& basis);

/// Hermitian coherent reference H_c = H_NL + Gamma sum_mu (a+ b + a b+).
SparseOp build_h_coherent(const ModelParams& p, const FockBasis& basis);

/// H_NL written with bright/dark operators,
/// Lambda_co (B_s+ B_i+ + D_s+ D_i+) + Lambda_x (B_s+ D_i+ + D_s+ B_i+) + h.c.
/// Equals build_h_nl elementwise.
SparseOp build_h_nl_bd(const ModelParams& p, const FockBasis& basis);

/// A jump operator together with its Lindblad rate:
/// rate * (L rho L+ - 1/2 {L+ L, rho}).
struct JumpOp {
  double rate;
  SparseOp op;
};

/// Hamiltonian + dissipator channels of a scheme, compiled once per basis so
/// the propagation loop runs on prebuilt sparse matrices.
class LindbladSystem {
 public:
  LindbladSystem(SparseOp hamiltonian, std::vector<JumpOp> jumps);

  const SparseOp& hamiltonian() const { return h_; }
  const std::vector<JumpOp>& jumps() const { return jumps_; }
  int dim() const { return static_cast<int>(h_.rows()); }

  /// Full Lindblad right-hand side
  /// -i[H, rho] + sum_k rate_k D[L_k] rho.
  DensityMatrix rhs(const DensityMatrix& rho) const;
  /// Recycling term sum_k rate_k L_k rho L_k+ alone.
  DensityMatrix jump_term(const DensityMatrix& rho) const;
  /// rhs() minus jump_term(): -i (H_eff rho - rho H_eff+) with
  /// H_eff = H - (i/2) sum_k rate_k L_k+ L_k.
  DensityMatrix no_jump_rhs(const DensityMatrix& rho) const;

  /// H - (i/2) sum rate L+ L, the non-Hermitian generator of the
  /// jump-free part.
  const SparseOp& h_effective() const { return h_eff_; }

 private:
  SparseOp h_;
  std::vector<JumpOp> jumps_;
  std::vector<SparseOp> jump_adjoints_;
  SparseOp h_eff_;
};

/// The two-mode anti-PT master equation of the eliminated model:
/// drho/dz = -i[H_NL, rho] + 2 Gamma sum_mu D[a_mu + b_mu] rho.
LindbladSystem make_antipt_master_system(const ModelParams& p,
                                         const FockBasis& basis);

/// The Hermitian reference as a (dissipator-free) Lindblad system.
LindbladSystem make_coherent_system(const ModelParams& p,
                                    const FockBasis& basis);

/// Pre-elimination three-mode model: H = H_NL + kappa sum_mu (a+ c + b+ c +
/// h.c.), dissipators 2 gamma_c D[c_mu]. Eliminating c reproduces the 2 Gamma
/// collective dissipator with Gamma = kappa^2 / gamma_c.
struct ThreeModeModel {
  LindbladSystem system;
  double effective_Gamma;
  bool adiabatic_regime_ok;  // false when gamma_c / kappa < 5
};
ThreeModeModel build_three_mode_model(const ModelParams& p,
                                      const FockBasis& basis6);

/// Dispatch on p.scheme (AntiPT_Master, CoherentHermitian, ThreeMode).
LindbladSystem make_system(const ModelParams& p, const FockBasis& basis);

/// Spec-level one-shot wrappers (build the system per call).
DensityMatrix lindblad_rhs(const ModelParams& p, const FockBasis& basis,
                           const DensityMatrix& rho);
DensityMatrix jump_term(const ModelParams& p, const FockBasis& basis,
                        const DensityMatrix& rho);
/// -i (H_NL + H_L') |psi>.
StateVector nhh_rhs(const ModelParams& p, const FockBasis& basis,
                    const StateVector& psi);

}  // namespace aptsim
