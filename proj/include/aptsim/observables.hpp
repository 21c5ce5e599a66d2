#pragma once

#include <array>
#include <optional>
#include <vector>

#include "aptsim/fock.hpp"
#include "aptsim/gaussian.hpp"
#include "aptsim/model.hpp"
#include "aptsim/types.hpp"

namespace aptsim {

/// The measured two-photon coincidence pairs, in fixed order:
/// (a_s,a_i), (b_s,b_i), (a_s,b_i), (a_i,b_s).
inline constexpr int kNumG2 = 4;
/// Three-photon triples (pair; single):
/// (a_s,a_i;b_s), (a_s,a_i;b_i), (b_s,b_i;a_s), (b_s,b_i;a_i).
inline constexpr int kNumG3 = 4;

std::array<std::pair<Mode, Mode>, kNumG2> g2_pairs();
struct G3Triple {
  Mode pair_1;
  Mode pair_2;
  Mode single;
};
std::array<G3Triple, kNumG3> g3_triples();

/// Bright/dark quadratic moments used by the moment-equation checks.
struct BdMoments {
  double n_B_s = 0.0, n_B_i = 0.0, n_D_s = 0.0, n_D_i = 0.0;
  cplx bs_bi, bs_di, ds_bi, ds_di;  // <B_s B_i>, <B_s D_i>, <D_s B_i>, <D_s D_i>
};

/// All correlation observables at one (z, theta) point. Ratios that hit a
/// 0/0 are stored empty rather than as NaN.
struct CorrelationRecord {
  double z = 0.0;
  double theta = 0.0;
  std::array<double, 4> n{};        // <n> for (a_s, a_i, b_s, b_i)
  std::array<double, kNumG2> G2{};
  std::array<double, kNumG3> G3{};
  double G4 = 0.0;
  std::optional<double> g4;
  std::optional<double> r4;
  std::array<std::optional<double>, kNumG3> r3;
  BdMoments bd;
  double weight = 1.0;  // trace(rho) or <psi|psi> of the producing state
};

/// Cached sparse expectation operators of one basis; builds every operator
/// once so trajectory recording is cheap.
class FockObservables {
 public:
  explicit FockObservables(const FockBasis& basis);

  CorrelationRecord record(const DensityMatrix& rho, double z,
                           double theta) const;
  /// Unnormalized expectation values <psi|O|psi> (the NHH convention).
  CorrelationRecord record(const StateVector& psi, double z,
                           double theta) const;

  int dim() const { return dim_; }

 private:
  int dim_;
  std::array<SparseOp, 4> number_;
  std::array<SparseOp, kNumG2> g2_ops_;
  std::array<SparseOp, kNumG3> g3_ops_;
  SparseOp g4_op_;
  std::array<SparseOp, 4> bd_number_;   // n_Bs, n_Bi, n_Ds, n_Di
  std::array<SparseOp, 4> bd_pair_;     // B_s B_i, B_s D_i, D_s B_i, D_s D_i
};

/// <prod a+ . prod a> of a normally ordered specification.
cplx normally_ordered_moment(const FockBasis& basis, const DensityMatrix& rho,
                             const std::vector<OpFactor>& spec);
cplx normally_ordered_moment(const FockBasis& basis, const StateVector& psi,
                             const std::vector<OpFactor>& spec);
/// Delegates to the Wick expansion.
cplx normally_ordered_moment(const CovarianceState& cov,
                             const std::vector<OpFactor>& spec);

/// Record extraction from a Gaussian state.
CorrelationRecord record_from_covariance(const CovarianceState& cov,
                                         double theta);

/// g4 = G4 / (n_as n_ai n_bs n_bi). Throws UndefinedObservableError when a
/// denominator factor vanishes.
double g4_ratio(double G4, const std::array<double, 4>& n);
/// R4 = G4 / (G2_{as,ai} G2_{bs,bi}).
double r4_ratio(double G4, double G2_intra_a, double G2_intra_b);
/// R3 = G3 / (G2_pair * n_single).
double r3_ratio(double G3, double G2_pair, double n_single);

/// Fill the derived g4/r4/r3 fields of a record from its raw moments,
/// leaving the undefined ones empty.
void fill_derived_ratios(CorrelationRecord& rec);

/// Fringe visibility (max - min) / (max + min) of a sampled curve.
double visibility(const std::vector<double>& curve);

}  // namespace aptsim
