#include "aptsim/model.hpp"

#include <cmath>

#include "aptsim/errors.hpp"

namespace aptsim {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::AntiPT_Master: return "antipt_master";
    case Scheme::AntiPT_NHH: return "antipt_nhh";
    case Scheme::CoherentHermitian: return "coherent";
    case Scheme::ThreeMode: return "three_mode";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  if (name == "antipt_master") return Scheme::AntiPT_Master;
  if (name == "antipt_nhh") return Scheme::AntiPT_NHH;
  if (name == "coherent") return Scheme::CoherentHermitian;
  if (name == "three_mode") return Scheme::ThreeMode;
  return std::nullopt;
}

void ModelParams::validate() {
  if (g_eps < 0.0) throw ValidationError("g_eps must be >= 0");
  if (Gamma < 0.0) throw ValidationError("Gamma must be >= 0");
  if (per_mode_cap < 0) throw ValidationError("per_mode_cap must be >= 0");
  if (total_cap && *total_cap < 0)
    throw ValidationError("total_cap must be >= 0");
  if (scheme == Scheme::ThreeMode) {
    if (!kappa || !gamma_c)
      throw ValidationError("three-mode scheme needs kappa and gamma_c");
    if (*kappa <= 0.0 || *gamma_c <= 0.0)
      throw ValidationError("kappa and gamma_c must be > 0");
  }
  for (std::size_t i = 1; i < z_grid.size(); ++i)
    if (!(z_grid[i] > z_grid[i - 1]))
      throw ValidationError("z_grid must be strictly increasing");
  if (!z_grid.empty() && z_grid.front() != 0.0)
    throw ValidationError("z_grid must start at 0");
  theta = wrap_angle(theta);
}

ModelParams ModelParams::validated() const {
  ModelParams p = *this;
  p.validate();
  return p;
}

FockBasis ModelParams::make_basis() const {
  if (scheme == Scheme::ThreeMode) return six_mode_basis(per_mode_cap, total_cap);
  return four_mode_basis(per_mode_cap, total_cap);
}

NonlinearCoeffs nonlinear_coeffs(double g_eps, double theta) {
  const cplx e = std::exp(iu * theta);
  return {0.5 * g_eps * (e + 1.0), 0.5 * g_eps * (e - 1.0)};
}

namespace {

SparseOp pair_term(const FockBasis& basis, Mode m1, Mode m2, cplx amp) {
  // amp * m1+ m2+ + conj(amp) * m2 m1
  SparseOp c1 = ladder(basis, m1, LadderKind::create);
  SparseOp c2 = ladder(basis, m2, LadderKind::create);
  SparseOp up = c1 * c2;
  SparseOp h = amp * up + std::conj(amp) * SparseOp(up.adjoint());
  h.makeCompressed();
  return h;
}

SparseOp hopping_term(const FockBasis& basis, Mode m1, Mode m2, cplx amp) {
  // amp * m1+ m2 + conj(amp) * m2+ m1
  SparseOp c1 = ladder(basis, m1, LadderKind::create);
  SparseOp a2 = ladder(basis, m2, LadderKind::annihilate);
  SparseOp up = c1 * a2;
  SparseOp h = amp * up + std::conj(amp) * SparseOp(up.adjoint());
  h.makeCompressed();
  return h;
}

void require_modes(const FockBasis& basis, std::initializer_list<Mode> modes) {
  for (Mode m : modes)
    if (!basis.has_mode(m))
      throw ValidationError(std::string("basis lacks mode ") + mode_name(m));
}

}  // namespace

SparseOp build_h_nl(const ModelParams& p, const FockBasis& basis) {
  require_modes(basis, {Mode::a_s, Mode::a_i, Mode::b_s, Mode::b_i});
  const cplx phase = std::exp(iu * p.theta);
  SparseOp h = pair_term(basis, Mode::a_s, Mode::a_i, p.g_eps * phase) +
               pair_term(basis, Mode::b_s, Mode::b_i, cplx(p.g_eps, 0.0));
  h.makeCompressed();
  return h;
}

SparseOp build_h_linear_eff(const ModelParams& p, const FockBasis& basis) {
  require_modes(basis, {Mode::a_s, Mode::a_i, Mode::b_s, Mode::b_i});
  const cplx amp = -iu * p.Gamma;
  SparseOp h(basis.size(), basis.size());
  const std::pair<Mode, Mode> freq[] = {{Mode::a_s, Mode::b_s},
                                        {Mode::a_i, Mode::b_i}};
  for (auto [am, bm] : freq) {
    SparseOp na = ladder(basis, am, LadderKind::number);
    SparseOp nb = ladder(basis, bm, LadderKind::number);
    SparseOp ad = ladder(basis, am, LadderKind::create);
    SparseOp b = ladder(basis, bm, LadderKind::annihilate);
    SparseOp hop = ad * b;
    h = h + amp * (na + nb + hop + SparseOp(hop.adjoint()));
  }
  h.makeCompressed();
  return h;
}

SparseOp build_h_coherent(const ModelParams& p, const FockBasis& basis) {
  require_modes(basis, {Mode::a_s, Mode::a_i, Mode::b_s, Mode::b_i});
  SparseOp h = build_h_nl(p, basis) +
               hopping_term(basis, Mode::a_s, Mode::b_s, cplx(p.Gamma, 0.0)) +
               hopping_term(basis, Mode::a_i, Mode::b_i, cplx(p.Gamma, 0.0));
  h.makeCompressed();
  return h;
}

SparseOp build_h_nl_bd(const ModelParams& p, const FockBasis& basis) {
  require_modes(basis, {Mode::a_s, Mode::a_i, Mode::b_s, Mode::b_i});
  // Matrix in the transformed labels, where the a-slots count bright and the
  // b-slots dark photons: co-generation feeds BB and DD pairs, cross
  // generation the BD pairs.
  const auto [lco, lx] = nonlinear_coeffs(p.g_eps, p.theta);
  SparseOp h = pair_term(basis, Mode::a_s, Mode::a_i, lco) +  // B_s+ B_i+
               pair_term(basis, Mode::b_s, Mode::b_i, lco) +  // D_s+ D_i+
               pair_term(basis, Mode::a_s, Mode::b_i, lx) +   // B_s+ D_i+
               pair_term(basis, Mode::b_s, Mode::a_i, lx);    // D_s+ B_i+
  h.makeCompressed();
  return h;
}

LindbladSystem::LindbladSystem(SparseOp hamiltonian, std::vector<JumpOp> jumps)
    : h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  h_eff_ = h_;
  for (const auto& j : jumps_) {
    jump_adjoints_.emplace_back(j.op.adjoint());
    SparseOp ldl = jump_adjoints_.back() * j.op;
    h_eff_ = h_eff_ - iu * (0.5 * j.rate) * ldl;
  }
  h_eff_.makeCompressed();
}

DensityMatrix LindbladSystem::rhs(const DensityMatrix& rho) const {
  DensityMatrix out = no_jump_rhs(rho);
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    DensityMatrix lrho = jumps_[k].op * rho;
    out.noalias() += jumps_[k].rate * (lrho * jump_adjoints_[k]);
  }
  return out;
}

DensityMatrix LindbladSystem::jump_term(const DensityMatrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim())
    throw ValidationError("jump term: state/basis dimension mismatch");
  DensityMatrix out = DensityMatrix::Zero(dim(), dim());
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    DensityMatrix lrho = jumps_[k].op * rho;
    out.noalias() += jumps_[k].rate * (lrho * jump_adjoints_[k]);
  }
  return out;
}

DensityMatrix LindbladSystem::no_jump_rhs(const DensityMatrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim())
    throw ValidationError("lindblad rhs: state/basis dimension mismatch");
  // -i (H_eff rho - rho H_eff+); the second product is formed as
  // (-i H_eff rho+)+ so only the precompiled H_eff is ever multiplied.
  DensityMatrix rho_adj = rho.adjoint();
  DensityMatrix out = -iu * (h_eff_ * rho);
  out.noalias() += (-iu * (h_eff_ * rho_adj)).adjoint();
  return out;
}

LindbladSystem make_antipt_master_system(const ModelParams& p,
                                         const FockBasis& basis) {
  SparseOp h = build_h_nl(p, basis);
  std::vector<JumpOp> jumps;
  const std::pair<Mode, Mode> freq[] = {{Mode::a_s, Mode::b_s},
                                        {Mode::a_i, Mode::b_i}};
  for (auto [am, bm] : freq) {
    SparseOp l = ladder(basis, am, LadderKind::annihilate) +
                 ladder(basis, bm, LadderKind::annihilate);
    l.makeCompressed();
    jumps.push_back({2.0 * p.Gamma, std::move(l)});
  }
  return LindbladSystem(std::move(h), std::move(jumps));
}

LindbladSystem make_coherent_system(const ModelParams& p,
                                    const FockBasis& basis) {
  return LindbladSystem(build_h_coherent(p, basis), {});
}

ThreeModeModel build_three_mode_model(const ModelParams& p,
                                      const FockBasis& basis6) {
  require_modes(basis6, {Mode::a_s, Mode::a_i, Mode::b_s, Mode::b_i, Mode::c_s,
                         Mode::c_i});
  if (!p.kappa || !p.gamma_c)
    throw ValidationError("three-mode model needs kappa and gamma_c");
  const double kappa = *p.kappa;
  const double gamma_c = *p.gamma_c;
  // kappa = 0 is allowed and simply decouples the c modes.
  if (kappa < 0.0 || gamma_c <= 0.0)
    throw ValidationError("three-mode model needs kappa >= 0, gamma_c > 0");

  SparseOp h = build_h_nl(p, basis6) +
               hopping_term(basis6, Mode::a_s, Mode::c_s, cplx(kappa, 0.0)) +
               hopping_term(basis6, Mode::b_s, Mode::c_s, cplx(kappa, 0.0)) +
               hopping_term(basis6, Mode::a_i, Mode::c_i, cplx(kappa, 0.0)) +
               hopping_term(basis6, Mode::b_i, Mode::c_i, cplx(kappa, 0.0));
  h.makeCompressed();

  std::vector<JumpOp> jumps;
  for (Mode cm : {Mode::c_s, Mode::c_i}) {
    jumps.push_back(
        {2.0 * gamma_c, ladder(basis6, cm, LadderKind::annihilate)});
  }
  ThreeModeModel model{LindbladSystem(std::move(h), std::move(jumps)),
                       kappa * kappa / gamma_c,
                       kappa == 0.0 || gamma_c / kappa >= 5.0};
  return model;
}

LindbladSystem make_system(const ModelParams& p, const FockBasis& basis) {
  switch (p.scheme) {
    case Scheme::AntiPT_Master:
    case Scheme::AntiPT_NHH:
      // The NHH scheme shares the ME operators; evolve_nhh uses h_effective().
      return make_antipt_master_system(p, basis);
    case Scheme::CoherentHermitian:
      return make_coherent_system(p, basis);
    case Scheme::ThreeMode:
      return build_three_mode_model(p, basis).system;
  }
  throw ValidationError("unknown scheme");
}

DensityMatrix lindblad_rhs(const ModelParams& p, const FockBasis& basis,
                           const DensityMatrix& rho) {
  return make_system(p, basis).rhs(rho);
}

DensityMatrix jump_term(const ModelParams& p, const FockBasis& basis,
                        const DensityMatrix& rho) {
  return make_system(p, basis).jump_term(rho);
}

StateVector nhh_rhs(const ModelParams& p, const FockBasis& basis,
                    const StateVector& psi) {
  if (psi.size() != basis.size())
    throw ValidationError("nhh rhs: state/basis dimension mismatch");
  SparseOp h_eff = build_h_nl(p, basis) + build_h_linear_eff(p, basis);
  return -iu * (h_eff * psi);
}

}  // namespace aptsim
