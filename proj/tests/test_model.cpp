#include <random>

#include <Eigen/Eigenvalues>

#include "aptsim/errors.hpp"
#include "aptsim/fock.hpp"
#include "aptsim/model.hpp"
#include "doctest.h"

using namespace aptsim;

namespace {

Eigen::MatrixXcd dense(const SparseOp& op) { return Eigen::MatrixXcd(op); }

ModelParams params(double theta, int cap = 3) {
  ModelParams p;
  p.g_eps = 6.93;
  p.Gamma = 722.0;
  p.theta = theta;
  p.per_mode_cap = cap;
  p.total_cap = cap;
  return p;
}

DensityMatrix projector(const StateVector& psi) {
  return psi * psi.adjoint() / psi.squaredNorm();
}

// Single bright/dark signal photon in the waveguide basis.
StateVector bright_signal(const FockBasis& basis) {
  StateVector psi = basis_state(basis, {1, 0, 0, 0});
  psi += basis_state(basis, {0, 0, 1, 0});
  return psi / std::sqrt(2.0);
}

StateVector dark_signal(const FockBasis& basis) {
  StateVector psi = basis_state(basis, {1, 0, 0, 0});
  psi -= basis_state(basis, {0, 0, 1, 0});
  return psi / std::sqrt(2.0);
}

}  // namespace

TEST_CASE("nonlinear coefficients") {
  const double g = 6.93;
  auto c0 = nonlinear_coeffs(g, 0.0);
  CHECK(std::abs(c0.lambda_co - cplx(g, 0.0)) < 1e-14);
  CHECK(std::abs(c0.lambda_x) < 1e-14);

  auto cpi = nonlinear_coeffs(g, pi);
  CHECK(std::abs(cpi.lambda_co) < 1e-12);
  CHECK(std::abs(cpi.lambda_x - cplx(-g, 0.0)) < 1e-12);

  auto ch = nonlinear_coeffs(g, pi / 2.0);
  CHECK(std::abs(ch.lambda_co) == doctest::Approx(g / std::sqrt(2.0)));
  CHECK(std::abs(ch.lambda_x) == doctest::Approx(g / std::sqrt(2.0)));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> th(0.0, 2.0 * pi);
  for (int i = 0; i < 25; ++i) {
    auto c = nonlinear_coeffs(g, th(rng));
    CHECK(std::norm(c.lambda_co) + std::norm(c.lambda_x) ==
          doctest::Approx(g * g).epsilon(1e-12));
  }
}

TEST_CASE("H_NL matrix elements and hermiticity") {
  FockBasis basis = four_mode_basis(2, 2);
  const int vac = basis.index_of({0, 0, 0, 0});
  const int a_pair = basis.index_of({1, 1, 0, 0});
  const int b_pair = basis.index_of({0, 0, 1, 1});

  auto h0 = dense(build_h_nl(params(0.0), basis));
  CHECK(std::abs(h0(a_pair, vac) - cplx(6.93, 0.0)) < 1e-12);
  auto hpi = dense(build_h_nl(params(pi), basis));
  CHECK(std::abs(hpi(a_pair, vac) - cplx(-6.93, 0.0)) < 1e-12);
  for (double theta : {0.0, 1.1, pi, 4.4}) {
    auto h = dense(build_h_nl(params(theta), basis));
    CHECK(std::abs(h(b_pair, vac) - cplx(6.93, 0.0)) < 1e-12);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("H_L' structure") {
  FockBasis basis = four_mode_basis(2, 2);
  auto p = params(0.0);
  auto h = dense(build_h_linear_eff(p, basis));
  CHECK((h + h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);  // anti-Hermitian

  const int as1 = basis.index_of({1, 0, 0, 0});
  const int bs1 = basis.index_of({0, 0, 1, 0});
  CHECK(std::abs(h(as1, as1) - cplx(0.0, -722.0)) < 1e-12);
  CHECK(std::abs(h(bs1, as1) - cplx(0.0, -722.0)) < 1e-12);

  // The dark state is annihilated: row sum of -i G [[1,1],[1,1]] on (1,-1).
  StateVector dark = dark_signal(basis);
  CHECK((h * dark).norm() < 1e-12);
}

TEST_CASE("coherent reference Hamiltonian") {
  FockBasis basis = four_mode_basis(2, 2);
  auto p = params(0.3);
  auto hc = dense(build_h_coherent(p, basis));
  CHECK((hc - hc.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  const int as1 = basis.index_of({1, 0, 0, 0});
  const int bs1 = basis.index_of({0, 0, 1, 0});
  CHECK(std::abs(hc(bs1, as1) - cplx(722.0, 0.0)) < 1e-12);

  // g_eps = 0: single-photon sector per frequency has eigenvalues +-Gamma.
  auto p0 = params(0.0);
  p0.g_eps = 0.0;
  auto h0 = dense(build_h_coherent(p0, basis));
  Eigen::Matrix2cd sector;
  sector << h0(as1, as1), h0(as1, bs1), h0(bs1, as1), h0(bs1, bs1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(sector);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-722.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(722.0));

  // H_c(theta) - H_c(0) lives purely in the a-arm pair sector.
  auto diff = dense(build_h_coherent(params(2.2), basis)) -
              dense(build_h_coherent(params(0.0), basis));
  for (int r = 0; r < basis.size(); ++r)
    for (int c = 0; c < basis.size(); ++c) {
      if (std::abs(diff(r, c)) < 1e-12) continue;
      // Any nonzero element connects states differing by one a-arm pair.
      const auto& sr = basis.state(r);
      const auto& sc = basis.state(c);
      const int da_s = sr[0] - sc[0];
      const int da_i = sr[1] - sc[1];
      CHECK(da_s == da_i);
      CHECK(std::abs(da_s) == 1);
      CHECK(sr[2] == sc[2]);
      CHECK(sr[3] == sc[3]);
    }
}

TEST_CASE("B/D-basis Hamiltonian matches the transformed one") {
  FockBasis basis = four_mode_basis(3, 3);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> th(0.0, 2.0 * pi);
  for (int i = 0; i < 6; ++i) {
    auto p = params(th(rng), 3);
    auto direct = dense(build_h_nl_bd(p, basis));
    auto transformed =
        dense(bd_transform(basis, build_h_nl(p, basis), BdDirection::to_BD));
    CHECK((direct - transformed).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((direct - direct.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("lindblad rhs on stationary and decaying states") {
  FockBasis basis = four_mode_basis(2, 2);
  auto p = params(0.7);
  p.g_eps = 0.0;

  SUBCASE("vacuum is stationary") {
    auto d = lindblad_rhs(p, basis, vacuum_density(basis));
    CHECK(d.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("dark pair is stationary") {
    // |D_s:1, D_i:1> = D_s+ D_i+ |0> expanded in waveguide occupations
    StateVector pair = StateVector::Zero(basis.size());
    pair(basis.index_of({1, 1, 0, 0})) = 0.5;
    pair(basis.index_of({1, 0, 0, 1})) = -0.5;
    pair(basis.index_of({0, 1, 1, 0})) = -0.5;
    pair(basis.index_of({0, 0, 1, 1})) = 0.5;
    auto d = lindblad_rhs(p, basis, projector(pair));
    CHECK(d.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("bright photon decays at 4 Gamma") {
    DensityMatrix rho = projector(bright_signal(basis));
    auto d = lindblad_rhs(p, basis, rho);
    // d<n_Bs>/dz = tr(n_Bs drho)
    auto bd = bright_dark_ops(basis, Mode::a_s, Mode::b_s);
    Eigen::MatrixXcd n_bs = dense(bd.bright).adjoint() * dense(bd.bright);
    const double deriv = (n_bs * d).trace().real();
    CHECK(deriv == doctest::Approx(-4.0 * p.Gamma).epsilon(1e-10));
    // trace is conserved
    CHECK(std::abs(d.trace()) < 1e-12);
    // derivative stays Hermitian
    CHECK((d - d.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("jump term") {
  FockBasis basis = four_mode_basis(2, 2);
  auto p = params(0.0);

  SUBCASE("vacuum gives zero") {
    CHECK(jump_term(p, basis, vacuum_density(basis)).cwiseAbs().maxCoeff() <
          1e-12);
  }

  SUBCASE("bright photon recycles to vacuum at 4 Gamma") {
    auto d = jump_term(p, basis, projector(bright_signal(basis)));
    DensityMatrix expected =
        4.0 * p.Gamma * vacuum_density(basis);
    CHECK((d - expected).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("broken pair leaves a lone dark photon") {
    // |B_s:1, D_i:1>
    StateVector psi = StateVector::Zero(basis.size());
    psi(basis.index_of({1, 1, 0, 0})) = 0.5;
    psi(basis.index_of({1, 0, 0, 1})) = -0.5;
    psi(basis.index_of({0, 1, 1, 0})) = 0.5;
    psi(basis.index_of({0, 0, 1, 1})) = -0.5;
    auto d = jump_term(p, basis, projector(psi));
    StateVector dark_i = basis_state(basis, {0, 1, 0, 0}) -
                         basis_state(basis, {0, 0, 0, 1});
    dark_i /= std::sqrt(2.0);
    DensityMatrix expected = 4.0 * p.Gamma * (dark_i * dark_i.adjoint());
    CHECK((d - expected).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("decomposition identity and effective Hamiltonian") {
  FockBasis basis = four_mode_basis(2, 2);
  std::mt19937 rng(29);
  std::normal_distribution<double> dist;
  for (double theta : {0.0, 1.3, pi}) {
    auto p = params(theta, 2);
    LindbladSystem sys = make_antipt_master_system(p, basis);

    // H_eff = H_NL + H_L'
    auto expected_heff =
        dense(build_h_nl(p, basis)) + dense(build_h_linear_eff(p, basis));
    CHECK((dense(sys.h_effective()) - expected_heff).cwiseAbs().maxCoeff() <
          1e-12);

    // rhs - jump = -i(H_eff rho - rho H_eff+) on a random Hermitian rho
    DensityMatrix m(basis.size(), basis.size());
    for (int r = 0; r < basis.size(); ++r)
      for (int c = 0; c < basis.size(); ++c) m(r, c) = cplx(dist(rng), dist(rng));
    DensityMatrix rho = 0.5 * (m + m.adjoint().eval());
    DensityMatrix lhs = sys.rhs(rho) - sys.jump_term(rho);
    DensityMatrix rhs_expl =
        -iu * (expected_heff * rho - rho * expected_heff.adjoint());
    CHECK((lhs - rhs_expl).cwiseAbs().maxCoeff() /
              rhs_expl.cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("nhh rhs") {
  FockBasis basis = four_mode_basis(2, 2);
  auto p = params(0.4);
  p.g_eps = 0.0;

  CHECK(nhh_rhs(p, basis, vacuum_state(basis)).norm() < 1e-12);
  CHECK(nhh_rhs(p, basis, dark_signal(basis)).norm() < 1e-12);

  StateVector bright = bright_signal(basis);
  StateVector d = nhh_rhs(p, basis, bright);
  CHECK((d - (-2.0 * p.Gamma) * bright).norm() < 1e-10);
}

TEST_CASE("exchange symmetry at theta = 0") {
  FockBasis basis = four_mode_basis(2, 2);
  auto p = params(0.0);
  // Permutation swapping the a and b waveguides.
  Eigen::MatrixXcd perm = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto& occ = basis.state(i);
    std::vector<int> swapped = {occ[2], occ[3], occ[0], occ[1]};
    perm(basis.index_of(swapped), i) = 1.0;
  }
  for (const SparseOp& op :
       {build_h_nl(p, basis), build_h_linear_eff(p, basis),
        build_h_coherent(p, basis)}) {
    auto h = dense(op);
    CHECK((perm * h * perm.adjoint() - h).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("three-mode model") {
  auto p = params(0.0, 2);
  p.scheme = Scheme::ThreeMode;
  p.kappa = 7662.0;
  p.gamma_c = 81300.0;
  FockBasis basis6 = six_mode_basis(2, 2);

  auto model = build_three_mode_model(p, basis6);
  CHECK(model.effective_Gamma ==
        doctest::Approx(7662.0 * 7662.0 / 81300.0));
  CHECK(model.adiabatic_regime_ok);

  // kappa = 0 decouples the c modes entirely: no Hamiltonian element feeds
  // a c excitation.
  auto p0 = p;
  p0.kappa = 0.0;
  auto decoupled = build_three_mode_model(p0, basis6);
  CHECK(decoupled.effective_Gamma == 0.0);
  auto h = dense(decoupled.system.hamiltonian());
  const int cs_slot = basis6.mode_slot(Mode::c_s);
  const int ci_slot = basis6.mode_slot(Mode::c_i);
  for (int r = 0; r < basis6.size(); ++r)
    for (int c = 0; c < basis6.size(); ++c) {
      if (std::abs(h(r, c)) == 0.0) continue;
      CHECK(basis6.state(r)[cs_slot] == basis6.state(c)[cs_slot]);
      CHECK(basis6.state(r)[ci_slot] == basis6.state(c)[ci_slot]);
    }

  // regime warning
  auto p_bad = p;
  p_bad.gamma_c = 2.0 * *p.kappa;
  CHECK_FALSE(build_three_mode_model(p_bad, basis6).adiabatic_regime_ok);

  CHECK_THROWS_AS(build_three_mode_model(p, four_mode_basis(2, 2)),
                  ValidationError);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.g_eps = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = ModelParams{};
  p.theta = -0.5;
  p.validate();
  CHECK(p.theta == doctest::Approx(2.0 * pi - 0.5));
  p = ModelParams{};
  p.scheme = Scheme::ThreeMode;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}
