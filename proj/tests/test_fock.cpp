#include <random>

#include "aptsim/errors.hpp"
#include "aptsim/fock.hpp"
#include "doctest.h"

using namespace aptsim;

namespace {

// Independent brute-force count of admissible occupation tuples.
int count_tuples(int n_modes, int per_cap, int total_cap) {
  std::vector<int> occ(static_cast<std::size_t>(n_modes), 0);
  int count = 0;
  for (;;) {
    int total = 0;
    for (int v : occ) total += v;
    if (total <= total_cap) ++count;
    int slot = n_modes - 1;
    while (slot >= 0) {
      if (++occ[static_cast<std::size_t>(slot)] <= per_cap) break;
      occ[static_cast<std::size_t>(slot)] = 0;
      --slot;
    }
    if (slot < 0) break;
  }
  return count;
}

}  // namespace

TEST_CASE("basis sizes") {
  CHECK(four_mode_basis(1, std::nullopt).size() == 16);  // 2^4 tuples
  CHECK(four_mode_basis(10, 2).size() == 15);            // C(2+4, 4)
  CHECK(four_mode_basis(10, 2).size() == count_tuples(4, 10, 2));
  CHECK(four_mode_basis(10, 10).size() == 1001);
  CHECK(four_mode_basis(10, 10).size() == count_tuples(4, 10, 10));
  CHECK_THROWS_AS(build_basis({}, 3, std::nullopt), ValidationError);
  CHECK_THROWS_AS(build_basis({Mode::a_s}, -1, std::nullopt), ValidationError);
}

TEST_CASE("index/tuple bijection for randomized parameters") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> cap_dist(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const int per_cap = cap_dist(rng);
    const int total = cap_dist(rng) + per_cap;
    FockBasis basis = four_mode_basis(per_cap, total);
    for (int i = 0; i < basis.size(); ++i)
      CHECK(basis.index_of(basis.state(i)) == i);
    // Lexicographic and duplicate-free ordering.
    for (int i = 1; i < basis.size(); ++i)
      CHECK(basis.state(i - 1) < basis.state(i));
  }
}

TEST_CASE("ladder matrix elements") {
  FockBasis basis = build_basis({Mode::a_s}, 3, std::nullopt);
  SparseOp a = ladder(basis, Mode::a_s, LadderKind::annihilate);
  Eigen::MatrixXcd ad = Eigen::MatrixXcd(
      ladder(basis, Mode::a_s, LadderKind::create));
  const int i0 = basis.index_of({0}), i1 = basis.index_of({1}),
            i2 = basis.index_of({2});
  CHECK(Eigen::MatrixXcd(a)(i0, i1).real() == doctest::Approx(1.0));
  CHECK(Eigen::MatrixXcd(a)(i1, i2).real() ==
        doctest::Approx(std::sqrt(2.0)));
  // creation is exactly the conjugate transpose
  CHECK((ad - Eigen::MatrixXcd(a).adjoint()).cwiseAbs().maxCoeff() == 0.0);
  // number is diagonal n
  Eigen::MatrixXcd n =
      Eigen::MatrixXcd(ladder(basis, Mode::a_s, LadderKind::number));
  CHECK(n(i2, i2).real() == doctest::Approx(2.0));
  CHECK_THROWS_AS(ladder(basis, Mode::c_s, LadderKind::number),
                  ValidationError);
}

TEST_CASE("truncated commutator") {
  // Two-level sector: [a, a+] = diag(+1, -1).
  FockBasis basis2 = build_basis({Mode::a_s}, 1, std::nullopt);
  Eigen::MatrixXcd a =
      Eigen::MatrixXcd(ladder(basis2, Mode::a_s, LadderKind::annihilate));
  Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
  CHECK(comm(basis2.index_of({0}), basis2.index_of({0})).real() ==
        doctest::Approx(1.0));
  CHECK(comm(basis2.index_of({1}), basis2.index_of({1})).real() ==
        doctest::Approx(-1.0));

  // [a, a+] = 1 on every state strictly below all applicable caps.
  FockBasis basis = four_mode_basis(4, 6);
  for (Mode m : {Mode::a_s, Mode::a_i, Mode::b_s, Mode::b_i}) {
    Eigen::MatrixXcd am =
        Eigen::MatrixXcd(ladder(basis, m, LadderKind::annihilate));
    Eigen::MatrixXcd cm = am * am.adjoint() - am.adjoint() * am;
    const int slot = basis.mode_slot(m);
    for (int i = 0; i < basis.size(); ++i) {
      const auto& occ = basis.state(i);
      int total = 0;
      for (int v : occ) total += v;
      if (occ[static_cast<std::size_t>(slot)] < 4 && total < 6)
        CHECK(std::abs(cm(i, i) - cplx(1.0, 0.0)) < 1e-14);
    }
  }
}

TEST_CASE("bd transform of states") {
  FockBasis basis = four_mode_basis(2, 2);

  SUBCASE("vacuum is fixed") {
    StateVector vac = vacuum_state(basis);
    StateVector out = bd_transform(basis, vac, BdDirection::to_BD);
    CHECK((out - vac).norm() < 1e-14);
  }

  SUBCASE("single photon splits evenly") {
    StateVector psi = basis_state(basis, {1, 0, 0, 0});  // a_s photon
    StateVector out = bd_transform(basis, psi, BdDirection::to_BD);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(out(basis.index_of({1, 0, 0, 0})) - cplx(s, 0.0)) < 1e-14);
    CHECK(std::abs(out(basis.index_of({0, 0, 1, 0})) - cplx(s, 0.0)) < 1e-14);
  }

  SUBCASE("round trip is the identity") {
    std::mt19937 rng(7);
    std::normal_distribution<double> dist;
    StateVector psi(basis.size());
    for (int i = 0; i < basis.size(); ++i)
      psi(i) = cplx(dist(rng), dist(rng));
    psi.normalize();
    StateVector rt = bd_transform(
        basis, bd_transform(basis, psi, BdDirection::to_BD),
        BdDirection::to_waveguide);
    CHECK((rt - psi).norm() < 1e-12);
  }
}

TEST_CASE("bd transform unitarity and operator map") {
  FockBasis basis = four_mode_basis(3, 3);
  SparseOp w = bd_unitary(basis);
  Eigen::MatrixXcd wd = Eigen::MatrixXcd(w);
  CHECK((wd.adjoint() * wd - Eigen::MatrixXcd::Identity(basis.size(),
                                                        basis.size()))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // a_s+ a_s maps to (B+B + D+D + B+D + D+B)/2, with B and D living in the
  // a_s / b_s slots of the transformed labels.
  SparseOp n_as = ladder(basis, Mode::a_s, LadderKind::number);
  Eigen::MatrixXcd got =
      Eigen::MatrixXcd(bd_transform(basis, n_as, BdDirection::to_BD));
  Eigen::MatrixXcd b =
      Eigen::MatrixXcd(ladder(basis, Mode::a_s, LadderKind::annihilate));
  Eigen::MatrixXcd d =
      Eigen::MatrixXcd(ladder(basis, Mode::b_s, LadderKind::annihilate));
  Eigen::MatrixXcd expected = 0.5 * (b.adjoint() * b + d.adjoint() * d +
                                     b.adjoint() * d + d.adjoint() * b);
  CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);

  // needs a closed basis
  CHECK_THROWS_AS(bd_unitary(four_mode_basis(1, std::nullopt)),
                  ValidationError);
}
