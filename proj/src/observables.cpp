#include "aptsim/observables.hpp"

#include <algorithm>
#include <cmath>

#include "aptsim/errors.hpp"

namespace aptsim {

std::array<std::pair<Mode, Mode>, kNumG2> g2_pairs() {
  return {{{Mode::a_s, Mode::a_i},
           {Mode::b_s, Mode::b_i},
           {Mode::a_s, Mode::b_i},
           {Mode::a_i, Mode::b_s}}};
}

std::array<G3Triple, kNumG3> g3_triples() {
  return {{{Mode::a_s, Mode::a_i, Mode::b_s},
           {Mode::a_s, Mode::a_i, Mode::b_i},
           {Mode::b_s, Mode::b_i, Mode::a_s},
           {Mode::b_s, Mode::b_i, Mode::a_i}}};
}

namespace {

const std::array<Mode, 4> kRecordModes = {Mode::a_s, Mode::a_i, Mode::b_s,
                                          Mode::b_i};

std::vector<OpFactor> normal_ordered_spec(const std::vector<Mode>& modes) {
  // <m1+ m2+ ... mk+ mk ... m2 m1>
  std::vector<OpFactor> spec;
  spec.reserve(2 * modes.size());
  for (Mode m : modes) spec.push_back({m, true});
  for (auto it = modes.rbegin(); it != modes.rend(); ++it)
    spec.push_back({*it, false});
  return spec;
}

SparseOp product_op(const FockBasis& basis, const std::vector<OpFactor>& spec) {
  SparseOp out;
  bool first = true;
  // Right-to-left so annihilators act first on kets.
  for (auto it = spec.rbegin(); it != spec.rend(); ++it) {
    SparseOp f = ladder(basis, it->mode,
                        it->dagger ? LadderKind::create : LadderKind::annihilate);
    if (first) {
      out = std::move(f);
      first = false;
    } else {
      out = (f * out);
    }
  }
  out.makeCompressed();
  return out;
}

cplx sparse_expectation(const SparseOp& op, const DensityMatrix& rho) {
  // tr(rho * op) via the nonzeros of op.
  cplx acc = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOp::InnerIterator it(op, k); it; ++it)
      acc += rho(it.col(), it.row()) * it.value();
  return acc;
}

cplx sparse_expectation(const SparseOp& op, const StateVector& psi) {
  return psi.dot(op * psi);  // <psi|op|psi>, unnormalized
}

void check_normal_order(const std::vector<OpFactor>& spec) {
  bool seen_plain = false;
  for (const auto& f : spec) {
    if (!f.dagger)
      seen_plain = true;
    else if (seen_plain)
      throw ValidationError("operator specification not normal ordered");
  }
}

}  // namespace

FockObservables::FockObservables(const FockBasis& basis) : dim_(basis.size()) {
  for (std::size_t i = 0; i < 4; ++i)
    number_[i] = ladder(basis, kRecordModes[i], LadderKind::number);

  const auto pairs = g2_pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i)
    g2_ops_[i] =
        product_op(basis, normal_ordered_spec({pairs[i].first, pairs[i].second}));

  const auto triples = g3_triples();
  for (std::size_t i = 0; i < triples.size(); ++i)
    g3_ops_[i] = product_op(
        basis,
        normal_ordered_spec({triples[i].pair_1, triples[i].pair_2,
                             triples[i].single}));

  g4_op_ = product_op(basis, normal_ordered_spec({Mode::a_s, Mode::a_i,
                                                  Mode::b_s, Mode::b_i}));

  auto bd_s = bright_dark_ops(basis, Mode::a_s, Mode::b_s);
  auto bd_i = bright_dark_ops(basis, Mode::a_i, Mode::b_i);
  auto dag = [](const SparseOp& o) { return SparseOp(o.adjoint()); };
  bd_number_[0] = (dag(bd_s.bright) * bd_s.bright);
  bd_number_[1] = (dag(bd_i.bright) * bd_i.bright);
  bd_number_[2] = (dag(bd_s.dark) * bd_s.dark);
  bd_number_[3] = (dag(bd_i.dark) * bd_i.dark);
  bd_pair_[0] = (bd_s.bright * bd_i.bright);
  bd_pair_[1] = (bd_s.bright * bd_i.dark);
  bd_pair_[2] = (bd_s.dark * bd_i.bright);
  bd_pair_[3] = (bd_s.dark * bd_i.dark);
}

namespace {

template <typename State>
CorrelationRecord make_record(const std::array<SparseOp, 4>& number,
                              const std::array<SparseOp, kNumG2>& g2_ops,
                              const std::array<SparseOp, kNumG3>& g3_ops,
                              const SparseOp& g4_op,
                              const std::array<SparseOp, 4>& bd_number,
                              const std::array<SparseOp, 4>& bd_pair,
                              const State& state, double z, double theta,
                              double weight) {
  CorrelationRecord rec;
  rec.z = z;
  rec.theta = theta;
  rec.weight = weight;
  for (std::size_t i = 0; i < 4; ++i)
    rec.n[i] = sparse_expectation(number[i], state).real();
  for (std::size_t i = 0; i < kNumG2; ++i)
    rec.G2[i] = sparse_expectation(g2_ops[i], state).real();
  for (std::size_t i = 0; i < kNumG3; ++i)
    rec.G3[i] = sparse_expectation(g3_ops[i], state).real();
  rec.G4 = sparse_expectation(g4_op, state).real();
  rec.bd.n_B_s = sparse_expectation(bd_number[0], state).real();
  rec.bd.n_B_i = sparse_expectation(bd_number[1], state).real();
  rec.bd.n_D_s = sparse_expectation(bd_number[2], state).real();
  rec.bd.n_D_i = sparse_expectation(bd_number[3], state).real();
  rec.bd.bs_bi = sparse_expectation(bd_pair[0], state);
  rec.bd.bs_di = sparse_expectation(bd_pair[1], state);
  rec.bd.ds_bi = sparse_expectation(bd_pair[2], state);
  rec.bd.ds_di = sparse_expectation(bd_pair[3], state);
  fill_derived_ratios(rec);
  return rec;
}

}  // namespace

CorrelationRecord FockObservables::record(const DensityMatrix& rho, double z,
                                          double theta) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw ValidationError("observables: state/basis dimension mismatch");
  return make_record(number_, g2_ops_, g3_ops_, g4_op_, bd_number_, bd_pair_,
                     rho, z, theta, rho.trace().real());
}

CorrelationRecord FockObservables::record(const StateVector& psi, double z,
                                          double theta) const {
  if (psi.size() != dim_)
    throw ValidationError("observables: state/basis dimension mismatch");
  return make_record(number_, g2_ops_, g3_ops_, g4_op_, bd_number_, bd_pair_,
                     psi, z, theta, psi.squaredNorm());
}

cplx normally_ordered_moment(const FockBasis& basis, const DensityMatrix& rho,
                             const std::vector<OpFactor>& spec) {
  check_normal_order(spec);
  if (rho.rows() != basis.size())
    throw ValidationError("moment: state/basis dimension mismatch");
  return sparse_expectation(product_op(basis, spec), rho);
}

cplx normally_ordered_moment(const FockBasis& basis, const StateVector& psi,
                             const std::vector<OpFactor>& spec) {
  check_normal_order(spec);
  if (psi.size() != basis.size())
    throw ValidationError("moment: state/basis dimension mismatch");
  return sparse_expectation(product_op(basis, spec), psi);
}

cplx normally_ordered_moment(const CovarianceState& cov,
                             const std::vector<OpFactor>& spec) {
  return wick_moment(cov, spec);
}

CorrelationRecord record_from_covariance(const CovarianceState& cov,
                                         double theta) {
  CorrelationRecord rec;
  rec.z = cov.z;
  rec.theta = theta;
  rec.weight = 1.0;
  for (std::size_t i = 0; i < 4; ++i)
    rec.n[i] = cov.n_block(cov_index(kRecordModes[i]),
                           cov_index(kRecordModes[i])).real();
  const auto pairs = g2_pairs();
  for (std::size_t i = 0; i < kNumG2; ++i)
    rec.G2[i] = wick_moment(cov, normal_ordered_spec(
                                     {pairs[i].first, pairs[i].second}))
                    .real();
  const auto triples = g3_triples();
  for (std::size_t i = 0; i < kNumG3; ++i)
    rec.G3[i] =
        wick_moment(cov, normal_ordered_spec({triples[i].pair_1,
                                              triples[i].pair_2,
                                              triples[i].single}))
            .real();
  rec.G4 = g4_from_covariance(cov);

  // Bright/dark quadratics from the blocks.
  const auto& n = cov.n_block;
  const auto& m = cov.m_block;
  // cov order: a_s=0, b_s=1, a_i=2, b_i=3
  rec.bd.n_B_s = 0.5 * (n(0, 0) + n(1, 1) + n(0, 1) + n(1, 0)).real();
  rec.bd.n_D_s = 0.5 * (n(0, 0) + n(1, 1) - n(0, 1) - n(1, 0)).real();
  rec.bd.n_B_i = 0.5 * (n(2, 2) + n(3, 3) + n(2, 3) + n(3, 2)).real();
  rec.bd.n_D_i = 0.5 * (n(2, 2) + n(3, 3) - n(2, 3) - n(3, 2)).real();
  rec.bd.bs_bi = 0.5 * (m(0, 2) + m(0, 3) + m(1, 2) + m(1, 3));
  rec.bd.bs_di = 0.5 * (m(0, 2) - m(0, 3) + m(1, 2) - m(1, 3));
  rec.bd.ds_bi = 0.5 * (m(0, 2) + m(0, 3) - m(1, 2) - m(1, 3));
  rec.bd.ds_di = 0.5 * (m(0, 2) - m(0, 3) - m(1, 2) + m(1, 3));
  fill_derived_ratios(rec);
  return rec;
}

double g4_ratio(double G4, const std::array<double, 4>& n) {
  double denom = 1.0;
  for (double v : n) denom *= v;
  if (denom == 0.0 || !(n[0] > 0.0) || !(n[1] > 0.0) || !(n[2] > 0.0) ||
      !(n[3] > 0.0))
    throw UndefinedObservableError("g4: zero mean photon number denominator");
  return G4 / denom;
}

double r4_ratio(double G4, double G2_intra_a, double G2_intra_b) {
  if (!(G2_intra_a > 0.0) || !(G2_intra_b > 0.0))
    throw UndefinedObservableError("R4: zero intra-pair G2 denominator");
  return G4 / (G2_intra_a * G2_intra_b);
}

double r3_ratio(double G3, double G2_pair, double n_single) {
  if (!(G2_pair > 0.0) || !(n_single > 0.0))
    throw UndefinedObservableError("R3: zero denominator");
  return G3 / (G2_pair * n_single);
}

void fill_derived_ratios(CorrelationRecord& rec) {
  try {
    rec.g4 = g4_ratio(rec.G4, rec.n);
  } catch (const UndefinedObservableError&) {
    rec.g4.reset();
  }
  try {
    rec.r4 = r4_ratio(rec.G4, rec.G2[0], rec.G2[1]);
  } catch (const UndefinedObservableError&) {
    rec.r4.reset();
  }
  // Triple (pair; single): pair G2 index 0 for (a_s,a_i), 1 for (b_s,b_i);
  // single photon numbers indexed in (a_s, a_i, b_s, b_i) order.
  const int pair_g2[kNumG3] = {0, 0, 1, 1};
  const int single_n[kNumG3] = {2, 3, 0, 1};
  for (int i = 0; i < kNumG3; ++i) {
    try {
      rec.r3[static_cast<std::size_t>(i)] =
          r3_ratio(rec.G3[static_cast<std::size_t>(i)],
                   rec.G2[static_cast<std::size_t>(pair_g2[i])],
                   rec.n[static_cast<std::size_t>(single_n[i])]);
    } catch (const UndefinedObservableError&) {
      rec.r3[static_cast<std::size_t>(i)].reset();
    }
  }
}

double visibility(const std::vector<double>& curve) {
  if (curve.empty()) throw ValidationError("visibility: empty curve");
  const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
  const double sum = *hi + *lo;
  if (sum == 0.0)
    throw UndefinedObservableError("visibility: max + min is zero");
  return (*hi - *lo) / sum;
}

}  // namespace aptsim
