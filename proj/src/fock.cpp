#include "aptsim/fock.hpp"

#include <algorithm>
#include <cmath>

#include "aptsim/errors.hpp"

namespace aptsim {

namespace {

std::uint64_t pack_key(const std::vector<int>& occ) {
  // Occupations stay well below 255 and at most 8 modes are ever used.
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < occ.size(); ++i)
    key |= static_cast<std::uint64_t>(occ[i] & 0xff) << (8 * i);
  return key;
}

void enumerate(std::vector<int>& occ, std::size_t slot, int used, int per_cap,
               std::optional<int> total_cap,
               std::vector<std::vector<int>>& out) {
  if (slot == occ.size()) {
    out.push_back(occ);
    return;
  }
  int max_here = per_cap;
  if (total_cap) max_here = std::min(max_here, *total_cap - used);
  for (int n = 0; n <= max_here; ++n) {
    occ[slot] = n;
    enumerate(occ, slot + 1, used + n, per_cap, total_cap, out);
  }
  occ[slot] = 0;
}

SparseOp from_triplets(int dim, std::vector<Eigen::Triplet<cplx>> trips) {
  std::sort(trips.begin(), trips.end(),
            [](const Eigen::Triplet<cplx>& a, const Eigen::Triplet<cplx>& b) {
              return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
            });
  SparseOp op(dim, dim);
  op.setFromTriplets(trips.begin(), trips.end());
  op.makeCompressed();
  return op;
}

}  // namespace

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::a_s: return "a_s";
    case Mode::a_i: return "a_i";
    case Mode::b_s: return "b_s";
    case Mode::b_i: return "b_i";
    case Mode::c_s: return "c_s";
    case Mode::c_i: return "c_i";
  }
  return "?";
}

FockBasis::FockBasis(std::vector<Mode> modes, int per_mode_cap,
                     std::optional<int> total_cap)
    : modes_(std::move(modes)),
      per_mode_cap_(per_mode_cap),
      total_cap_(total_cap) {
  if (modes_.empty()) throw ValidationError("FockBasis: empty mode list");
  if (per_mode_cap_ < 0)
    throw ValidationError("FockBasis: per_mode_cap must be >= 0");
  if (total_cap_ && *total_cap_ < 0)
    throw ValidationError("FockBasis: total_cap must be >= 0");
  for (std::size_t i = 0; i < modes_.size(); ++i)
    for (std::size_t j = i + 1; j < modes_.size(); ++j)
      if (modes_[i] == modes_[j])
        throw ValidationError("FockBasis: duplicate mode label");

  std::vector<int> occ(modes_.size(), 0);
  enumerate(occ, 0, 0, per_mode_cap_, total_cap_, states_);
  lookup_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i)
    lookup_.emplace(pack_key(states_[i]), static_cast<int>(i));
}

const std::vector<int>& FockBasis::state(int index) const {
  return states_.at(static_cast<std::size_t>(index));
}

int FockBasis::index_of(const std::vector<int>& occupation) const {
  if (occupation.size() != modes_.size()) return -1;
  auto it = lookup_.find(pack_key(occupation));
  return it == lookup_.end() ? -1 : it->second;
}

int FockBasis::mode_slot(Mode m) const {
  for (std::size_t i = 0; i < modes_.size(); ++i)
    if (modes_[i] == m) return static_cast<int>(i);
  throw ValidationError(std::string("basis lacks mode ") + mode_name(m));
}

bool FockBasis::has_mode(Mode m) const {
  return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

FockBasis build_basis(const std::vector<Mode>& modes, int per_mode_cap,
                      std::optional<int> total_cap) {
  return FockBasis(modes, per_mode_cap, total_cap);
}

FockBasis four_mode_basis(int per_mode_cap, std::optional<int> total_cap) {
  return build_basis({Mode::a_s, Mode::a_i, Mode::b_s, Mode::b_i}, per_mode_cap,
                     total_cap);
}

FockBasis six_mode_basis(int per_mode_cap, std::optional<int> total_cap) {
  return build_basis({Mode::a_s, Mode::a_i, Mode::b_s, Mode::b_i, Mode::c_s,
                      Mode::c_i},
                     per_mode_cap, total_cap);
}

SparseOp ladder(const FockBasis& basis, Mode mode, LadderKind kind) {
  const int slot = basis.mode_slot(mode);
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(basis.size()));
  std::vector<int> target;
  for (int idx = 0; idx < basis.size(); ++idx) {
    const auto& occ = basis.state(idx);
    const int n = occ[static_cast<std::size_t>(slot)];
    switch (kind) {
      case LadderKind::number:
        if (n > 0) trips.emplace_back(idx, idx, cplx(n, 0.0));
        break;
      case LadderKind::annihilate: {
        if (n == 0) break;
        target = occ;
        target[static_cast<std::size_t>(slot)] = n - 1;
        const int row = basis.index_of(target);
        if (row >= 0) trips.emplace_back(row, idx, cplx(std::sqrt(n), 0.0));
        break;
      }
      case LadderKind::create: {
        target = occ;
        target[static_cast<std::size_t>(slot)] = n + 1;
        const int row = basis.index_of(target);
        if (row >= 0) trips.emplace_back(row, idx, cplx(std::sqrt(n + 1), 0.0));
        break;
      }
    }
  }
  return from_triplets(basis.size(), std::move(trips));
}

BrightDarkOps bright_dark_ops(const FockBasis& basis, Mode a_mode,
                              Mode b_mode) {
  const double s = 1.0 / std::sqrt(2.0);
  SparseOp a = ladder(basis, a_mode, LadderKind::annihilate);
  SparseOp b = ladder(basis, b_mode, LadderKind::annihilate);
  BrightDarkOps ops;
  ops.bright = s * (a + b);
  ops.dark = s * (a - b);
  ops.bright.makeCompressed();
  ops.dark.makeCompressed();
  return ops;
}

namespace {

struct FrequencyPair {
  int a_slot;
  int b_slot;
};

std::vector<FrequencyPair> paired_slots(const FockBasis& basis) {
  std::vector<FrequencyPair> pairs;
  const std::pair<Mode, Mode> freq[] = {{Mode::a_s, Mode::b_s},
                                        {Mode::a_i, Mode::b_i}};
  for (auto [am, bm] : freq) {
    const bool has_a = basis.has_mode(am);
    const bool has_b = basis.has_mode(bm);
    if (has_a != has_b)
      throw ValidationError(
          std::string("bd transform: basis lacks the partner of ") +
          mode_name(has_a ? am : bm));
    if (has_a) pairs.push_back({basis.mode_slot(am), basis.mode_slot(bm)});
  }
  if (pairs.empty())
    throw ValidationError("bd transform: basis has no a/b mode pair");
  return pairs;
}

}  // namespace

SparseOp bd_unitary(const FockBasis& basis) {
  if (!basis.total_cap() || *basis.total_cap() > basis.per_mode_cap())
    throw ValidationError(
        "bd transform: needs total_cap <= per_mode_cap so each frequency "
        "sector is closed under the basis change");
  const auto pairs = paired_slots(basis);
  const int dim = basis.size();
  const double s = 1.0 / std::sqrt(2.0);

  std::vector<SparseOp> plus_ops;   // (a^dag + b^dag)/sqrt(2) per frequency
  std::vector<SparseOp> minus_ops;  // (a^dag - b^dag)/sqrt(2)
  for (const auto& p : pairs) {
    Mode am = basis.modes()[static_cast<std::size_t>(p.a_slot)];
    Mode bm = basis.modes()[static_cast<std::size_t>(p.b_slot)];
    SparseOp ad = ladder(basis, am, LadderKind::create);
    SparseOp bd = ladder(basis, bm, LadderKind::create);
    SparseOp plus = s * (ad + bd);
    SparseOp minus = s * (ad - bd);
    plus.makeCompressed();
    minus.makeCompressed();
    plus_ops.push_back(std::move(plus));
    minus_ops.push_back(std::move(minus));
  }

  // Column for |n> is prod_mu [(a+b)/sqrt2]^n_a [(a-b)/sqrt2]^n_b |vac>
  // normalized; c-mode occupations (if any) are restored verbatim.
  std::vector<Eigen::Triplet<cplx>> trips;
  StateVector col(dim);
  for (int idx = 0; idx < basis.size(); ++idx) {
    const auto& occ = basis.state(idx);
    std::vector<int> seed(occ.size(), 0);
    for (std::size_t slot = 0; slot < occ.size(); ++slot) {
      bool in_pair = false;
      for (const auto& p : pairs)
        if (static_cast<int>(slot) == p.a_slot ||
            static_cast<int>(slot) == p.b_slot)
          in_pair = true;
      if (!in_pair) seed[slot] = occ[slot];
    }
    const int seed_idx = basis.index_of(seed);
    col.setZero();
    col(seed_idx) = 1.0;
    double norm_fac = 1.0;
    for (std::size_t f = 0; f < pairs.size(); ++f) {
      const int na = occ[static_cast<std::size_t>(pairs[f].a_slot)];
      const int nb = occ[static_cast<std::size_t>(pairs[f].b_slot)];
      for (int k = 0; k < na; ++k) col = plus_ops[f] * col;
      for (int k = 0; k < nb; ++k) col = minus_ops[f] * col;
      for (int k = 1; k <= na; ++k) norm_fac *= static_cast<double>(k);
      for (int k = 1; k <= nb; ++k) norm_fac *= static_cast<double>(k);
    }
    col /= std::sqrt(norm_fac);
    for (int r = 0; r < dim; ++r)
      if (col(r) != cplx(0.0, 0.0)) trips.emplace_back(r, idx, col(r));
  }
  return from_triplets(dim, std::move(trips));
}

StateVector bd_transform(const FockBasis& basis, const StateVector& psi,
                         BdDirection dir) {
  if (psi.size() != basis.size())
    throw ValidationError("bd transform: state/basis dimension mismatch");
  SparseOp w = bd_unitary(basis);
  if (dir == BdDirection::to_BD) return w.adjoint() * psi;
  return w * psi;
}

DensityMatrix bd_transform(const FockBasis& basis, const DensityMatrix& rho,
                           BdDirection dir) {
  if (rho.rows() != basis.size() || rho.cols() != basis.size())
    throw ValidationError("bd transform: state/basis dimension mismatch");
  SparseOp w = bd_unitary(basis);
  if (dir == BdDirection::to_BD) return w.adjoint() * rho * w;
  return w * rho * w.adjoint();
}

SparseOp bd_transform(const FockBasis& basis, const SparseOp& op,
                      BdDirection dir) {
  if (op.rows() != basis.size() || op.cols() != basis.size())
    throw ValidationError("bd transform: operator/basis dimension mismatch");
  SparseOp w = bd_unitary(basis);
  SparseOp out;
  if (dir == BdDirection::to_BD)
    out = (w.adjoint() * op * w);
  else
    out = (w * op * w.adjoint());
  out.makeCompressed();
  return out;
}

StateVector vacuum_state(const FockBasis& basis) {
  StateVector psi = StateVector::Zero(basis.size());
  psi(basis.index_of(std::vector<int>(
      static_cast<std::size_t>(basis.num_modes()), 0))) = 1.0;
  return psi;
}

DensityMatrix vacuum_density(const FockBasis& basis) {
  StateVector psi = vacuum_state(basis);
  return psi * psi.adjoint();
}

StateVector basis_state(const FockBasis& basis,
                        const std::vector<int>& occupation) {
  const int idx = basis.index_of(occupation);
  if (idx < 0)
    throw ValidationError("basis_state: occupation outside the basis");
  StateVector psi = StateVector::Zero(basis.size());
  psi(idx) = 1.0;
  return psi;
}

}  // namespace aptsim
