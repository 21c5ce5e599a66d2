#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aptsim/types.hpp"

namespace aptsim {

/// Waveguide mode labels. Bright/dark supermodes are operator combinations
/// (see bright_dark_ops and bd_transform), not basis labels.
enum class Mode : int { a_s = 0, a_i = 1, b_s = 2, b_i = 3, c_s = 4, c_i = 5 };

const char* mode_name(Mode m);

/// Truncated multimode occupation-number basis.
///
/// Enumerates every tuple (n_1, ..., n_k) with n_j <= per_mode_cap and
/// sum(n_j) <= total_cap (when set), in lexicographic order of the declared
/// mode order. Index <-> tuple is a bijection.
class FockBasis {
 public:
  FockBasis(std::vector<Mode> modes, int per_mode_cap,
            std::optional<int> total_cap);

  int size() const { return static_cast<int>(states_.size()); }
  int num_modes() const { return static_cast<int>(modes_.size()); }
  const std::vector<Mode>& modes() const { return modes_; }
  int per_mode_cap() const { return per_mode_cap_; }
  std::optional<int> total_cap() const { return total_cap_; }

  const std::vector<int>& state(int index) const;
  /// Index of an occupation tuple, or -1 if it is outside the basis.
  int index_of(const std::vector<int>& occupation) const;

  /// Position of a mode in the declared order; throws if absent.
  int mode_slot(Mode m) const;
  bool has_mode(Mode m) const;

 private:
  std::vector<Mode> modes_;
  int per_mode_cap_;
  std::optional<int> total_cap_;
  std::vector<std::vector<int>> states_;
  std::unordered_map<std::uint64_t, int> lookup_;
};

FockBasis build_basis(const std::vector<Mode>& modes, int per_mode_cap,
                      std::optional<int> total_cap = std::nullopt);

/// The eliminated model's four modes (a_s, a_i, b_s, b_i).
FockBasis four_mode_basis(int per_mode_cap, std::optional<int> total_cap);
/// The pre-elimination model's six modes (adds c_s, c_i).
FockBasis six_mode_basis(int per_mode_cap, std::optional<int> total_cap);

enum class LadderKind { annihilate, create, number };

/// Ladder operator of one mode on the truncated basis.
/// <...,n-1,...|a|...,n,...> = sqrt(n); creation is the exact conjugate
/// transpose restricted to the basis; number is diagonal n.
SparseOp ladder(const FockBasis& basis, Mode mode, LadderKind kind);

/// Annihilation operators of the bright/dark supermodes
/// B = (a + b)/sqrt(2), D = (a - b)/sqrt(2) of one frequency.
struct BrightDarkOps {
  SparseOp bright;
  SparseOp dark;
};
BrightDarkOps bright_dark_ops(const FockBasis& basis, Mode a_mode, Mode b_mode);

enum class BdDirection { to_BD, to_waveguide };

/// Unitary Fock-space matrix W of the 50:50 basis change between waveguide
/// modes (a, b) and supermodes (B, D) on both frequencies. In the transformed
/// labels the a-slots count B photons and the b-slots count D photons.
///
/// Requires a basis closed under photon-number-preserving redistribution
/// within each frequency pair, i.e. total_cap set and <= per_mode_cap.
SparseOp bd_unitary(const FockBasis& basis);

StateVector bd_transform(const FockBasis& basis, const StateVector& psi,
                         BdDirection dir);
DensityMatrix bd_transform(const FockBasis& basis, const DensityMatrix& rho,
                           BdDirection dir);
SparseOp bd_transform(const FockBasis& basis, const SparseOp& op,
                      BdDirection dir);

/// Vacuum state vector / density matrix on a basis.
StateVector vacuum_state(const FockBasis& basis);
DensityMatrix vacuum_density(const FockBasis& basis);

/// State with the given occupation per mode slot (all others zero).
StateVector basis_state(const FockBasis& basis,
                        const std::vector<int>& occupation);

}  // namespace aptsim
