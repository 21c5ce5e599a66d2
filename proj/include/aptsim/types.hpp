#pragma once

#include <complex>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace aptsim {

using cplx = std::complex<double>;

// Operators are stored compressed with sorted, duplicate-free entries so that
// construction is bit-reproducible.
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// Mixed states on a FockBasis. Hermiticity is an invariant of the producing
// operations, not of the type itself.
using DensityMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx iu{0.0, 1.0};

/// Wrap an angle to [0, 2*pi).
double wrap_angle(double theta);

}  // namespace aptsim
