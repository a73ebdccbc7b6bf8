#pragma once

// SVD-based rank and subspace helpers shared by the cohomology and reduction code.

#include <Eigen/Dense>
#include <complex>

namespace surfrep {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// How singular values are compared: sigma_k counts iff sigma_k > relative * max(sigma_1, floor).
///
/// floor = 0 gives a purely relative test; floor = 1 is used for operators whose
/// natural scale is O(1) (evaluated Ad matrices) so that exact zeros stay rank 0.
struct RankTolerance {
  double relative = 1e-8;
  double floor = 0.0;
};

/// Thin result of an SVD with the numerical rank already decided.
struct RankedSvd {
  RealMatrix u;          // full left singular vectors (rows x rows)
  RealVector singular;   // descending
  RealMatrix v;          // full right singular vectors (cols x cols)
  int rank = 0;
};

RankedSvd ranked_svd(const RealMatrix& m, RankTolerance tol);

int numerical_rank(const RealMatrix& m, RankTolerance tol);

/// Orthonormal basis (columns) of ker m.  A 0-row matrix has the full space as kernel.
RealMatrix null_space(const RealMatrix& m, RankTolerance tol);

/// Orthonormal basis (columns) of im m.
RealMatrix range_basis(const RealMatrix& m, RankTolerance tol);

/// Orthonormal basis (columns) of (im m)^perp in the target space.
RealMatrix cokernel_basis(const RealMatrix& m, RankTolerance tol);

/// Orthogonal projector coefficients: basis^T * x for an orthonormal column basis.
inline RealVector coordinates_in(const RealMatrix& orthonormal_basis, const RealVector& x) {
  return orthonormal_basis.transpose() * x;
}

}  // namespace surfrep
