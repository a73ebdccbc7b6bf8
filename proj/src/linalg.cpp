#include "surfrep/linalg.hpp"

#include <algorithm>

namespace surfrep {

RankedSvd ranked_svd(const RealMatrix& m, RankTolerance tol) {
  RankedSvd out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.u = RealMatrix::Identity(m.rows(), m.rows());
    out.v = RealMatrix::Identity(m.cols(), m.cols());
    out.singular = RealVector::Zero(0);
    return out;
  }
  Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.singular = svd.singularValues();
  const double reference = std::max(out.singular(0), tol.floor);
  const double cutoff = tol.relative * reference;
  for (Eigen::Index k = 0; k < out.singular.size(); ++k)
    if (out.singular(k) > cutoff && out.singular(k) > 0.0) ++out.rank;
  return out;
}

int numerical_rank(const RealMatrix& m, RankTolerance tol) { return ranked_svd(m, tol).rank; }

RealMatrix null_space(const RealMatrix& m, RankTolerance tol) {
  const RankedSvd s = ranked_svd(m, tol);
  return s.v.rightCols(m.cols() - s.rank);
}

RealMatrix range_basis(const RealMatrix& m, RankTolerance tol) {
  const RankedSvd s = ranked_svd(m, tol);
  return s.u.leftCols(s.rank);
}

RealMatrix cokernel_basis(const RealMatrix& m, RankTolerance tol) {
  const RankedSvd s = ranked_svd(m, tol);
  return s.u.rightCols(m.rows() - s.rank);
}

}  // namespace surfrep
