#include "softblock/types.hpp"

namespace softblock {

CovariateMatrix CovariateMatrix::make(MatrixXd m) {
  if (m.rows() < 2 || m.cols() < 1) {
    throw InvalidData("covariate matrix needs n >= 2, D >= 1");
  }
  if (!m.allFinite()) {
    throw InvalidData("covariate matrix contains NaN/Inf");
  }
  return CovariateMatrix{std::move(m)};
}

OutcomeVector OutcomeVector::make(VectorXd v) {
  if (!v.allFinite()) {
    throw InvalidData("outcome vector contains NaN/Inf");
  }
  return OutcomeVector{std::move(v)};
}

Assignment Assignment::make(VectorXi v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0 && v[i] != 1) {
      throw InvalidData("assignment entries must be 0 or 1");
    }
  }
  return Assignment{std::move(v)};
}

}  // namespace softblock
