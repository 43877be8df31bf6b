#pragma once

#include "softblock/graph.hpp"
#include "softblock/types.hpp"

namespace softblock {

struct BalanceReport {
  double friedman_rafsky = 0.0;
  double mahalanobis = 0.0;
  VectorXd smd;
  double kernel_imbalance = 0.0;
  int n1 = 0, n0 = 0;
};

// Fraction of pooled-MST edges crossing arms, in (0, 1]. The MST uses the
// same deterministic tie-break as the design path, so a SoftBlock
// assignment scores exactly 1 on its own data.
double friedman_rafsky(const CovariateMatrix& X, const Assignment& a);

// (xbar1 - xbar0)' Sigma^-1 (xbar1 - xbar0), pooled sample covariance,
// ridge-regularized when singular.
double mahalanobis_balance(const CovariateMatrix& X, const Assignment& a);

// Precomputed covariance factorization for repeated evaluations.
class MahalanobisMetric {
 public:
  explicit MahalanobisMetric(const CovariateMatrix& X);
  double operator()(const Assignment& a) const;

 private:
  const MatrixXd X_;
  Eigen::LLT<MatrixXd> llt_;
};

// Per covariate: (xbar1 - xbar0) / pooled sd, 0 for constant columns.
VectorXd standardized_mean_diff(const CovariateMatrix& X, const Assignment& a);

// (4/N^2) u' K u with u = 2a - 1; K is a Gram matrix with diagonal intact.
double kernel_imbalance(const MatrixXd& K, const Assignment& a);

// bandwidth <= 0 selects the median heuristic for the kernel term.
BalanceReport balance_report(const CovariateMatrix& X, const Assignment& a,
                             double bandwidth = 0.0);

}  // namespace softblock
