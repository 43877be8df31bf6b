#pragma once

#include <cmath>

#include "softblock/designs.hpp"
#include "softblock/types.hpp"

namespace softblock {

double diff_in_means(const OutcomeVector& y, const Assignment& a);

struct AteEstimate {
  double estimate = 0.0;
  double se = 0.0;  // heteroskedasticity-robust (HC0)
};

// Least squares of y on [1, a, Xc, a * Xc] with Xc column-centered;
// constant covariate columns are dropped.
AteEstimate lin_adjusted_ate(const OutcomeVector& y, const Assignment& a,
                             const CovariateMatrix& X);

// tau_hat_i = (2a_i - 1)(y_i - sum_j w_ij y_j), weights proportional to
// support-graph similarities over cut edges and normalized to sum 1.
VectorXd design_ite(const Design& design, const OutcomeVector& y);

// Mean of design_ite.
double design_ate(const Design& design, const OutcomeVector& y);

// Per-arm k-NN regressions, own observed outcome kept for the observed arm.
VectorXd knn_t_learner(const CovariateMatrix& X, const OutcomeVector& y,
                       const Assignment& a, int k);

// Mean over pairs of (y_treated - y_control); unmatched unit excluded.
double matched_pair_ate(const Design& design, const OutcomeVector& y);

struct BoundInputs {
  double lipschitz = 0.0;   // L
  double noise_bound = 0.0;  // b, |eps| <= b
  double delta = 0.05;       // tail probability

  double c() const {
    return noise_bound * std::sqrt(2.0 * std::log(2.0 / delta));
  }
};

// C * ||w||_2 + L * sum_i w_i d_i
double pointwise_error_bound(const VectorXd& w, const VectorXd& dists,
                             const BoundInputs& inputs);

// (e_sum - ordered-pair cut) / d_min, with d_min = min_i sum_j e_ij.
double cut_error_bound(const SimilarityGraph& e, const Assignment& a);

}  // namespace softblock
