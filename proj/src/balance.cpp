#include "softblock/balance.hpp"

#include <cmath>
#include <string>

namespace softblock {

namespace {

void require_both_arms(const Assignment& a) {
  if (a.treated() == 0 || a.control() == 0) {
    throw EmptyArm("assignment has an empty arm (n1=" +
                   std::to_string(a.treated()) +
                   ", n0=" + std::to_string(a.control()) + ")");
  }
}

MatrixXd sample_covariance(const MatrixXd& X) {
  const MatrixXd centered = X.rowwise() - X.colwise().mean();
  return centered.transpose() * centered /
         static_cast<double>(X.rows() - 1);
}

VectorXd mean_difference(const MatrixXd& X, const Assignment& a) {
  const Eigen::Index d = X.cols();
  VectorXd m1 = VectorXd::Zero(d), m0 = VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    (a.a[i] == 1 ? m1 : m0) += X.row(i).transpose();
  }
  return m1 / a.treated() - m0 / a.control();
}

}  // namespace

double friedman_rafsky(const CovariateMatrix& X, const Assignment& a) {
  require_both_arms(a);
  const SpanningTree mst = euclidean_mst(X);
  int crossing = 0;
  for (const auto& e : mst.edges) {
    if (a.a[e.i] != a.a[e.j]) ++crossing;
  }
  return static_cast<double>(crossing) / static_cast<double>(X.n() - 1);
}

MahalanobisMetric::MahalanobisMetric(const CovariateMatrix& X)
    : X_(X.values) {
  MatrixXd cov = sample_covariance(X_);
  llt_.compute(cov);
  if (llt_.info() != Eigen::Success) {
    const double ridge =
        1e-8 * cov.trace() / static_cast<double>(cov.cols());
    cov.diagonal().array() += ridge > 0.0 ? ridge : 1e-12;
    llt_.compute(cov);
    if (llt_.info() != Eigen::Success) {
      throw RankDeficient("covariance not PSD even after ridge");
    }
  }
}

double MahalanobisMetric::operator()(const Assignment& a) const {
  require_both_arms(a);
  const VectorXd diff = mean_difference(X_, a);
  return diff.dot(llt_.solve(diff));
}

double mahalanobis_balance(const CovariateMatrix& X, const Assignment& a) {
  return MahalanobisMetric(X)(a);
}

VectorXd standardized_mean_diff(const CovariateMatrix& X,
                                const Assignment& a) {
  require_both_arms(a);
  const VectorXd diff = mean_difference(X.values, a);
  VectorXd out(X.dim());
  for (Eigen::Index c = 0; c < X.dim(); ++c) {
    const double mean = X.values.col(c).mean();
    const double var = (X.values.col(c).array() - mean).square().sum() /
                       static_cast<double>(X.n() - 1);
    out[c] = var > 0.0 ? diff[c] / std::sqrt(var) : 0.0;
  }
  return out;
}

double kernel_imbalance(const MatrixXd& K, const Assignment& a) {
  const VectorXd u = a.u();
  const double n = static_cast<double>(a.n());
  return 4.0 / (n * n) * u.dot(K * u);
}

BalanceReport balance_report(const CovariateMatrix& X, const Assignment& a,
                             double bandwidth) {
  require_both_arms(a);
  const DistanceMatrix d = pairwise_distances(X);
  const double h = bandwidth > 0.0 ? bandwidth : median_bandwidth(d);
  MatrixXd K = gaussian_similarity(d, h).e;
  K.diagonal().setOnes();  // Gram matrix: k(x, x) = 1

  BalanceReport report;
  report.friedman_rafsky = friedman_rafsky(X, a);
  report.mahalanobis = mahalanobis_balance(X, a);
  report.smd = standardized_mean_diff(X, a);
  report.kernel_imbalance = kernel_imbalance(K, a);
  report.n1 = a.treated();
  report.n0 = a.control();
  return report;
}

}  // namespace softblock
