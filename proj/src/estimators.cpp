#include "softblock/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace softblock {

namespace {

void require_both_arms(const Assignment& a) {
  if (a.treated() == 0 || a.control() == 0) {
    throw EmptyArm("assignment has an empty arm");
  }
}

}  // namespace

double diff_in_means(const OutcomeVector& y, const Assignment& a) {
  require_both_arms(a);
  double s1 = 0.0, s0 = 0.0;
  for (Eigen::Index i = 0; i < y.n(); ++i) {
    (a.a[i] == 1 ? s1 : s0) += y.y[i];
  }
  return s1 / a.treated() - s0 / a.control();
}

AteEstimate lin_adjusted_ate(const OutcomeVector& y, const Assignment& a,
                             const CovariateMatrix& X) {
  require_both_arms(a);
  const Eigen::Index n = X.n();

  // drop constant columns; keep the centered versions of the rest
  std::vector<Eigen::Index> keep;
  MatrixXd Xc(n, X.dim());
  for (Eigen::Index c = 0; c < X.dim(); ++c) {
    VectorXd col = X.values.col(c).array() - X.values.col(c).mean();
    if (col.squaredNorm() > 1e-24 * static_cast<double>(n)) {
      Xc.col(static_cast<Eigen::Index>(keep.size())) = col;
      keep.push_back(c);
    }
  }
  const Eigen::Index d = static_cast<Eigen::Index>(keep.size());
  const Eigen::Index p = 2 + 2 * d;

  MatrixXd Z(n, p);
  Z.col(0).setOnes();
  Z.col(1) = a.a.cast<double>();
  for (Eigen::Index c = 0; c < d; ++c) {
    Z.col(2 + c) = Xc.col(c);
    Z.col(2 + d + c) = Xc.col(c).cwiseProduct(Z.col(1));
  }

  Eigen::ColPivHouseholderQR<MatrixXd> qr(Z);
  MatrixXd ztz_inv;
  VectorXd beta;
  if (qr.rank() == p) {
    beta = qr.solve(y.y);
    ztz_inv = (Z.transpose() * Z).ldlt().solve(MatrixXd::Identity(p, p));
  } else {
    MatrixXd ztz = Z.transpose() * Z;
    ztz.diagonal().array() +=
        1e-8 * ztz.trace() / static_cast<double>(p);
    Eigen::LDLT<MatrixXd> ldlt(ztz);
    if (ldlt.info() != Eigen::Success) {
      throw RankDeficient("design matrix rank-deficient after ridge");
    }
    ztz_inv = ldlt.solve(MatrixXd::Identity(p, p));
    beta = ztz_inv * (Z.transpose() * y.y);
  }

  // HC0 sandwich
  const VectorXd resid = y.y - Z * beta;
  const MatrixXd meat =
      Z.transpose() * resid.array().square().matrix().asDiagonal() * Z;
  const MatrixXd cov = ztz_inv * meat * ztz_inv;
  return {beta[1], std::sqrt(std::max(0.0, cov(1, 1)))};
}

VectorXd design_ite(const Design& design, const OutcomeVector& y) {
  const Eigen::Index n = y.n();
  if (design.assignment.n() != n) {
    throw LengthMismatch("assignment/outcome sizes differ");
  }
  const VectorXi& a = design.assignment.a;
  std::vector<double> weight_sum(n, 0.0), weighted_y(n, 0.0);
  std::vector<int> cross_degree(n, 0);
  for (const auto& e : design.support) {
    if (a[e.i] == a[e.j]) continue;  // only cut edges impute
    weight_sum[e.i] += e.weight;
    weighted_y[e.i] += e.weight * y.y[e.j];
    ++cross_degree[e.i];
    weight_sum[e.j] += e.weight;
    weighted_y[e.j] += e.weight * y.y[e.i];
    ++cross_degree[e.j];
  }
  VectorXd tau(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cross_degree[i] == 0) {
      throw IsolatedUnit("unit " + std::to_string(i) +
                         " has no cross-arm support edge");
    }
    const double counterfactual = weighted_y[i] / weight_sum[i];
    tau[i] = (2.0 * a[i] - 1.0) * (y.y[i] - counterfactual);
  }
  return tau;
}

double design_ate(const Design& design, const OutcomeVector& y) {
  return design_ite(design, y).mean();
}

VectorXd knn_t_learner(const CovariateMatrix& X, const OutcomeVector& y,
                       const Assignment& a, int k) {
  const Eigen::Index n = X.n();
  if (a.treated() < k || a.control() < k) {
    throw ArmTooSmall("need at least k=" + std::to_string(k) +
                      " units per arm");
  }
  std::vector<Eigen::Index> arm_idx[2];
  for (Eigen::Index i = 0; i < n; ++i) {
    arm_idx[a.a[i]].push_back(i);
  }
  VectorXd mu[2] = {VectorXd(n), VectorXd(n)};
  std::vector<std::pair<double, Eigen::Index>> cand;
  for (int arm = 0; arm < 2; ++arm) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (a.a[i] == arm) {
        mu[arm][i] = y.y[i];  // observed arm pinned to the observed outcome
        continue;
      }
      cand.clear();
      for (Eigen::Index j : arm_idx[arm]) {
        cand.emplace_back((X.values.row(i) - X.values.row(j)).squaredNorm(),
                          j);
      }
      std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end());
      double sum = 0.0;
      for (int t = 0; t < k; ++t) sum += y.y[cand[t].second];
      mu[arm][i] = sum / k;
    }
  }
  return mu[1] - mu[0];
}

double matched_pair_ate(const Design& design, const OutcomeVector& y) {
  if (design.method != Method::MatchedPairs) {
    throw WrongDesignKind("matched_pair_ate needs a matched-pairs design");
  }
  const VectorXi& a = design.assignment.a;
  double sum = 0.0;
  for (const auto& e : design.support) {
    const double diff = y.y[e.i] - y.y[e.j];
    sum += a[e.i] == 1 ? diff : -diff;
  }
  return sum / static_cast<double>(design.support.size());
}

double pointwise_error_bound(const VectorXd& w, const VectorXd& dists,
                             const BoundInputs& inputs) {
  if (w.size() != dists.size()) {
    throw LengthMismatch("weights/distances sizes differ");
  }
  return inputs.c() * w.norm() + inputs.lipschitz * w.dot(dists);
}

double cut_error_bound(const SimilarityGraph& e, const Assignment& a) {
  const VectorXd degrees = e.e.rowwise().sum();
  const double d_min = degrees.minCoeff();
  if (!(d_min > 0.0)) throw ZeroDegreeNode("min_i sum_j e_ij must be > 0");
  const double e_sum = e.e.sum();                 // ordered pairs
  const double cut = 2.0 * cut_weight(e, a);      // ordered pairs
  return (e_sum - cut) / d_min;
}

}  // namespace softblock
