#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "softblock/balance.hpp"
#include "softblock/designs.hpp"
#include "softblock/estimators.hpp"
#include "softblock/rng.hpp"
#include "softblock/simulate.hpp"

using namespace softblock;

namespace {

CovariateMatrix random_points(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  MatrixXd m(n, d);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) m(i, c) = rng.normal();
  }
  return CovariateMatrix{std::move(m)};
}

// independent Kruskal oracle for the Euclidean minimum spanning tree
std::set<std::pair<int, int>> kruskal_mst(const MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  struct E {
    int i, j;
    double d;
  };
  std::vector<E> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      edges.push_back({i, j, (X.row(i) - X.row(j)).norm()});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const E& a, const E& b) { return a.d < b.d; });
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::set<std::pair<int, int>> tree;
  for (const auto& e : edges) {
    const int a = find(e.i), b = find(e.j);
    if (a == b) continue;
    parent[a] = b;
    tree.emplace(e.i, e.j);
  }
  return tree;
}

}  // namespace

TEST_CASE("friedman_rafsky on a SoftBlock design is exactly 1") {
  const auto X = random_points(30, 3, 10);
  const auto d = softblock::softblock(X, 0.0, 4);
  CHECK(friedman_rafsky(X, d.assignment) == 1.0);
}

TEST_CASE("friedman_rafsky on a split line is 1/(N-1)") {
  const int n = 10;
  MatrixXd m(n, 1);
  for (int i = 0; i < n; ++i) m(i, 0) = i;
  VectorXi a(n);
  for (int i = 0; i < n; ++i) a[i] = i < n / 2 ? 0 : 1;
  CHECK(friedman_rafsky(CovariateMatrix{m}, Assignment{a}) ==
        doctest::Approx(1.0 / (n - 1)));
}

TEST_CASE("friedman_rafsky matches the Kruskal oracle") {
  const auto X = random_points(20, 2, 77);
  Rng rng(3);
  VectorXi a(20);
  for (int i = 0; i < 20; ++i) a[i] = rng.coin() ? 1 : 0;
  if (a.sum() == 0 || a.sum() == 20) a[0] = 1 - a[0];

  const auto tree = kruskal_mst(X.values);
  int crossing = 0;
  for (const auto& [i, j] : tree) {
    if (a[i] != a[j]) ++crossing;
  }
  CHECK(friedman_rafsky(X, Assignment{a}) ==
        doctest::Approx(crossing / 19.0));
}

TEST_CASE("friedman_rafsky requires both arms") {
  const auto X = random_points(6, 2, 1);
  CHECK_THROWS_AS(friedman_rafsky(X, Assignment{VectorXi::Ones(6)}),
                  EmptyArm);
}

TEST_CASE("mahalanobis balance basics") {
  // mirrored duplicate rows -> identical group means -> 0
  MatrixXd m(4, 2);
  m << 1, 2, 3, 4, 1, 2, 3, 4;
  VectorXi a(4);
  a << 1, 1, 0, 0;
  CHECK(mahalanobis_balance(CovariateMatrix{m}, Assignment{a}) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mahalanobis balance: analytic 1-D value") {
  MatrixXd m(6, 1);
  m << 0, 1, 2, 10, 11, 12;
  VectorXi a(6);
  a << 0, 0, 0, 1, 1, 1;
  const double delta = 10.0;
  const double var = (m.col(0).array() - m.col(0).mean()).square().sum() / 5.0;
  CHECK(mahalanobis_balance(CovariateMatrix{m}, Assignment{a}) ==
        doctest::Approx(delta * delta / var).epsilon(1e-10));
}

TEST_CASE("mahalanobis balance is affine invariant") {
  const auto X = random_points(40, 3, 19);
  Rng rng(4);
  VectorXi a(40);
  for (int i = 0; i < 40; ++i) a[i] = i % 2;
  const double base = mahalanobis_balance(X, Assignment{a});

  MatrixXd A(3, 3);
  A << 2, 1, 0, 0, 1, -1, 1, 0, 3;  // invertible
  VectorXd b(3);
  b << 5, -2, 1;
  CovariateMatrix mapped{(X.values * A.transpose()).rowwise() +
                         b.transpose()};
  CHECK(mahalanobis_balance(mapped, Assignment{a}) ==
        doctest::Approx(base).epsilon(1e-8));
}

TEST_CASE("standardized mean differences") {
  MatrixXd m(4, 2);
  m << 1, 7, 2, 7, 1, 7, 2, 7;
  VectorXi a(4);
  a << 1, 1, 0, 0;
  const auto smd = standardized_mean_diff(CovariateMatrix{m}, Assignment{a});
  CHECK(smd[0] == doctest::Approx(0.0));
  CHECK(smd[1] == 0.0);  // constant covariate -> 0 by convention
}

TEST_CASE("standardized mean diff picks up a 1-sd shift") {
  Rng rng(6);
  const int n = 2000;
  MatrixXd m(n, 1);
  VectorXi a(n);
  for (int i = 0; i < n; ++i) {
    a[i] = i % 2;
    m(i, 0) = rng.normal() + (a[i] == 1 ? 1.0 : 0.0);
  }
  const auto smd = standardized_mean_diff(CovariateMatrix{m}, Assignment{a});
  CHECK(smd[0] == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("kernel imbalance direct sums") {
  Rng rng(9);
  const int n = 6;
  MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
  }
  const MatrixXd K = A.transpose() * A;

  // u = all ones
  CHECK(kernel_imbalance(K, Assignment{VectorXi::Ones(n)}) ==
        doctest::Approx(4.0 / (n * n) * K.sum()).epsilon(1e-12));

  // brute-force double loop
  VectorXi av(n);
  for (int i = 0; i < n; ++i) av[i] = rng.coin() ? 1 : 0;
  const Assignment a{av};
  const VectorXd u = a.u();
  double ref = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ref += u[i] * K(i, j) * u[j];
  }
  CHECK(kernel_imbalance(K, a) ==
        doctest::Approx(4.0 / (n * n) * ref).epsilon(1e-9));

  // the diagonal cancels between any two assignments
  VectorXi bv(n);
  for (int i = 0; i < n; ++i) bv[i] = rng.coin() ? 1 : 0;
  const Assignment b{bv};
  MatrixXd G = K;
  G.diagonal().setZero();
  const double diff_k = kernel_imbalance(K, a) - kernel_imbalance(K, b);
  const double diff_g = kernel_imbalance(G, a) - kernel_imbalance(G, b);
  CHECK(diff_k == doctest::Approx(diff_g).epsilon(1e-9));
}

TEST_CASE("argmin kernel imbalance == argmax cut weight (small n)") {
  // Gaussian Gram matrix: PSD with positive entries
  const int n = 8;
  const auto X = random_points(n, 2, 13);
  const auto dist = pairwise_distances(X);
  MatrixXd K = gaussian_similarity(dist, 1.0).e;
  K.diagonal().setOnes();
  SimilarityGraph G;
  G.e = K;
  G.e.diagonal().setZero();

  unsigned best_min = 0, best_max = 0;
  double min_val = std::numeric_limits<double>::infinity();
  double max_cut = -1.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    VectorXi a(n);
    for (int i = 0; i < n; ++i) a[i] = (mask >> i) & 1u;
    const Assignment asg{a};
    const double v = kernel_imbalance(K, asg);
    const double c = cut_weight(G, asg);
    const unsigned canon = (mask & 1u) ? mask : ~mask & ((1u << n) - 1);
    if (v < min_val) {
      min_val = v;
      best_min = canon;
    }
    if (c > max_cut) {
      max_cut = c;
      best_max = canon;
    }
  }
  CHECK(best_min == best_max);
}

TEST_CASE("balance report aggregates all statistics") {
  const auto X = random_points(24, 2, 3);
  const auto d = softblock::softblock(X, 0.0, 8);
  const auto report = balance_report(X, d.assignment);
  CHECK(report.friedman_rafsky == 1.0);
  CHECK(report.mahalanobis >= 0.0);
  CHECK(report.smd.size() == 2);
  CHECK(report.n1 + report.n0 == 24);
}

TEST_CASE("design comparison on TwoCircles replications") {
  const int n = 128;
  const int reps = 50;
  double mahal_rerand = 0.0, mahal_complete = 0.0;
  double fr_softblock = 0.0, fr_bernoulli = 0.0;
  int fr_count = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto data = generate(Dgp::TwoCircles, n, derive_seed(500, rep));
    const auto& X = data.X;
    MahalanobisMetric metric(X);
    mahal_rerand += metric(rerandomize(X, 0.01, 300, derive_seed(1, rep)));
    mahal_complete += metric(complete_randomization(n, derive_seed(2, rep)));
    fr_softblock +=
        friedman_rafsky(
            X, softblock::softblock(X, 0.0, derive_seed(3, rep)).assignment);
    const auto bern = bernoulli(n, derive_seed(4, rep));
    if (bern.treated() > 0 && bern.control() > 0) {
      fr_bernoulli += friedman_rafsky(X, bern);
      ++fr_count;
    }
  }
  CHECK(mahal_rerand < mahal_complete);
  CHECK(fr_softblock / reps > fr_bernoulli / fr_count);
}
