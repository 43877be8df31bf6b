#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "softblock/dpp.hpp"
#include "softblock/rng.hpp"

using namespace softblock;

namespace {

SimilarityGraph random_similarity(int n, std::uint64_t seed, double lo = 0.1,
                                  double hi = 2.0) {
  Rng rng(seed);
  SimilarityGraph g;
  g.e = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      g.e(i, j) = g.e(j, i) = rng.uniform(lo, hi);
    }
  }
  return g;
}

// log(sum exp(x_i)) computed stably
double log_sum_exp(const std::vector<double>& xs) {
  const double m = *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

TEST_CASE("tree_log_weight sums the edge scores") {
  SimilarityGraph g;
  g.e = MatrixXd::Zero(3, 3);
  g.e(0, 1) = g.e(1, 0) = 3;
  g.e(1, 2) = g.e(2, 1) = 2;
  SpanningTree t;
  t.edges = {{0, 1, 3.0}, {1, 2, 2.0}};
  CHECK(tree_log_weight(t, g) == 5.0);

  SimilarityGraph zero;
  zero.e = MatrixXd::Zero(3, 3);
  CHECK(tree_log_weight(t, zero) == 0.0);
}

TEST_CASE("log_partition closed forms") {
  // n = 2: a single tree of weight w
  SimilarityGraph pair;
  pair.e = MatrixXd::Zero(2, 2);
  pair.e(0, 1) = pair.e(1, 0) = 1.7;
  CHECK(log_partition(pair) == doctest::Approx(1.7).epsilon(1e-12));

  // n = 3 with e = 0 everywhere: 3 trees of weight 1 each
  SimilarityGraph tri;
  tri.e = MatrixXd::Zero(3, 3);
  CHECK(log_partition(tri) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("log_partition matches exhaustive enumeration") {
  const auto g = random_similarity(5, 44);
  const auto trees = enumerate_spanning_trees(g);
  std::vector<double> logs;
  for (const auto& t : trees) logs.push_back(tree_log_weight(t, g));
  CHECK(log_partition(g) ==
        doctest::Approx(log_sum_exp(logs)).epsilon(1e-9));
}

TEST_CASE("log_partition is invariant to an additive shift up to (n-1)c") {
  const int n = 6;
  const auto g = random_similarity(n, 71);
  SimilarityGraph shifted = g;
  const double c = 5.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) shifted.e(i, j) += c;
    }
  }
  CHECK(log_partition(shifted) ==
        doctest::Approx(log_partition(g) + (n - 1) * c).epsilon(1e-8));
}

TEST_CASE("enumerate_spanning_trees counts follow Cayley's formula") {
  for (int n : {3, 4, 5}) {
    SimilarityGraph g;
    g.e = MatrixXd::Zero(n, n);
    const auto trees = enumerate_spanning_trees(g);
    CHECK(static_cast<int>(trees.size()) ==
          static_cast<int>(std::pow(n, n - 2) + 0.5));
    for (const auto& t : trees) {
      CHECK(static_cast<int>(t.edges.size()) == n - 1);
    }
  }
}

TEST_CASE("tree count equals the unweighted matrix-tree determinant") {
  const int n = 6;
  SimilarityGraph g;
  g.e = MatrixXd::Zero(n, n);
  const auto trees = enumerate_spanning_trees(g);
  MatrixXd L = MatrixXd::Constant(n, n, -1.0);
  L.diagonal().setConstant(n - 1.0);
  const double det = L.bottomRightCorner(n - 1, n - 1).determinant();
  CHECK(static_cast<double>(trees.size()) ==
        doctest::Approx(det).epsilon(1e-9));
}

TEST_CASE("enumerate_spanning_trees rejects large n") {
  SimilarityGraph g;
  g.e = MatrixXd::Zero(9, 9);
  CHECK_THROWS_AS(enumerate_spanning_trees(g), TooLarge);
}

TEST_CASE("tree probabilities sum to one") {
  const auto g = random_similarity(5, 12);
  const auto trees = enumerate_spanning_trees(g);
  double total = 0.0;
  for (const auto& t : trees) {
    const double lp = tree_log_probability(t, g);
    CHECK(lp <= 1e-12);
    total += std::exp(lp);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("the MAP tree is the maximum spanning tree") {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const auto g = random_similarity(6, seed);
    const auto trees = enumerate_spanning_trees(g);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : trees) {
      best = std::max(best, tree_log_weight(t, g));
    }
    const auto mst = maximum_spanning_tree(g);
    CHECK(tree_log_weight(mst, g) == doctest::Approx(best).epsilon(1e-10));
  }
}
