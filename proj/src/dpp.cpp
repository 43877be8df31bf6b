#include "softblock/dpp.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace softblock {

namespace {

void check_tree_indices(const SpanningTree& t, Eigen::Index n) {
  for (const auto& e : t.edges) {
    if (e.i < 0 || e.j >= static_cast<int>(n) || e.i >= e.j) {
      throw EdgeNotInGraph("edge (" + std::to_string(e.i) + "," +
                           std::to_string(e.j) + ") out of range");
    }
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

double tree_log_weight(const SpanningTree& t, const SimilarityGraph& e) {
  check_tree_indices(t, e.n());
  double sum = 0.0;
  for (const auto& edge : t.edges) sum += e.e(edge.i, edge.j);
  return sum;
}

double log_partition(const SimilarityGraph& e) {
  const Eigen::Index n = e.n();
  if (n < 2) throw InvalidData("need at least 2 nodes");
  // rescale so the largest exponentiated weight is 1; each tree has n-1
  // edges, so the shift is removed as (n-1)*c
  double c = e.e(0, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && e.e(i, j) > c) c = e.e(i, j);
    }
  }
  MatrixXd W(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      W(i, j) = i == j ? 0.0 : std::exp(e.e(i, j) - c);
    }
  }
  MatrixXd L = MatrixXd(W.rowwise().sum().asDiagonal()) - W;
  const MatrixXd reduced = L.bottomRightCorner(n - 1, n - 1);

  Eigen::PartialPivLU<MatrixXd> lu(reduced);
  const MatrixXd& u = lu.matrixLU();
  double log_det = 0.0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    const double piv = u(i, i);
    if (piv == 0.0 || !std::isfinite(piv)) {
      throw DisconnectedGraph("matrix-tree determinant is zero");
    }
    if (piv < 0.0) sign = -sign;
    log_det += std::log(std::abs(piv));
  }
  if (sign <= 0.0) {
    throw DisconnectedGraph("matrix-tree determinant not positive");
  }
  return log_det + static_cast<double>(n - 1) * c;
}

double tree_log_probability(const SpanningTree& t, const SimilarityGraph& e) {
  return tree_log_weight(t, e) - log_partition(e);
}

std::vector<SpanningTree> enumerate_spanning_trees(const SimilarityGraph& e) {
  const int n = static_cast<int>(e.n());
  if (n > 8) throw TooLarge("enumeration guarded to n <= 8");
  std::vector<std::pair<int, int>> all_edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) all_edges.emplace_back(i, j);
  }
  const int m = static_cast<int>(all_edges.size());
  std::vector<SpanningTree> trees;

  // iterate over all (n-1)-subsets of the edge set
  std::vector<int> pick(n - 1);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    UnionFind uf(n);
    bool acyclic = true;
    for (int idx : pick) {
      if (!uf.unite(all_edges[idx].first, all_edges[idx].second)) {
        acyclic = false;
        break;
      }
    }
    if (acyclic) {
      SpanningTree t;
      t.n = n;
      for (int idx : pick) {
        const auto [i, j] = all_edges[idx];
        t.edges.push_back({i, j, e.e(i, j)});
      }
      trees.push_back(std::move(t));
    }
    // next combination
    int k = n - 2;
    while (k >= 0 && pick[k] == m - (n - 1) + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int t2 = k + 1; t2 < n - 1; ++t2) pick[t2] = pick[t2 - 1] + 1;
  }
  return trees;
}

}  // namespace softblock
