#include "softblock/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace softblock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Static kd-tree for exact 1-NN queries. Pruning only discards branches
// whose axis gap strictly exceeds the best distance, so the lowest-index
// tie-break matches a brute-force scan exactly.
class KdTree {
 public:
  explicit KdTree(const MatrixXd& pts) : pts_(pts), order_(pts.rows()) {
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * pts.rows() / kLeafSize + 2);
    root_ = build(0, static_cast<int>(pts.rows()), 0);
  }

  // Nearest neighbor of row `q`, excluding `q` itself; ties -> lowest index.
  int nearest(int q) const {
    double best = kInf;
    int best_idx = -1;
    search(root_, q, best, best_idx);
    return best_idx;
  }

 private:
  static constexpr int kLeafSize = 16;

  struct Node {
    int axis = -1;       // -1 for leaf
    double split = 0.0;
    int lo = 0, hi = 0;  // leaf range in order_
    int left = -1, right = -1;
  };

  int build(int lo, int hi, int depth) {
    Node node;
    if (hi - lo <= kLeafSize) {
      node.lo = lo;
      node.hi = hi;
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size()) - 1;
    }
    const int axis = depth % static_cast<int>(pts_.cols());
    const int mid = (lo + hi) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid,
                     order_.begin() + hi, [&](int a, int b) {
                       const double va = pts_(a, axis), vb = pts_(b, axis);
                       return va < vb || (va == vb && a < b);
                     });
    node.axis = axis;
    node.split = pts_(order_[mid], axis);
    nodes_.push_back(node);
    const int self = static_cast<int>(nodes_.size()) - 1;
    const int left = build(lo, mid, depth + 1);
    const int right = build(mid, hi, depth + 1);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  void search(int node_idx, int q, double& best, int& best_idx) const {
    const Node& node = nodes_[node_idx];
    if (node.axis < 0) {
      for (int t = node.lo; t < node.hi; ++t) {
        const int i = order_[t];
        if (i == q) continue;
        const double d2 = (pts_.row(i) - pts_.row(q)).squaredNorm();
        if (d2 < best || (d2 == best && i < best_idx)) {
          best = d2;
          best_idx = i;
        }
      }
      return;
    }
    const double gap = pts_(q, node.axis) - node.split;
    const int near = gap <= 0.0 ? node.left : node.right;
    const int far = gap <= 0.0 ? node.right : node.left;
    search(near, q, best, best_idx);
    if (gap * gap <= best) search(far, q, best, best_idx);
  }

  const MatrixXd& pts_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

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

// Prim over a dense score matrix (maximize). `absent` marks non-edges.
// Tie-break: next vertex is the smallest index among maximal keys; a key is
// replaced on strictly better score or equal score from a smaller source.
template <typename Score>
SpanningTree prim(int n, Score&& score, double absent) {
  SpanningTree tree;
  tree.n = n;
  tree.edges.reserve(n - 1);
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, absent);
  std::vector<int> from(n, -1);
  in_tree[0] = true;
  for (int v = 1; v < n; ++v) {
    best[v] = score(0, v);
    from[v] = best[v] > absent ? 0 : -1;
  }
  for (int step = 1; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (in_tree[v] || from[v] < 0) continue;
      if (pick < 0 || best[v] > best[pick]) pick = v;
    }
    if (pick < 0) throw DisconnectedGraph("no spanning tree exists");
    in_tree[pick] = true;
    const int u = from[pick];
    tree.edges.push_back(
        {std::min(u, pick), std::max(u, pick), best[pick]});
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double s = score(pick, v);
      if (s <= absent) continue;
      if (from[v] < 0 || s > best[v] || (s == best[v] && pick < from[v])) {
        best[v] = s;
        from[v] = pick;
      }
    }
  }
  std::sort(tree.edges.begin(), tree.edges.end(),
            [](const TreeEdge& a, const TreeEdge& b) {
              return a.i < b.i || (a.i == b.i && a.j < b.j);
            });
  return tree;
}

}  // namespace

double SpanningTree::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

DistanceMatrix pairwise_distances(const CovariateMatrix& X) {
  const Eigen::Index n = X.n();
  const VectorXd sq = X.values.rowwise().squaredNorm();
  MatrixXd d2 = sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
                2.0 * X.values * X.values.transpose();
  DistanceMatrix out;
  out.d = d2.cwiseMax(0.0).cwiseSqrt();
  out.d.diagonal().setZero();
  // exact symmetry regardless of floating-point evaluation order
  out.d = ((out.d + out.d.transpose()) / 2.0).eval();
  return out;
}

double median_bandwidth(const DistanceMatrix& d) {
  const Eigen::Index n = d.n();
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) vals.push_back(d.d(i, j));
  }
  std::sort(vals.begin(), vals.end());
  const std::size_t m = vals.size();
  double med = m % 2 == 1 ? vals[m / 2]
                          : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
  if (med > 0.0) return med;
  for (double v : vals) {
    if (v > 0.0) return v;
  }
  return 1.0;
}

SimilarityGraph gaussian_similarity(const DistanceMatrix& d, double h) {
  if (!(h > 0.0)) throw NonPositiveBandwidth(std::to_string(h));
  SimilarityGraph g;
  g.e = (-d.d.array().square() / (2.0 * h * h)).exp();
  g.e.diagonal().setZero();
  return g;
}

NearestNeighborForest nearest_neighbor_forest(const CovariateMatrix& X) {
  const int n = static_cast<int>(X.n());
  std::vector<int> nn(n, -1);
  if (X.dim() <= 16) {
    KdTree tree(X.values);
    for (int i = 0; i < n; ++i) nn[i] = tree.nearest(i);
  } else {
    for (int i = 0; i < n; ++i) {
      double best = kInf;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d2 = (X.values.row(i) - X.values.row(j)).squaredNorm();
        if (d2 < best) {
          best = d2;
          nn[i] = j;
        }
      }
    }
  }
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n);
  for (int i = 0; i < n; ++i) {
    pairs.emplace_back(std::min(i, nn[i]), std::max(i, nn[i]));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  NearestNeighborForest forest;
  forest.n = n;
  UnionFind uf(n);
  for (const auto& [i, j] : pairs) {
    forest.edges.push_back(
        {i, j, (X.values.row(i) - X.values.row(j)).norm()});
    uf.unite(i, j);
  }
  forest.component.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = uf.find(i);
    if (forest.component[root] < 0) {
      forest.component[root] = forest.n_components++;
    }
    forest.component[i] = forest.component[root];
  }
  return forest;
}

SpanningTree maximum_spanning_tree(const SimilarityGraph& e) {
  return prim(static_cast<int>(e.n()),
              [&](int i, int j) { return e.e(i, j); }, 0.0);
}

SpanningTree euclidean_mst(const CovariateMatrix& X) {
  // maximize -distance == minimize distance; same tie-break as above, so
  // the edge set matches the similarity MST for any decreasing kernel
  return prim(
      static_cast<int>(X.n()),
      [&](int i, int j) {
        return -(X.values.row(i) - X.values.row(j)).norm();
      },
      -kInf);
}

GraphLaplacian graph_laplacian(const SimilarityGraph& e) {
  GraphLaplacian lap;
  lap.L = MatrixXd(e.e.rowwise().sum().asDiagonal()) - e.e;
  return lap;
}

double cut_weight(const SimilarityGraph& e, const Assignment& a) {
  if (e.n() != a.n()) {
    throw LengthMismatch("graph has " + std::to_string(e.n()) +
                         " nodes, assignment " + std::to_string(a.n()));
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < e.n(); ++i) {
    for (Eigen::Index j = i + 1; j < e.n(); ++j) {
      if (a.a[i] != a.a[j]) total += e.e(i, j);
    }
  }
  return total;
}

}  // namespace softblock
