#include "softblock/designs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <vector>

#include "softblock/balance.hpp"

namespace softblock {

std::string method_name(Method m) {
  switch (m) {
    case Method::SoftBlock: return "softblock";
    case Method::GreedyNeighbors: return "greedy";
    case Method::Bernoulli: return "bernoulli";
    case Method::CompleteRandomization: return "complete";
    case Method::Rerandomize: return "rerandomize";
    case Method::MatchedPairs: return "matchedpairs";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "softblock") return Method::SoftBlock;
  if (name == "greedy") return Method::GreedyNeighbors;
  if (name == "bernoulli") return Method::Bernoulli;
  if (name == "complete") return Method::CompleteRandomization;
  if (name == "rerandomize") return Method::Rerandomize;
  if (name == "matchedpairs") return Method::MatchedPairs;
  throw InvalidData("unknown method: " + name);
}

Coloring two_color_tree(const std::vector<TreeEdge>& edges, int n, Rng& rng,
                        bool randomize_flip) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  Coloring out;
  out.component.assign(n, -1);
  VectorXi color = VectorXi::Constant(n, -1);
  // components discovered in order of smallest node index; one coin each
  for (int start = 0; start < n; ++start) {
    if (color[start] >= 0) continue;
    const int comp = out.n_components++;
    const int root_color = randomize_flip ? (rng.coin() ? 1 : 0) : 0;
    color[start] = root_color;
    out.component[start] = comp;
    std::queue<int> frontier;
    frontier.push(start);
    int nodes = 1, comp_edges = 0;
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop();
      comp_edges += static_cast<int>(adj[v].size());
      for (int w : adj[v]) {
        if (color[w] < 0) {
          color[w] = 1 - color[v];
          out.component[w] = comp;
          frontier.push(w);
          ++nodes;
        }
      }
    }
    if (comp_edges != 2 * (nodes - 1)) {
      throw CycleDetected("component " + std::to_string(comp) +
                          " is not a tree");
    }
  }
  out.assignment = Assignment{std::move(color)};
  return out;
}

namespace {

// Median-heuristic bandwidth without materializing the full distance
// matrix: for large n a deterministic strided subsample of up to 2048
// rows is used.
double auto_bandwidth(const CovariateMatrix& X) {
  constexpr Eigen::Index kMax = 2048;
  if (X.n() <= kMax) {
    return median_bandwidth(pairwise_distances(X));
  }
  const Eigen::Index stride = (X.n() + kMax - 1) / kMax;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < X.n(); i += stride) keep.push_back(i);
  MatrixXd sub(static_cast<Eigen::Index>(keep.size()), X.dim());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    sub.row(static_cast<Eigen::Index>(r)) = X.values.row(keep[r]);
  }
  return median_bandwidth(
      pairwise_distances(CovariateMatrix{std::move(sub)}));
}

double similarity_of(double dist, double h) {
  return std::exp(-dist * dist / (2.0 * h * h));
}

}  // namespace

Design softblock(const CovariateMatrix& X, double bandwidth,
                 std::uint64_t seed, bool randomize_flip) {
  const double h = bandwidth > 0.0 ? bandwidth : auto_bandwidth(X);
  // Euclidean MST == maximum spanning tree of any decreasing similarity,
  // so the assignment is bandwidth-free; h only scales reported weights.
  SpanningTree tree = euclidean_mst(X);
  Rng rng(seed);
  Coloring coloring = two_color_tree(tree.edges, tree.n, rng, randomize_flip);
  Design d;
  d.support.reserve(tree.edges.size());
  for (const auto& e : tree.edges) {
    d.support.push_back({e.i, e.j, similarity_of(e.weight, h)});
  }
  d.assignment = std::move(coloring.assignment);
  d.component = std::move(coloring.component);
  d.method = Method::SoftBlock;
  d.seed = seed;
  d.bandwidth = h;
  return d;
}

Design greedy_neighbors(const CovariateMatrix& X, std::uint64_t seed,
                        double bandwidth) {
  const double h = bandwidth > 0.0 ? bandwidth : auto_bandwidth(X);
  NearestNeighborForest forest = nearest_neighbor_forest(X);
  Rng rng(seed);
  Coloring coloring =
      two_color_tree(forest.edges, forest.n, rng, /*randomize_flip=*/true);
  Design d;
  d.support.reserve(forest.edges.size());
  for (const auto& e : forest.edges) {
    d.support.push_back({e.i, e.j, similarity_of(e.weight, h)});
  }
  d.assignment = std::move(coloring.assignment);
  d.component = std::move(coloring.component);
  d.method = Method::GreedyNeighbors;
  d.seed = seed;
  d.bandwidth = h;
  return d;
}

Assignment bernoulli(int n, std::uint64_t seed) {
  Rng rng(seed);
  VectorXi a(n);
  for (int i = 0; i < n; ++i) a[i] = rng.coin() ? 1 : 0;
  return Assignment{std::move(a)};
}

Assignment complete_randomization(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::swap(idx[i], idx[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  VectorXi a = VectorXi::Zero(n);
  for (int t = 0; t < n / 2; ++t) a[idx[t]] = 1;
  return Assignment{std::move(a)};
}

Assignment rerandomize(const CovariateMatrix& X, double accept_frac,
                       int pilot, std::uint64_t seed) {
  const int n = static_cast<int>(X.n());
  if (accept_frac >= 1.0) {
    return complete_randomization(n, derive_seed(seed, 1, 0));
  }
  MahalanobisMetric metric(X);
  std::vector<double> pilot_vals(pilot);
  for (int p = 0; p < pilot; ++p) {
    pilot_vals[p] =
        metric(complete_randomization(n, derive_seed(seed, 0, p)));
  }
  std::sort(pilot_vals.begin(), pilot_vals.end());
  const int q = std::max(
      0, static_cast<int>(std::ceil(accept_frac * pilot)) - 1);
  const double threshold = pilot_vals[q];

  constexpr int kMaxDraws = 1000000;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    Assignment a = complete_randomization(n, derive_seed(seed, 1, draw));
    if (metric(a) <= threshold) return a;
  }
  throw MaxDrawsExceeded("no acceptable draw within 1e6 attempts");
}

Design matched_pairs(const CovariateMatrix& X, std::uint64_t seed,
                     double bandwidth) {
  const int n = static_cast<int>(X.n());
  const double h = bandwidth > 0.0 ? bandwidth : auto_bandwidth(X);
  const DistanceMatrix dist = pairwise_distances(X);

  struct Pair {
    int i, j;
    double d;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j, dist.d(i, j)});
  }
  // similarity descending == distance ascending; lexicographic on ties
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.d != b.d) return a.d < b.d;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  Rng rng(seed);
  Design d;
  d.method = Method::MatchedPairs;
  d.seed = seed;
  d.bandwidth = h;
  d.component.assign(n, -1);
  VectorXi a = VectorXi::Constant(n, -1);
  std::vector<bool> used(n, false);
  int comp = 0;
  for (const auto& p : pairs) {
    if (used[p.i] || used[p.j]) continue;
    used[p.i] = used[p.j] = true;
    d.support.push_back({p.i, p.j, similarity_of(p.d, h)});
    d.component[p.i] = d.component[p.j] = comp++;
    const bool first_treated = rng.coin();
    a[p.i] = first_treated ? 1 : 0;
    a[p.j] = first_treated ? 0 : 1;
  }
  for (int i = 0; i < n; ++i) {
    if (a[i] < 0) {  // odd n: leftover unit gets a coin, no support edge
      a[i] = rng.coin() ? 1 : 0;
      d.component[i] = comp++;
    }
  }
  d.assignment = Assignment{std::move(a)};
  return d;
}

}  // namespace softblock
