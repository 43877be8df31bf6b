#pragma once

#include <vector>

#include "softblock/types.hpp"

namespace softblock {

// Symmetric nonnegative distances, zero diagonal.
struct DistanceMatrix {
  MatrixXd d;
  Eigen::Index n() const { return d.rows(); }
};

// Symmetric nonnegative edge weights, zero diagonal; e_ij == 0 reads as
// "no edge" for spanning-tree purposes.
struct SimilarityGraph {
  MatrixXd e;
  Eigen::Index n() const { return e.rows(); }
};

struct TreeEdge {
  int i, j;  // i < j
  double weight;
};

struct SpanningTree {
  std::vector<TreeEdge> edges;
  int n = 0;
  double total_weight() const;
};

struct NearestNeighborForest {
  std::vector<TreeEdge> edges;  // weight = distance
  std::vector<int> component;   // per-unit component id, 0-based
  int n_components = 0;
  int n = 0;
};

struct GraphLaplacian {
  MatrixXd L;  // D - G; symmetric PSD, zero row sums
};

DistanceMatrix pairwise_distances(const CovariateMatrix& X);

// Median of off-diagonal distances; falls back to the smallest positive
// distance when the median is zero, and to 1 when all distances are zero.
double median_bandwidth(const DistanceMatrix& d);

// e_ij = exp(-d_ij^2 / (2 h^2)), zero diagonal.
SimilarityGraph gaussian_similarity(const DistanceMatrix& d, double h);

// Undirected 1-NN graph under Euclidean distance; ties broken by lowest
// index, mutual pairs deduplicated. kd-tree for D <= 16, brute force above.
NearestNeighborForest nearest_neighbor_forest(const CovariateMatrix& X);

// Dense Prim, deterministic tie-break (smallest node index, then smallest
// attachment index). Zero-weight entries are treated as absent edges.
SpanningTree maximum_spanning_tree(const SimilarityGraph& e);

// Euclidean minimum spanning tree computed lazily from X (no n x n matrix).
// Identical tie-break as maximum_spanning_tree; under any strictly
// decreasing similarity the two trees have the same edge set.
// Edge weights are distances.
SpanningTree euclidean_mst(const CovariateMatrix& X);

GraphLaplacian graph_laplacian(const SimilarityGraph& e);

// Sum of e_ij over unordered pairs with a_i != a_j.
double cut_weight(const SimilarityGraph& e, const Assignment& a);

}  // namespace softblock
