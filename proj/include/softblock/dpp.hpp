#pragma once

#include <vector>

#include "softblock/graph.hpp"

namespace softblock {

// Distribution over spanning trees with p(T) proportional to
// exp(sum of e_ij over tree edges); every pair i != j is an edge of
// weight exp(e_ij), so e_ij = 0 contributes weight 1.

// Sum of e_ij over tree edges.
double tree_log_weight(const SpanningTree& t, const SimilarityGraph& e);

// Log of the sum over all labeled spanning trees of exp(tree weight),
// via the matrix-tree determinant of the reduced Laplacian. Weights are
// rescaled by the maximum entry before exponentiation; the shift is
// removed analytically.
double log_partition(const SimilarityGraph& e);

// tree_log_weight - log_partition; always <= 0.
double tree_log_probability(const SpanningTree& t, const SimilarityGraph& e);

// All labeled spanning trees of the complete graph on e's nodes.
// Guarded to n <= 8 (n^(n-2) trees).
std::vector<SpanningTree> enumerate_spanning_trees(const SimilarityGraph& e);

}  // namespace softblock
