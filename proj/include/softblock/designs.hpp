#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "softblock/graph.hpp"
#include "softblock/rng.hpp"
#include "softblock/types.hpp"

namespace softblock {

enum class Method {
  SoftBlock,
  GreedyNeighbors,
  Bernoulli,
  CompleteRandomization,
  Rerandomize,
  MatchedPairs,
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// An assignment plus the sparse graph whose cut edges drive counterfactual
// imputation. Methods without a support graph leave `support` empty.
struct Design {
  Assignment assignment;
  std::vector<TreeEdge> support;  // weights are similarities
  std::vector<int> component;     // per-unit component id
  Method method = Method::Bernoulli;
  std::uint64_t seed = 0;
  double bandwidth = 0.0;  // kernel bandwidth used; 0 when not applicable
  std::array<int, 2> group_sizes() const {
    return {assignment.treated(), assignment.control()};
  }
};

struct Coloring {
  Assignment assignment;
  std::vector<int> component;
  int n_components = 0;
};

// Exact Maxcut on a forest: adjacent nodes get opposite arms, every edge is
// cut; the global flip of each component is a fair coin from rng (or fixed
// to color-0-first when randomize_flip is false).
Coloring two_color_tree(const std::vector<TreeEdge>& edges, int n, Rng& rng,
                        bool randomize_flip = true);

// Maximum spanning tree of Gaussian similarities, two-colored.
// bandwidth <= 0 selects the median heuristic.
Design softblock(const CovariateMatrix& X, double bandwidth,
                 std::uint64_t seed, bool randomize_flip = true);

// 1-NN forest, each component two-colored with an independent flip.
Design greedy_neighbors(const CovariateMatrix& X, std::uint64_t seed,
                        double bandwidth = 0.0);

// i.i.d. fair coin per unit.
Assignment bernoulli(int n, std::uint64_t seed);

// Exactly floor(n/2) treated, uniform over such vectors.
Assignment complete_randomization(int n, std::uint64_t seed);

// Draws `pilot` complete randomizations to estimate the accept_frac
// quantile of Mahalanobis balance, then redraws until below threshold.
Assignment rerandomize(const CovariateMatrix& X, double accept_frac,
                       int pilot, std::uint64_t seed);

// Greedy half-approximate max-weight matching on Gaussian similarities;
// a fair coin picks the treated unit within each pair. Odd n leaves one
// unit unmatched and coin-assigned.
Design matched_pairs(const CovariateMatrix& X, std::uint64_t seed,
                     double bandwidth = 0.0);

}  // namespace softblock
