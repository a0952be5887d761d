#pragma once

#include <random>
#include <vector>

#include "rcdlab/space.hpp"

namespace rcdlab {

/// Dyadic rational in [lo, hi] with the given denominator. Sums of a few
/// thousand of these are exact in double arithmetic, which is what the
/// exact-equality suites (transform vs brute force, min cut vs enumeration)
/// are built on.
double random_dyadic(std::mt19937_64& rng, double lo, double hi, int denom = 16);

/// Connected random graph: a random spanning tree plus extra edges, dyadic
/// lengths and weights, dyadic masses.
MmSpace random_connected_graph(std::mt19937_64& rng, int min_vertices, int max_vertices,
                               double extra_edge_prob = 0.3);

ScalarField random_dyadic_field(std::mt19937_64& rng, int n, double lo, double hi);

}  // namespace rcdlab
