#include "rcdlab/random_spaces.hpp"

#include <algorithm>
#include <set>

namespace rcdlab {

double random_dyadic(std::mt19937_64& rng, double lo, double hi, int denom) {
    std::uniform_int_distribution<int> pick(static_cast<int>(lo * denom),
                                            static_cast<int>(hi * denom));
    return static_cast<double>(pick(rng)) / denom;
}

MmSpace random_connected_graph(std::mt19937_64& rng, int min_vertices, int max_vertices,
                               double extra_edge_prob) {
    std::uniform_int_distribution<int> size(min_vertices, max_vertices);
    const int n = size(rng);
    std::vector<double> masses(static_cast<size_t>(n));
    for (double& m : masses) m = random_dyadic(rng, 0.25, 2.0);
    std::vector<Edge> edges;
    std::set<std::pair<int, int>> present;
    auto add_edge = [&](int u, int v) {
        auto key = std::minmax(u, v);
        if (u == v || !present.insert(key).second) return;
        edges.push_back({u, v, random_dyadic(rng, 0.25, 2.0), random_dyadic(rng, 0.25, 2.0)});
    };
    // Random spanning tree: attach each vertex to a random earlier one.
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> prev(0, v - 1);
        add_edge(prev(rng), v);
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < extra_edge_prob) add_edge(u, v);
    return MmSpace(std::move(masses), std::move(edges), std::nullopt, 2.0);
}

ScalarField random_dyadic_field(std::mt19937_64& rng, int n, double lo, double hi) {
    ScalarField f(static_cast<size_t>(n));
    for (double& v : f) v = random_dyadic(rng, lo, hi);
    return f;
}

}  // namespace rcdlab
