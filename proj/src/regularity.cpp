#include "rcdlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace rcdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Graph restricted to a vertex subset; distances are intrinsic to the patch.
struct LocalGraph {
    std::vector<int> ids;                   // global ids
    std::vector<std::vector<std::pair<int, double>>> adj;  // local index -> (local, length)

    LocalGraph() = default;
    LocalGraph(const MmSpace& space, const std::vector<int>& members) : ids(members) {
        std::vector<int> pos(static_cast<size_t>(space.vertex_count()), -1);
        for (size_t i = 0; i < ids.size(); ++i) pos[static_cast<size_t>(ids[i])] = static_cast<int>(i);
        adj.assign(ids.size(), {});
        for (const Edge& e : space.edges()) {
            int pu = pos[static_cast<size_t>(e.u)], pv = pos[static_cast<size_t>(e.v)];
            if (pu >= 0 && pv >= 0) {
                adj[static_cast<size_t>(pu)].push_back({pv, e.length});
                adj[static_cast<size_t>(pv)].push_back({pu, e.length});
            }
        }
    }

    std::vector<double> dijkstra(int local_src) const {
        std::vector<double> dist(ids.size(), kInf);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        dist[static_cast<size_t>(local_src)] = 0.0;
        heap.push({0.0, local_src});
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[static_cast<size_t>(u)]) continue;
            for (auto [v, len] : adj[static_cast<size_t>(u)]) {
                if (d + len < dist[static_cast<size_t>(v)]) {
                    dist[static_cast<size_t>(v)] = d + len;
                    heap.push({dist[static_cast<size_t>(v)], v});
                }
            }
        }
        return dist;
    }
};

// Farthest-point sample of k local indices starting from `seed`; ties to the
// lowest index keep the result deterministic.
std::vector<int> fps_sample(const LocalGraph& g, int seed, int k,
                            std::vector<std::vector<double>>& dist_rows) {
    std::vector<int> chosen;
    std::vector<double> best(g.ids.size(), kInf);
    int cur = seed;
    while (static_cast<int>(chosen.size()) < k) {
        chosen.push_back(cur);
        dist_rows.push_back(g.dijkstra(cur));
        const auto& row = dist_rows.back();
        for (size_t i = 0; i < best.size(); ++i) best[i] = std::min(best[i], row[i]);
        int next = -1;
        double far = -1.0;
        for (size_t i = 0; i < best.size(); ++i) {
            if (std::isinf(best[i])) continue;  // disconnected patch remnant
            if (best[i] > far + 1e-15) {
                far = best[i];
                next = static_cast<int>(i);
            }
        }
        if (next < 0 || far <= 1e-15) break;  // everything covered
        cur = next;
    }
    return chosen;
}

struct SampledPatch {
    std::vector<int> sample;                       // local indices
    std::vector<std::vector<double>> rows;         // sample x all-local distances
    std::vector<std::vector<double>> pairwise;     // sample x sample
};

SampledPatch sample_patch(const LocalGraph& g, int seed, int k) {
    SampledPatch p;
    p.sample = fps_sample(g, seed, k, p.rows);
    const size_t m = p.sample.size();
    p.pairwise.assign(m, std::vector<double>(m, 0.0));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            p.pairwise[i][j] = p.rows[i][static_cast<size_t>(p.sample[j])];
    return p;
}

// Reference pool with full pairwise distances (down-sampled when large).
struct ReferencePool {
    std::vector<std::vector<double>> dist;  // pool x pool
    int center = 0;                         // pool index nearest the ball center
};

ReferencePool build_reference_pool(const ModelSpec& reference, double r, int max_pool) {
    MmSpace ref = sample_model(reference);
    // Center: vertex closest to the coordinate midpoint.
    const auto& coords = *ref.coords();
    std::vector<double> mid(coords[0].size(), 0.0);
    for (const auto& c : coords)
        for (size_t a = 0; a < mid.size(); ++a) mid[a] += c[a];
    for (double& v : mid) v /= static_cast<double>(coords.size());
    int center = 0;
    double best = kInf;
    for (size_t i = 0; i < coords.size(); ++i) {
        double d2 = 0.0;
        for (size_t a = 0; a < mid.size(); ++a) d2 += (coords[i][a] - mid[a]) * (coords[i][a] - mid[a]);
        if (d2 < best) {
            best = d2;
            center = static_cast<int>(i);
        }
    }
    Ball b = ball(ref, center, r * (1.0 + 1e-9));
    LocalGraph g(ref, b.members);
    int local_center = 0;
    for (size_t i = 0; i < g.ids.size(); ++i)
        if (g.ids[i] == center) local_center = static_cast<int>(i);
    SampledPatch p = sample_patch(g, local_center, std::min<int>(max_pool, static_cast<int>(g.ids.size())));
    ReferencePool pool;
    pool.dist = std::move(p.pairwise);
    pool.center = 0;  // first FPS point is the seed = center
    return pool;
}

// Greedy bottleneck assignment of the patch sample into the pool, then local
// reassignment of the worst-pair endpoints. Returns the max distortion.
double match_distortion(const std::vector<std::vector<double>>& x,  // k x k
                        const ReferencePool& pool, int improve_rounds) {
    const int k = static_cast<int>(x.size());
    const int np = static_cast<int>(pool.dist.size());
    if (k == 0 || np == 0) return 0.0;
    std::vector<int> assign(static_cast<size_t>(k), -1);
    std::vector<char> used(static_cast<size_t>(np), 0);

    auto insertion_cost = [&](int i, int cand, int placed_upto) {
        double worst = 0.0;
        for (int j = 0; j < placed_upto; ++j)
            worst = std::max(worst, std::abs(x[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                                             pool.dist[static_cast<size_t>(cand)]
                                                      [static_cast<size_t>(assign[static_cast<size_t>(j)])]));
        return worst;
    };

    // X points come in farthest-point order with the ball center first; the
    // pool is ordered the same way, so candidate 0 is the pool center.
    for (int i = 0; i < k; ++i) {
        int best_c = -1;
        double best_cost = kInf;
        for (int c = 0; c < np; ++c) {
            if (used[static_cast<size_t>(c)]) continue;
            double cost = insertion_cost(i, c, i);
            if (cost < best_cost) {
                best_cost = cost;
                best_c = c;
            }
        }
        assign[static_cast<size_t>(i)] = best_c;
        used[static_cast<size_t>(best_c)] = 1;
    }

    auto vertex_cost = [&](int i, int cand) {
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            worst = std::max(worst, std::abs(x[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                                             pool.dist[static_cast<size_t>(cand)]
                                                      [static_cast<size_t>(assign[static_cast<size_t>(j)])]));
        }
        return worst;
    };
    auto distortion = [&]() {
        double worst = 0.0;
        int wi = 0, wj = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                double d = std::abs(x[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                                    pool.dist[static_cast<size_t>(assign[static_cast<size_t>(i)])]
                                             [static_cast<size_t>(assign[static_cast<size_t>(j)])]);
                if (d > worst) {
                    worst = d;
                    wi = i;
                    wj = j;
                }
            }
        return std::tuple<double, int, int>(worst, wi, wj);
    };

    for (int round = 0; round < improve_rounds; ++round) {
        auto [worst, wi, wj] = distortion();
        if (worst <= 1e-14) break;
        bool improved = false;
        for (int v : {wi, wj}) {
            int cur = assign[static_cast<size_t>(v)];
            double cur_cost = vertex_cost(v, cur);
            int best_c = -1;
            double best_cost = cur_cost;
            for (int c = 0; c < np; ++c) {
                if (used[static_cast<size_t>(c)]) continue;
                double cost = vertex_cost(v, c);
                if (cost < best_cost - 1e-15) {
                    best_cost = cost;
                    best_c = c;
                }
            }
            if (best_c >= 0) {
                used[static_cast<size_t>(cur)] = 0;
                used[static_cast<size_t>(best_c)] = 1;
                assign[static_cast<size_t>(v)] = best_c;
                improved = true;
            }
        }
        if (!improved) break;
    }
    return std::get<0>(distortion());
}

ModelSpec reference_ball_spec(const ModelSpec& reference, int dim, double r, double h) {
    ModelSpec s = reference;
    s.kind = ModelKind::EuclideanGrid;
    s.N = dim;
    s.extent = 2.0 * r;
    s.h = h;
    return s;
}

struct ScaleReference {
    ReferencePool ambient;
    ReferencePool slice;  // one dimension lower; empty for 1-D ambients
};

ScaleReference build_scale_reference(const MmSpace& space, const ModelSpec& reference, double r,
                                     const FlatnessOptions& opt) {
    ScaleReference ref;
    int dim = std::max(1, static_cast<int>(std::lround(space.dimension_hint())));
    double h = r / opt.reference_h_factor;
    const int max_pool = 4 * opt.sample_size;
    ref.ambient = build_reference_pool(reference_ball_spec(reference, dim, r, h), r, max_pool);
    if (dim >= 2)
        ref.slice = build_reference_pool(reference_ball_spec(reference, dim - 1, r, h), r, max_pool);
    return ref;
}

FlatnessReport flatness_with_reference(const MmSpace& space, const PerimeterSet& set, int x,
                                       double r, const ScaleReference& ref,
                                       const FlatnessOptions& opt) {
    Ball b = ball(space, x, r);
    if (static_cast<int>(b.members.size()) < 4)
        throw std::invalid_argument("flatness: ball holds fewer than 4 vertices");
    FlatnessReport rep;
    rep.center = x;
    rep.r = r;

    LocalGraph g(space, b.members);
    int seed = 0;
    for (size_t i = 0; i < g.ids.size(); ++i)
        if (g.ids[i] == x) seed = static_cast<int>(i);
    SampledPatch patch = sample_patch(g, seed, opt.sample_size);
    rep.gh_estimate = match_distortion(patch.pairwise, ref.ambient, opt.improve_rounds) / 2.0;

    // Boundary slice: ring vertices inside the ball with ambient (in-ball)
    // distances, matched against the flat slice of one dimension lower.
    std::vector<int> ring_local;
    {
        std::vector<char> in_ring(static_cast<size_t>(space.vertex_count()), 0);
        for (int v : set.outer_boundary()) in_ring[static_cast<size_t>(v)] = 1;
        for (size_t i = 0; i < g.ids.size(); ++i)
            if (in_ring[static_cast<size_t>(g.ids[i])]) ring_local.push_back(static_cast<int>(i));
    }
    if (ring_local.size() < 2 || ref.slice.dist.empty()) {
        rep.boundary_gh_estimate = ring_local.empty() ? r : 0.0;
    } else {
        // Pairwise ambient distances between ring points, seeded at the ring
        // vertex closest to the center.
        auto center_row = g.dijkstra(seed);
        int ring_seed = ring_local[0];
        for (int rl : ring_local)
            if (center_row[static_cast<size_t>(rl)] < center_row[static_cast<size_t>(ring_seed)])
                ring_seed = rl;
        const size_t m = std::min<size_t>(ring_local.size(), static_cast<size_t>(opt.sample_size));
        // FPS over the ring subset using ambient rows.
        std::vector<int> chosen;
        std::vector<std::vector<double>> rows;
        std::vector<double> best(g.ids.size(), kInf);
        int cur = ring_seed;
        while (chosen.size() < m) {
            chosen.push_back(cur);
            rows.push_back(g.dijkstra(cur));
            for (int rl : ring_local)
                best[static_cast<size_t>(rl)] =
                    std::min(best[static_cast<size_t>(rl)], rows.back()[static_cast<size_t>(rl)]);
            int next = -1;
            double far = -1.0;
            for (int rl : ring_local)
                if (!std::isinf(best[static_cast<size_t>(rl)]) && best[static_cast<size_t>(rl)] > far + 1e-15) {
                    far = best[static_cast<size_t>(rl)];
                    next = rl;
                }
            if (next < 0 || far <= 1e-15) break;
            cur = next;
        }
        std::vector<std::vector<double>> pair(chosen.size(), std::vector<double>(chosen.size(), 0.0));
        for (size_t i = 0; i < chosen.size(); ++i)
            for (size_t j = 0; j < chosen.size(); ++j)
                pair[i][j] = rows[i][static_cast<size_t>(chosen[j])];
        rep.boundary_gh_estimate = match_distortion(pair, ref.slice, opt.improve_rounds) / 2.0;
    }

    double inside = 0.0, total = 0.0;
    for (int v : b.members) {
        total += space.mass(v);
        if (set.contains(v)) inside += space.mass(v);
    }
    rep.l1_closeness = total > 0.0 ? std::abs(2.0 * inside - total) / total : 1.0;
    return rep;
}

}  // namespace

FlatnessReport flatness(const MmSpace& space, const PerimeterSet& set, int x, double r,
                        const ModelSpec& reference, const FlatnessOptions& opt) {
    ScaleReference ref = build_scale_reference(space, reference, r, opt);
    return flatness_with_reference(space, set, x, r, ref, opt);
}

SingularScanResult classify_points(const MmSpace& space, const PerimeterSet& set, double delta,
                                   const std::vector<double>& r_grid, const ModelSpec& reference,
                                   bool ambient_only, const FlatnessOptions& opt) {
    SingularScanResult res;
    res.delta = delta;
    res.r_grid = r_grid;
    res.ambient_only = ambient_only;
    const auto& ring = set.outer_boundary();

    std::vector<ScaleReference> refs;
    refs.reserve(r_grid.size());
    for (double r : r_grid) refs.push_back(build_scale_reference(space, reference, r, opt));

    std::vector<char> flagged(ring.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < static_cast<int>(ring.size()); ++i) {
        bool certified = false;
        for (size_t s = 0; s < r_grid.size() && !certified; ++s) {
            double r = r_grid[s];
            FlatnessReport rep;
            try {
                rep = flatness_with_reference(space, set, ring[static_cast<size_t>(i)], r, refs[s], opt);
            } catch (const std::invalid_argument&) {
                continue;  // unresolvable scale cannot certify
            }
            bool ok = rep.gh_estimate <= delta * r;
            if (!ambient_only)
                ok = ok && rep.boundary_gh_estimate <= delta * r && rep.l1_closeness <= delta * r;
            if (ok) certified = true;
        }
        if (!certified) flagged[static_cast<size_t>(i)] = 1;
    }
    for (size_t i = 0; i < ring.size(); ++i)
        if (flagged[i]) res.flagged.push_back(ring[i]);

    for (double r : r_grid)
        res.tube_masses[r] = res.flagged.empty() ? 0.0 : tube_volume(space, res.flagged, r);
    return res;
}

TubeEstimateReport tube_estimate_experiment(const MmSpace& space, const PerimeterSet& set,
                                            const SingularScanResult& scan, double gamma,
                                            const std::vector<int>& window) {
    (void)set;
    TubeEstimateReport rep;
    rep.gamma = gamma;
    std::vector<char> in_win;
    if (!window.empty()) {
        in_win.assign(static_cast<size_t>(space.vertex_count()), 0);
        for (int v : window) in_win[static_cast<size_t>(v)] = 1;
    }
    for (double r : scan.r_grid) {
        TubeEstimateRow row;
        row.r = r;
        if (!scan.flagged.empty()) {
            auto ms = space.distances_from_set(scan.flagged);
            for (int v = 0; v < space.vertex_count(); ++v) {
                if (!in_win.empty() && !in_win[static_cast<size_t>(v)]) continue;
                if (ms.distance[static_cast<size_t>(v)] <= r) row.mass += space.mass(v);
            }
        }
        rep.rows.push_back(row);
    }
    std::vector<double> lx, ly;
    for (const auto& row : rep.rows)
        if (row.mass > 0.0 && row.r > 0.0) {
            lx.push_back(std::log(row.r));
            ly.push_back(std::log(row.mass));
        }
    if (lx.size() >= 3) {
        double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
        double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < lx.size(); ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        if (den > 0.0) {
            rep.loglog_slope = num / den;
            rep.slope_reported = true;
            rep.satisfies_bound = rep.loglog_slope >= 2.0 - gamma;
        }
    }
    if (!rep.slope_reported && rep.rows.size() >= 1) {
        bool all_zero = true;
        for (const auto& row : rep.rows) all_zero = all_zero && row.mass == 0.0;
        rep.satisfies_bound = all_zero;  // empty flagged set: vacuous pass
    }
    return rep;
}

PerimeterRatioReport perimeter_ratio_monotonicity(const MmSpace& space, const PerimeterSet& set,
                                                  int x, const std::vector<double>& r_grid) {
    PerimeterRatioReport rep;
    const double nexp = space.dimension_hint() - 1.0;
    double mesh = kInf;
    for (const Edge& e : space.edges()) mesh = std::min(mesh, e.length);
    for (double r : r_grid) {
        if (r < 2.0 * mesh) continue;  // below the lattice scale
        Ball b = ball(space, x, r);
        if (b.members.size() < 2) continue;
        rep.radii.push_back(r);
        rep.ratios.push_back(perimeter_area(space, set, b.members) / std::pow(r, nexp));
    }
    for (size_t i = 0; i + 1 < rep.ratios.size(); ++i)
        if (rep.radii[i] < rep.radii[i + 1])
            rep.max_downward_violation =
                std::max(rep.max_downward_violation, rep.ratios[i] - rep.ratios[i + 1]);
    return rep;
}

}  // namespace rcdlab
