#include "rcdlab/perimeter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace rcdlab {

PerimeterSet::PerimeterSet(const MmSpace& space, std::vector<int> members)
    : space_(&space), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    flags_.assign(static_cast<size_t>(space.vertex_count()), 0);
    for (int v : members_) {
        if (v < 0 || v >= space.vertex_count())
            throw std::invalid_argument("PerimeterSet: member out of range");
        flags_[static_cast<size_t>(v)] = 1;
    }
    std::vector<char> inner(flags_.size(), 0), outer(flags_.size(), 0);
    for (size_t i = 0; i < space.edges().size(); ++i) {
        const Edge& e = space.edges()[i];
        bool iu = flags_[static_cast<size_t>(e.u)] != 0;
        bool iv = flags_[static_cast<size_t>(e.v)] != 0;
        if (iu != iv) {
            cut_edges_.push_back(static_cast<int>(i));
            perimeter_total_ += e.weight;
            inner[static_cast<size_t>(iu ? e.u : e.v)] = 1;
            outer[static_cast<size_t>(iu ? e.v : e.u)] = 1;
        }
    }
    for (int v = 0; v < space.vertex_count(); ++v) {
        if (inner[static_cast<size_t>(v)]) inner_boundary_.push_back(v);
        if (outer[static_cast<size_t>(v)]) outer_boundary_.push_back(v);
    }
}

std::vector<int> PerimeterSet::closure() const {
    std::vector<int> c = members_;
    c.insert(c.end(), outer_boundary_.begin(), outer_boundary_.end());
    std::sort(c.begin(), c.end());
    return c;
}

namespace {

double localized_sum(const MmSpace& space, const PerimeterSet& set,
                     const std::vector<int>& region, bool area_normalized) {
    std::vector<char> in_region(static_cast<size_t>(space.vertex_count()), 0);
    for (int v : region) in_region[static_cast<size_t>(v)] = 1;
    double acc = 0.0;
    for (int eid : set.cut_edges()) {
        const Edge& e = space.edges()[static_cast<size_t>(eid)];
        if (in_region[static_cast<size_t>(e.u)] || in_region[static_cast<size_t>(e.v)])
            acc += area_normalized ? e.weight * e.length : e.weight;
    }
    return acc;
}

}  // namespace

double perimeter(const MmSpace& space, const PerimeterSet& set, const std::vector<int>& region) {
    return localized_sum(space, set, region, false);
}

double perimeter(const MmSpace& space, const PerimeterSet& set, const Ball& region) {
    return localized_sum(space, set, region.members, false);
}

double perimeter_area(const MmSpace& space, const PerimeterSet& set,
                      const std::vector<int>& region) {
    return localized_sum(space, set, region, true);
}

namespace {

// Dinic max-flow on doubles; enough for the cut sizes this module sees.
class MaxFlow {
public:
    explicit MaxFlow(int n) : head_(static_cast<size_t>(n), -1) {}

    void add_edge(int u, int v, double cap_uv, double cap_vu) {
        push(u, v, cap_uv);
        push(v, u, cap_vu);
    }

    double run(int s, int t) {
        double total = 0.0;
        while (bfs(s, t)) {
            iter_ = head_;
            while (true) {
                double f = dfs(s, t, std::numeric_limits<double>::infinity());
                if (f <= 0.0) break;
                total += f;
            }
        }
        return total;
    }

    // Vertices reachable from s in the residual graph (the minimal source side).
    std::vector<char> source_side(int s) const {
        std::vector<char> vis(head_.size(), 0);
        std::queue<int> q;
        q.push(s);
        vis[static_cast<size_t>(s)] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[static_cast<size_t>(u)]; e >= 0; e = next_[static_cast<size_t>(e)]) {
                if (cap_[static_cast<size_t>(e)] > kEps && !vis[static_cast<size_t>(to_[static_cast<size_t>(e)])]) {
                    vis[static_cast<size_t>(to_[static_cast<size_t>(e)])] = 1;
                    q.push(to_[static_cast<size_t>(e)]);
                }
            }
        }
        return vis;
    }

private:
    static constexpr double kEps = 1e-12;
    std::vector<int> head_, next_, to_, iter_;
    std::vector<double> cap_;
    std::vector<int> level_;

    void push(int u, int v, double c) {
        to_.push_back(v);
        cap_.push_back(c);
        next_.push_back(head_[static_cast<size_t>(u)]);
        head_[static_cast<size_t>(u)] = static_cast<int>(to_.size()) - 1;
    }

    bool bfs(int s, int t) {
        level_.assign(head_.size(), -1);
        std::queue<int> q;
        q.push(s);
        level_[static_cast<size_t>(s)] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[static_cast<size_t>(u)]; e >= 0; e = next_[static_cast<size_t>(e)]) {
                int v = to_[static_cast<size_t>(e)];
                if (cap_[static_cast<size_t>(e)] > kEps && level_[static_cast<size_t>(v)] < 0) {
                    level_[static_cast<size_t>(v)] = level_[static_cast<size_t>(u)] + 1;
                    q.push(v);
                }
            }
        }
        return level_[static_cast<size_t>(t)] >= 0;
    }

    double dfs(int u, int t, double f) {
        if (u == t) return f;
        for (int& e = iter_[static_cast<size_t>(u)]; e >= 0; e = next_[static_cast<size_t>(e)]) {
            int v = to_[static_cast<size_t>(e)];
            if (cap_[static_cast<size_t>(e)] > kEps &&
                level_[static_cast<size_t>(v)] == level_[static_cast<size_t>(u)] + 1) {
                double d = dfs(v, t, std::min(f, cap_[static_cast<size_t>(e)]));
                if (d > 0.0) {
                    cap_[static_cast<size_t>(e)] -= d;
                    cap_[static_cast<size_t>(e ^ 1)] += d;
                    return d;
                }
            }
        }
        return 0.0;
    }
};

std::vector<int> assemble_members(const LocalMinProblem& problem,
                                  const std::vector<char>& free_in_e) {
    const MmSpace& space = *problem.space;
    std::vector<char> in_ball(static_cast<size_t>(space.vertex_count()), 0);
    for (int v : problem.ball.members) in_ball[static_cast<size_t>(v)] = 1;
    std::vector<int> members;
    for (int v : problem.frozen_members)
        if (!in_ball[static_cast<size_t>(v)]) members.push_back(v);
    for (size_t i = 0; i < problem.ball.members.size(); ++i)
        if (free_in_e[i]) members.push_back(problem.ball.members[i]);
    return members;
}

}  // namespace

PerimeterSet minimize_in_ball(const LocalMinProblem& problem) {
    const MmSpace& space = *problem.space;
    const auto& free = problem.ball.members;
    const int nf = static_cast<int>(free.size());
    std::vector<int> free_pos(static_cast<size_t>(space.vertex_count()), -1);
    for (int i = 0; i < nf; ++i) free_pos[static_cast<size_t>(free[static_cast<size_t>(i)])] = i;
    std::vector<char> frozen_in(static_cast<size_t>(space.vertex_count()), 0);
    for (int v : problem.frozen_members)
        if (free_pos[static_cast<size_t>(v)] < 0) frozen_in[static_cast<size_t>(v)] = 1;

    // Nodes: 0..nf-1 free, nf = source (frozen members), nf+1 = sink.
    const int src = nf, sink = nf + 1;
    MaxFlow flow(nf + 2);
    for (const Edge& e : space.edges()) {
        int pu = free_pos[static_cast<size_t>(e.u)], pv = free_pos[static_cast<size_t>(e.v)];
        if (pu < 0 && pv < 0) continue;  // frozen-frozen: constant offset
        int a = pu >= 0 ? pu : (frozen_in[static_cast<size_t>(e.u)] ? src : sink);
        int b = pv >= 0 ? pv : (frozen_in[static_cast<size_t>(e.v)] ? src : sink);
        if (a == b) continue;
        flow.add_edge(a, b, e.weight, e.weight);
    }
    flow.run(src, sink);
    auto side = flow.source_side(src);
    std::vector<char> free_in_e(static_cast<size_t>(nf), 0);
    for (int i = 0; i < nf; ++i) free_in_e[static_cast<size_t>(i)] = side[static_cast<size_t>(i)];
    return PerimeterSet(space, assemble_members(problem, free_in_e));
}

PerimeterSet minimize_in_ball_brute(const LocalMinProblem& problem, int max_free) {
    const MmSpace& space = *problem.space;
    const int nf = static_cast<int>(problem.ball.members.size());
    if (nf > max_free) throw std::invalid_argument("minimize_in_ball_brute: too many free vertices");
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    int best_count = nf + 1;
    for (std::uint64_t mask = 0; mask < (1ull << nf); ++mask) {
        std::vector<char> free_in_e(static_cast<size_t>(nf), 0);
        for (int i = 0; i < nf; ++i) free_in_e[static_cast<size_t>(i)] = (mask >> i) & 1u;
        PerimeterSet cand(space, assemble_members(problem, free_in_e));
        double val = cand.perimeter_total();
        int count = static_cast<int>(__builtin_popcountll(mask));
        // Ties: fewest free members (min cuts form a lattice, so this is the
        // minimal source side the flow solver returns), then lowest mask.
        bool better = val < best ||
                      (val == best &&
                       (count < best_count || (count == best_count && mask < best_mask)));
        if (better) {
            best = val;
            best_mask = mask;
            best_count = count;
        }
    }
    std::vector<char> free_in_e(static_cast<size_t>(nf), 0);
    for (int i = 0; i < nf; ++i) free_in_e[static_cast<size_t>(i)] = (best_mask >> i) & 1u;
    return PerimeterSet(space, assemble_members(problem, free_in_e));
}

std::vector<DensityRow> quasi_min_density_report(const MmSpace& space, const PerimeterSet& set,
                                                 const std::vector<Ball>& balls) {
    std::vector<DensityRow> rows;
    for (const Ball& b : balls) {
        DensityRow row;
        row.center = b.center;
        row.r = b.radius;
        double mb = 0.0, inside = 0.0;
        for (int v : b.members) {
            mb += space.mass(v);
            if (set.contains(v)) inside += space.mass(v);
        }
        if (mb > 0.0) {
            row.inside_fraction = inside / mb;
            row.outside_fraction = (mb - inside) / mb;
            row.perimeter_ratio = perimeter_area(space, set, b.members) * b.radius / mb;
        }
        rows.push_back(row);
    }
    return rows;
}

double tube_volume(const MmSpace& space, const std::vector<int>& vertex_set, double r) {
    if (r < 0.0) throw std::invalid_argument("tube_volume: r >= 0 required");
    if (vertex_set.empty()) return 0.0;
    auto ms = space.distances_from_set(vertex_set);
    double acc = 0.0;
    for (int v = 0; v < space.vertex_count(); ++v)
        if (ms.distance[static_cast<size_t>(v)] <= r) acc += space.mass(v);
    return acc;
}

CutAndPasteReport cut_and_paste_checks(const MmSpace& space, const PerimeterSet& e,
                                       const PerimeterSet& f) {
    std::vector<int> inter, uni;
    for (int v = 0; v < space.vertex_count(); ++v) {
        bool ie = e.contains(v), iff = f.contains(v);
        if (ie && iff) inter.push_back(v);
        if (ie || iff) uni.push_back(v);
    }
    PerimeterSet pi(space, inter), pu(space, uni);
    CutAndPasteReport rep;
    rep.per_e = e.perimeter_total();
    rep.per_f = f.perimeter_total();
    rep.per_intersection = pi.perimeter_total();
    rep.per_union = pu.perimeter_total();
    rep.submodular_everywhere = true;
    for (const Edge& edge : space.edges()) {
        auto cut = [&](const PerimeterSet& s) {
            return s.contains(edge.u) != s.contains(edge.v) ? 1 : 0;
        };
        if (cut(pi) + cut(pu) > cut(e) + cut(f)) rep.submodular_everywhere = false;
        if (cut(e) && cut(f)) {
            bool same = e.contains(edge.u) == f.contains(edge.u);
            if (same) ++rep.shared_cut_same_side;
            else ++rep.shared_cut_opposite;
        }
    }
    return rep;
}

CoareaReport coarea_check(const MmSpace& space, const ScalarField& v, const ScalarField& f) {
    if (static_cast<int>(v.size()) != space.vertex_count() ||
        static_cast<int>(f.size()) != space.vertex_count())
        throw std::invalid_argument("coarea_check: field size mismatch");
    for (double w : f)
        if (w < 0.0) throw std::invalid_argument("coarea_check: weight field must be nonnegative");
    CoareaReport rep;
    for (const Edge& e : space.edges()) {
        double fbar = 0.5 * (f[static_cast<size_t>(e.u)] + f[static_cast<size_t>(e.v)]);
        rep.weighted_variation +=
            fbar * e.weight * std::abs(v[static_cast<size_t>(e.u)] - v[static_cast<size_t>(e.v)]);
    }
    // Exact level decomposition: each edge is cut by {v > r} precisely for r
    // in [min(vu,vv), max(vu,vv)).
    std::vector<double> levels = v;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (size_t li = 0; li + 1 < levels.size(); ++li) {
        double r = levels[li];
        double width = levels[li + 1] - levels[li];
        double per_f = 0.0;
        for (const Edge& e : space.edges()) {
            double a = v[static_cast<size_t>(e.u)], b = v[static_cast<size_t>(e.v)];
            if ((a > r) != (b > r)) {
                double fbar = 0.5 * (f[static_cast<size_t>(e.u)] + f[static_cast<size_t>(e.v)]);
                per_f += fbar * e.weight;
            }
        }
        rep.level_integral += width * per_f;
    }
    rep.mismatch = std::abs(rep.weighted_variation - rep.level_integral);
    return rep;
}

}  // namespace rcdlab
