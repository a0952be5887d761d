#include "rcdlab/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rcdlab/laplacian_bounds.hpp"

namespace rcdlab {

double comparison_function(double K, double N, double x) {
    if (!(N > 1.0)) throw std::invalid_argument("comparison_function: N > 1 required");
    if (K == 0.0) return 0.0;
    if (K > 0.0) {
        const double a = std::sqrt(K / (N - 1.0));
        if (!(std::abs(x) < (std::numbers::pi / 2.0) / a))
            throw std::invalid_argument("comparison_function: x outside the K > 0 domain");
        return -std::sqrt(K * (N - 1.0)) * std::tan(a * x);
    }
    const double a = std::sqrt(-K / (N - 1.0));
    return std::sqrt(-K * (N - 1.0)) * std::tanh(a * x);
}

bool ComparisonProfile::in_domain(double x) const {
    if (K <= 0.0) return true;
    return std::abs(x) < domain_radius();
}

double ComparisonProfile::domain_radius() const {
    if (K <= 0.0) return std::numeric_limits<double>::infinity();
    return (std::numbers::pi / 2.0) * std::sqrt((N - 1.0) / K);
}

double ComparisonProfile::ode_residual(double x, double step) const {
    double tp = ((*this)(x + step) - (*this)(x - step)) / (2.0 * step);
    double t = (*this)(x);
    return std::abs(tp + K + t * t / (N - 1.0));
}

DistanceProfile distance_profile(const MmSpace& space, const PerimeterSet& set) {
    DistanceProfile prof;
    prof.ring = set.outer_boundary();
    const int n = space.vertex_count();
    if (prof.ring.empty()) {
        // E empty or the whole space: no boundary, trivial distances.
        prof.d_closure.assign(static_cast<size_t>(n), 0.0);
        prof.d_signed.assign(static_cast<size_t>(n), 0.0);
        prof.footpoint.assign(static_cast<size_t>(n), -1);
        return prof;
    }
    auto closure = set.closure();
    auto from_closure = space.distances_from_set(closure);
    prof.d_closure = std::move(from_closure.distance);
    auto from_ring = space.distances_from_set(prof.ring);
    prof.footpoint = std::move(from_ring.footpoint);
    prof.d_signed.resize(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v)
        prof.d_signed[static_cast<size_t>(v)] =
            (set.contains(v) ? -1.0 : 1.0) * from_ring.distance[static_cast<size_t>(v)];
    return prof;
}

namespace {

ScalarField pointwise_laplacian(const MmSpace& space, const ScalarField& f) {
    VertexMeasure mu = distributional_laplacian(space, f);
    ScalarField out(f.size());
    for (int x = 0; x < space.vertex_count(); ++x)
        out[static_cast<size_t>(x)] = mu[static_cast<size_t>(x)] / space.mass(x);
    return out;
}

std::vector<char> flag_set(const MmSpace& space, const std::vector<int>& vs) {
    std::vector<char> f(static_cast<size_t>(space.vertex_count()), 0);
    for (int v : vs) f[static_cast<size_t>(v)] = 1;
    return f;
}

}  // namespace

ExcessReport laplacian_comparison_report(const MmSpace& space, const PerimeterSet& set,
                                         const DistanceProfile& prof,
                                         const ComparisonProfile& profile,
                                         const std::vector<int>& region,
                                         const std::vector<int>& reach_window) {
    ScalarField ld = pointwise_laplacian(space, prof.d_closure);
    auto in_closure = flag_set(space, set.closure());
    auto in_window = reach_window.empty() ? std::vector<char>() : flag_set(space, reach_window);

    ExcessReport rep;
    rep.max_excess = -std::numeric_limits<double>::infinity();
    rep.max_excess_on_reach = -std::numeric_limits<double>::infinity();
    for (int x : region) {
        if (in_closure[static_cast<size_t>(x)]) continue;
        double d = prof.d_closure[static_cast<size_t>(x)];
        if (!profile.in_domain(d)) continue;
        double excess = ld[static_cast<size_t>(x)] - profile(d);
        ++rep.evaluated;
        if (excess > rep.max_excess) {
            rep.max_excess = excess;
            rep.witness = x;
        }
        int fp = prof.footpoint[static_cast<size_t>(x)];
        bool on_reach = fp >= 0 && (in_window.empty() || in_window[static_cast<size_t>(fp)]);
        if (on_reach) rep.max_excess_on_reach = std::max(rep.max_excess_on_reach, excess);
    }
    if (rep.evaluated == 0) {
        rep.max_excess = 0.0;
        rep.max_excess_on_reach = 0.0;
        rep.witness.reset();
    }
    return rep;
}

BoundaryRepresentationReport boundary_representation_report(const MmSpace& space,
                                                            const PerimeterSet& set,
                                                            const DistanceProfile& prof) {
    VertexMeasure mu = distributional_laplacian(space, prof.d_closure);
    BoundaryRepresentationReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    rep.max_ratio = -std::numeric_limits<double>::infinity();
    std::vector<double> share(static_cast<size_t>(space.vertex_count()), 0.0);
    for (int eid : set.cut_edges()) {
        const Edge& e = space.edges()[static_cast<size_t>(eid)];
        share[static_cast<size_t>(e.u)] += e.weight * e.length;
        share[static_cast<size_t>(e.v)] += e.weight * e.length;
    }
    for (int x : prof.ring) {
        BoundaryRepresentationRow row;
        row.vertex = x;
        row.laplacian_mass = mu[static_cast<size_t>(x)];
        row.perimeter_share = share[static_cast<size_t>(x)];
        row.ratio = row.perimeter_share > 0.0 ? row.laplacian_mass / row.perimeter_share : 0.0;
        rep.min_ratio = std::min(rep.min_ratio, row.ratio);
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        rep.rows.push_back(row);
    }
    if (rep.rows.empty()) rep.min_ratio = rep.max_ratio = 0.0;
    return rep;
}

SignedDistanceReport signed_distance_report(const MmSpace& space, const PerimeterSet& set,
                                            const DistanceProfile& prof,
                                            const ComparisonProfile& profile,
                                            const std::vector<int>& region) {
    ScalarField lds = pointwise_laplacian(space, prof.d_signed);
    auto in_ring = flag_set(space, prof.ring);
    SignedDistanceReport rep;
    for (int x : region) {
        double d = prof.d_signed[static_cast<size_t>(x)];
        double l = lds[static_cast<size_t>(x)];
        if (in_ring[static_cast<size_t>(x)]) {
            rep.boundary_mass = std::max(rep.boundary_mass, std::abs(space.mass(x) * l));
            continue;
        }
        if (!profile.in_domain(d)) continue;
        if (set.contains(x))
            rep.inside_excess = std::max(rep.inside_excess, profile(d) - l);
        else
            rep.outside_excess = std::max(rep.outside_excess, l - profile(d));
    }
    return rep;
}

EquidistantReport equidistant_perimeter_check(const MmSpace& space, const PerimeterSet& set,
                                              const DistanceProfile& prof, double h,
                                              const ComparisonProfile& profile,
                                              const std::vector<int>& gamma,
                                              const std::vector<int>& reach_window) {
    if (!(h >= 0.0)) throw std::invalid_argument("equidistant_perimeter_check: h >= 0 required");
    const double tol = 1e-9 * std::max(1.0, h);
    EquidistantReport rep;

    rep.gamma = gamma;
    if (rep.gamma.empty())
        for (int v = 0; v < space.vertex_count(); ++v)
            if (std::abs(prof.d_closure[static_cast<size_t>(v)] - h) <= tol) rep.gamma.push_back(v);
    if (rep.gamma.empty()) throw std::invalid_argument("equidistant_perimeter_check: empty equidistant window");

    // Footpoint window on the boundary ring.
    std::vector<char> fp_seen(static_cast<size_t>(space.vertex_count()), 0);
    for (int v : rep.gamma) {
        int fp = prof.footpoint[static_cast<size_t>(v)];
        if (fp >= 0 && !fp_seen[static_cast<size_t>(fp)]) {
            fp_seen[static_cast<size_t>(fp)] = 1;
            rep.gamma_sigma.push_back(fp);
        }
    }

    // Geodesic bundle between the windows, and its reach check.
    auto d_gamma = space.distances_from_set(rep.gamma);
    auto d_sigma = space.distances_from_set(rep.gamma_sigma);
    auto in_window = reach_window.empty() ? std::vector<char>() : flag_set(space, reach_window);
    std::vector<int> bundle;
    rep.reach_ok = true;
    double integral = 0.0;
    for (int v = 0; v < space.vertex_count(); ++v) {
        if (std::abs(d_gamma.distance[static_cast<size_t>(v)] +
                     d_sigma.distance[static_cast<size_t>(v)] - h) > tol)
            continue;
        bundle.push_back(v);
        int fp = prof.footpoint[static_cast<size_t>(v)];
        if (fp < 0 || (!in_window.empty() && !in_window[static_cast<size_t>(fp)]))
            rep.reach_ok = false;
        double d = prof.d_closure[static_cast<size_t>(v)];
        if (profile.in_domain(d) && !set.contains(v))
            integral += space.mass(v) * profile(d);
    }

    // Enlargement E^h = {d_closure < h} and its perimeter through Gamma.
    std::vector<int> enlarged;
    for (int v = 0; v < space.vertex_count(); ++v)
        if (prof.d_closure[static_cast<size_t>(v)] < h - tol) enlarged.push_back(v);
    if (h <= tol) {
        // h = 0: the enlargement is the set itself, both sides coincide.
        rep.per_equidistant = perimeter(space, set, rep.gamma);
        rep.per_base = perimeter(space, set, rep.gamma_sigma.empty() ? rep.gamma : rep.gamma_sigma);
    } else {
        PerimeterSet eh(space, enlarged);
        rep.per_equidistant = perimeter(space, eh, rep.gamma);
        rep.per_base = perimeter(space, set, rep.gamma_sigma);
    }

    const double a2 = std::abs(profile.K) / (profile.N - 1.0);
    if (profile.K > 0.0)
        rep.bound_factor = std::pow(std::cos(std::sqrt(a2) * h), profile.N - 1.0);
    else if (profile.K < 0.0)
        rep.bound_factor = std::pow(std::cosh(std::sqrt(a2) * h), profile.N - 1.0);
    else
        rep.bound_factor = 1.0;

    rep.ratio = rep.per_base > 0.0 ? rep.per_equidistant / rep.per_base : 0.0;
    rep.within_bound = rep.per_equidistant <= rep.per_base * rep.bound_factor + 1e-12;
    rep.integral_form_rhs = rep.per_base + integral;
    return rep;
}

std::vector<MinkowskiRow> minkowski_equals_perimeter(const MmSpace& space,
                                                     const PerimeterSet& set,
                                                     const DistanceProfile& prof,
                                                     const std::vector<double>& eps_grid,
                                                     const std::vector<int>& window) {
    std::vector<int> win = window;
    if (win.empty())
        for (int v = 0; v < space.vertex_count(); ++v) win.push_back(v);
    auto in_win = flag_set(space, win);
    double per = perimeter_area(space, set, win);
    double mesh = std::numeric_limits<double>::infinity();
    for (int eid : set.cut_edges()) mesh = std::min(mesh, space.edges()[static_cast<size_t>(eid)].length);

    std::vector<MinkowskiRow> rows;
    for (double eps : eps_grid) {
        MinkowskiRow row;
        row.eps = eps;
        if (!(eps > 0.0) || eps < mesh * (1.0 - 1e-12) || per <= 0.0) {
            row.sub_resolution = true;
            row.ratio = 0.0;
            rows.push_back(row);
            continue;
        }
        double shell = 0.0;
        for (int v = 0; v < space.vertex_count(); ++v) {
            if (set.contains(v) || !in_win[static_cast<size_t>(v)]) continue;
            if (prof.d_closure[static_cast<size_t>(v)] < eps) shell += space.mass(v);
        }
        row.ratio = shell / eps / per;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace rcdlab
