#include "rcdlab/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcdlab/heat.hpp"
#include "rcdlab/laplacian_bounds.hpp"

namespace rcdlab {

namespace {

ScalarField laplacian_of(const MmSpace& space, const ScalarField& f) {
    VertexMeasure mu = distributional_laplacian(space, f);
    ScalarField out(f.size());
    for (int x = 0; x < space.vertex_count(); ++x)
        out[static_cast<size_t>(x)] = mu[static_cast<size_t>(x)] / space.mass(x);
    return out;
}

void check_green_inputs(const MmSpace& space, int pole, const std::vector<int>& domain) {
    if (pole < 0 || pole >= space.vertex_count())
        throw std::invalid_argument("green_function: pole out of range");
    if (domain.empty()) throw std::invalid_argument("green_function: empty domain");
    if (static_cast<int>(domain.size()) == space.vertex_count())
        throw std::invalid_argument("green_function: domain must leave a nonempty exterior");
    if (!(space.dimension_hint() > 2.0))
        throw std::invalid_argument(
            "green_function: requires dimension_hint > 2 (dimension 2 needs a separate treatment)");
    if (std::find(domain.begin(), domain.end(), pole) == domain.end())
        throw std::invalid_argument("green_function: pole must lie in the domain");
}

ScalarField b_from_green(const MmSpace& space, int pole, const std::vector<int>& domain,
                         const ScalarField& green, double N) {
    ScalarField b(static_cast<size_t>(space.vertex_count()), 0.0);
    const double expo = -1.0 / (N - 2.0);
    for (int v : domain) {
        if (v == pole) continue;
        double g = green[static_cast<size_t>(v)];
        b[static_cast<size_t>(v)] = g > 0.0 ? std::pow(g, expo) : 0.0;
    }
    return b;
}

}  // namespace

GreenData green_function(const MmSpace& space, int pole, const std::vector<int>& domain) {
    check_green_inputs(space, pole, domain);
    const int n = space.vertex_count();
    ScalarField eta(static_cast<size_t>(n), 0.0);
    // L G = -delta_pole / m(pole), i.e. eta = -1/m at the pole.
    eta[static_cast<size_t>(pole)] = -1.0 / space.mass(pole);
    ScalarField zero(static_cast<size_t>(n), 0.0);
    GreenData g;
    g.pole = pole;
    g.domain = domain;
    g.N = space.dimension_hint();
    g.green = poisson_dirichlet(space, domain, eta, zero);
    g.b = b_from_green(space, pole, domain, g.green, g.N);
    return g;
}

GreenResiduals green_residuals(const MmSpace& space, const GreenData& g) {
    ScalarField lg = laplacian_of(space, g.green);
    GreenResiduals r;
    for (int v : g.domain) {
        if (v == g.pole) continue;
        r.max_harmonic_residual =
            std::max(r.max_harmonic_residual, std::abs(lg[static_cast<size_t>(v)]));
    }
    r.pole_residual = std::abs(lg[static_cast<size_t>(g.pole)] + 1.0 / space.mass(g.pole));
    return r;
}

GreenDistanceReport green_distance_check(const MmSpace& space, const GreenData& g,
                                         const std::vector<int>& eval_vertices) {
    std::vector<char> in_domain(static_cast<size_t>(space.vertex_count()), 0);
    for (int v : g.domain) in_domain[static_cast<size_t>(v)] = 1;
    auto dist = space.distances_from(g.pole);

    std::vector<int> eval = eval_vertices;
    if (eval.empty()) {
        double hmin = std::numeric_limits<double>::infinity();
        for (const Edge& e : space.edges()) hmin = std::min(hmin, e.length);
        for (int v : g.domain) {
            if (v == g.pole || dist[static_cast<size_t>(v)] < 2.0 * hmin) continue;
            bool interior = true;
            for (int eid : space.incident_edges(v))
                if (!in_domain[static_cast<size_t>(space.other_end(eid, v))]) interior = false;
            if (interior) eval.push_back(v);
        }
    }

    GreenDistanceReport rep;
    rep.c_lower = std::numeric_limits<double>::infinity();
    rep.c_upper = 0.0;

    ScalarField b2(g.b.size());
    for (size_t i = 0; i < g.b.size(); ++i) b2[i] = g.b[i] * g.b[i];
    ScalarField lb2 = laplacian_of(space, b2);
    HeatOperator op(space);  // only for the carre du champ
    ScalarField gamma_b = op.gradient_sq(g.b);

    for (int v : eval) {
        if (v == g.pole) continue;
        double ratio = g.b[static_cast<size_t>(v)] / dist[static_cast<size_t>(v)];
        rep.c_lower = std::min(rep.c_lower, ratio);
        rep.c_upper = std::max(rep.c_upper, ratio);
        double resid = std::abs(lb2[static_cast<size_t>(v)] -
                                2.0 * g.N * gamma_b[static_cast<size_t>(v)]);
        rep.laplacian_identity_residual = std::max(rep.laplacian_identity_residual, resid);
        ++rep.evaluated;
    }
    if (rep.evaluated == 0) rep.c_lower = 0.0;
    return rep;
}

GreenData green_function_heat_route(const MmSpace& space, int pole,
                                    const std::vector<int>& domain, double T,
                                    int quadrature_panels) {
    check_green_inputs(space, pole, domain);
    if (!(T > 0.0)) throw std::invalid_argument("green_function_heat_route: T > 0 required");
    const int n = space.vertex_count();
    HeatOperator heat(space, {HeatMethod::ExactExponential, 64, 1e-10});

    // Composite Simpson for G^T = int_0^T p_t(pole,.) dt; the integrand is
    // continuous down to t = 0 on a finite graph (p_0 = delta/m).
    ScalarField gt(static_cast<size_t>(n), 0.0);
    const double dt = T / quadrature_panels;
    auto kernel_at = [&](double t) -> ScalarField {
        if (t == 0.0) {
            ScalarField k(static_cast<size_t>(n), 0.0);
            k[static_cast<size_t>(pole)] = 1.0 / space.mass(pole);
            return k;
        }
        return heat.kernel_row(pole, t);
    };
    ScalarField left = kernel_at(0.0);
    for (int i = 0; i < quadrature_panels; ++i) {
        ScalarField mid = kernel_at((i + 0.5) * dt);
        ScalarField right = kernel_at((i + 1.0) * dt);
        for (int v = 0; v < n; ++v)
            gt[static_cast<size_t>(v)] += dt / 6.0 *
                                          (left[static_cast<size_t>(v)] +
                                           4.0 * mid[static_cast<size_t>(v)] +
                                           right[static_cast<size_t>(v)]);
        left = std::move(right);
    }

    // Dirichlet correction: L g = p_T(pole,.) on the domain with boundary
    // data G^T, then G = G^T - g vanishes outside and keeps the pole defect.
    ScalarField pt = heat.kernel_row(pole, T);
    ScalarField corr = poisson_dirichlet(space, domain, pt, gt);
    GreenData g;
    g.pole = pole;
    g.domain = domain;
    g.N = space.dimension_hint();
    g.green.assign(static_cast<size_t>(n), 0.0);
    for (int v : domain)
        g.green[static_cast<size_t>(v)] =
            gt[static_cast<size_t>(v)] - corr[static_cast<size_t>(v)];
    g.b = b_from_green(space, pole, domain, g.green, g.N);
    return g;
}

}  // namespace rcdlab
