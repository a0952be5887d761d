#include "rcdlab/hopf_lax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rcdlab/laplacian_bounds.hpp"

namespace rcdlab {

namespace {

void check_inputs(const MmSpace& space, const ScalarField& f, double p, double t) {
    if (static_cast<int>(f.size()) != space.vertex_count())
        throw std::invalid_argument("hopf_lax: field size mismatch");
    if (p < 1.0) throw std::invalid_argument("hopf_lax: p >= 1 required");
    if (!(t > 0.0)) throw std::invalid_argument("hopf_lax: t > 0 required");
    for (double v : f)
        if (!std::isfinite(v)) throw std::invalid_argument("hopf_lax: field must be finite");
}

void brute_row(const MmSpace& space, const ScalarField& f, double p, double t, int x,
               const std::vector<double>& dist_row, double& val, int& arg) {
    const double scale = p * std::pow(t, p - 1.0);
    val = std::numeric_limits<double>::infinity();
    arg = -1;
    for (int y = 0; y < space.vertex_count(); ++y) {
        double cost = p == 1.0 ? dist_row[static_cast<size_t>(y)]
                               : std::pow(dist_row[static_cast<size_t>(y)], p) / scale;
        double c = f[static_cast<size_t>(y)] + cost;
        if (c < val) {
            val = c;
            arg = y;
        }
    }
}

}  // namespace

HopfLaxResult hopf_lax_brute_serial(const MmSpace& space, const ScalarField& f, double p,
                                    double t) {
    check_inputs(space, f, p, t);
    const int n = space.vertex_count();
    HopfLaxResult r;
    r.p = p;
    r.t = t;
    r.values.resize(static_cast<size_t>(n));
    r.argmin.resize(static_cast<size_t>(n));
    for (int x = 0; x < n; ++x) {
        auto row = space.distances_from(x);
        brute_row(space, f, p, t, x, row, r.values[static_cast<size_t>(x)],
                  r.argmin[static_cast<size_t>(x)]);
    }
    return r;
}

HopfLaxResult hopf_lax_brute(const MmSpace& space, const ScalarField& f, double p, double t) {
    check_inputs(space, f, p, t);
    const int n = space.vertex_count();
    HopfLaxResult r;
    r.p = p;
    r.t = t;
    r.values.resize(static_cast<size_t>(n));
    r.argmin.resize(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic, 8)
    for (int x = 0; x < n; ++x) {
        auto row = space.distances_from(x);
        brute_row(space, f, p, t, x, row, r.values[static_cast<size_t>(x)],
                  r.argmin[static_cast<size_t>(x)]);
    }
    return r;
}

HopfLaxResult hopf_lax(const MmSpace& space, const ScalarField& f, double p, double t) {
    check_inputs(space, f, p, t);
    if (p == 1.0) {
        // One Dijkstra sweep with every vertex as a source at offset f(y).
        const int n = space.vertex_count();
        std::vector<int> sources(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) sources[static_cast<size_t>(i)] = i;
        auto ms = space.distances_from_set(sources, f);
        HopfLaxResult r;
        r.p = 1.0;
        r.t = t;
        r.values = std::move(ms.distance);
        r.argmin = std::move(ms.footpoint);
        return r;
    }
    return hopf_lax_brute(space, f, p, t);
}

HopfLaxResult c_transform(const MmSpace& space, const ScalarField& f) {
    return hopf_lax(space, f, 1.0, 1.0);
}

ScalarField sup_transform(const MmSpace& space, const ScalarField& psi) {
    ScalarField neg(psi.size());
    for (size_t i = 0; i < psi.size(); ++i) neg[i] = -psi[i];
    ScalarField out = c_transform(space, neg).values;
    for (double& v : out) v = -v;
    return out;
}

KuwadaReport kuwada_check(const MmSpace& space, const HeatOperator& heat, const ScalarField& f,
                          double p, double K, const std::vector<double>& s_grid,
                          const std::vector<std::pair<int, int>>& pairs) {
    for (double v : f)
        if (v < 0.0) throw std::invalid_argument("kuwada_check: f must be nonnegative");
    HopfLaxResult q = hopf_lax(space, f, p, 1.0);
    DistanceOracle dist(space);
    KuwadaReport rep;
    auto consider = [&](int x, int y, double s, const ScalarField& pq, const ScalarField& pf) {
        double rhs = std::exp(-p * K * s) / p * std::pow(dist(x, y), p);
        double v = pq[static_cast<size_t>(x)] - pf[static_cast<size_t>(y)] - rhs;
        if (v > rep.max_violation) {
            rep.max_violation = v;
            rep.worst_x = x;
            rep.worst_y = y;
            rep.worst_s = s;
        }
    };
    for (double s : s_grid) {
        ScalarField pq = heat.apply(q.values, s);
        ScalarField pf = heat.apply(f, s);
        if (pairs.empty()) {
            for (int x = 0; x < space.vertex_count(); ++x)
                for (int y = 0; y < space.vertex_count(); ++y) consider(x, y, s, pq, pf);
        } else {
            for (auto [x, y] : pairs) consider(x, y, s, pq, pf);
        }
    }
    return rep;
}

PreservationReport preservation_experiment(const MmSpace& space, const ScalarField& f,
                                           const std::vector<int>& omega,
                                           const std::vector<int>& omega_prime, double eta,
                                           double K) {
    if (omega.empty() || omega_prime.empty())
        throw std::invalid_argument("preservation_experiment: empty domain");
    PreservationReport rep;
    HopfLaxResult fc = c_transform(space, f);

    std::vector<char> in_omega(static_cast<size_t>(space.vertex_count()), 0);
    for (int v : omega) in_omega[static_cast<size_t>(v)] = 1;
    rep.attainment_ok = true;
    for (int x : omega_prime) {
        int y = fc.argmin[static_cast<size_t>(x)];
        if (y < 0 || !in_omega[static_cast<size_t>(y)]) {
            rep.attainment_ok = false;
            rep.offending_vertex = x;
            return rep;
        }
    }

    ScalarField eta_field(static_cast<size_t>(space.vertex_count()), eta);
    auto cert = check_upper_bound(space, f, eta_field, omega, BoundSense::Distributional);
    rep.hypothesis_ok = cert.passed();
    if (!rep.hypothesis_ok) return rep;

    DistanceOracle dist(space);
    double min_kd = std::numeric_limits<double>::infinity();
    for (int x : omega_prime)
        for (int y : omega) min_kd = std::min(min_kd, K * dist(x, y));
    rep.bound = eta - min_kd;

    VertexMeasure mu = distributional_laplacian(space, fc.values);
    double worst = -std::numeric_limits<double>::infinity();
    for (int x : omega_prime)
        worst = std::max(worst, mu[static_cast<size_t>(x)] / space.mass(x) - rep.bound);
    rep.excess = worst;
    return rep;
}

}  // namespace rcdlab
