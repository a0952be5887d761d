#include "rcdlab/laplacian_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace rcdlab {

BoundSense bound_sense_from_string(const std::string& s) {
    if (s == "distributional") return BoundSense::Distributional;
    if (s == "heat_flow") return BoundSense::HeatFlow;
    if (s == "comparison") return BoundSense::Comparison;
    throw std::invalid_argument("unknown bound sense: " + s);
}

std::string to_string(BoundSense s) {
    switch (s) {
        case BoundSense::Distributional: return "distributional";
        case BoundSense::HeatFlow: return "heat_flow";
        case BoundSense::Comparison: return "comparison";
    }
    return "?";
}

VertexMeasure distributional_laplacian(const MmSpace& space, const ScalarField& f) {
    const int n = space.vertex_count();
    if (static_cast<int>(f.size()) != n)
        throw std::invalid_argument("distributional_laplacian: field size mismatch");
    VertexMeasure mu(static_cast<size_t>(n), 0.0);
    for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (int eid : space.incident_edges(x)) {
            const Edge& e = space.edges()[static_cast<size_t>(eid)];
            int y = e.u == x ? e.v : e.u;
            acc += e.weight * (f[static_cast<size_t>(y)] - f[static_cast<size_t>(x)]);
        }
        mu[static_cast<size_t>(x)] = acc;  // = m(x) (Lf)(x)
    }
    return mu;
}

ScalarField poisson_dirichlet(const MmSpace& space, const std::vector<int>& domain,
                              const ScalarField& eta, const ScalarField& boundary_data) {
    const int n = space.vertex_count();
    if (domain.empty()) throw std::invalid_argument("poisson_dirichlet: empty domain");
    std::vector<int> pos(static_cast<size_t>(n), -1);
    for (size_t i = 0; i < domain.size(); ++i) {
        int v = domain[i];
        if (v < 0 || v >= n) throw std::invalid_argument("poisson_dirichlet: domain vertex out of range");
        if (pos[static_cast<size_t>(v)] >= 0) throw std::invalid_argument("poisson_dirichlet: duplicate domain vertex");
        pos[static_cast<size_t>(v)] = static_cast<int>(i);
    }
    if (static_cast<int>(domain.size()) == n)
        throw std::invalid_argument("poisson_dirichlet: domain must leave a nonempty exterior");

    const int k = static_cast<int>(domain.size());
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs(k);
    for (int i = 0; i < k; ++i) {
        int x = domain[static_cast<size_t>(i)];
        double diag = 0.0;
        double b = -space.mass(x) * eta[static_cast<size_t>(x)];
        for (int eid : space.incident_edges(x)) {
            const Edge& e = space.edges()[static_cast<size_t>(eid)];
            int y = e.u == x ? e.v : e.u;
            diag += e.weight;
            if (pos[static_cast<size_t>(y)] >= 0)
                trips.emplace_back(i, pos[static_cast<size_t>(y)], -e.weight);
            else
                b += e.weight * boundary_data[static_cast<size_t>(y)];
        }
        trips.emplace_back(i, i, diag);
        rhs(i) = b;
    }
    Eigen::SparseMatrix<double> A(k, k);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("poisson_dirichlet: factorization failed");
    Eigen::VectorXd g = solver.solve(rhs);
    ScalarField out = boundary_data;
    for (int i = 0; i < k; ++i) out[static_cast<size_t>(domain[static_cast<size_t>(i)])] = g(i);
    return out;
}

namespace {

BoundCertificate check_distributional(const MmSpace& space, const ScalarField& f,
                                      const ScalarField& eta, const std::vector<int>& region,
                                      double tol) {
    VertexMeasure mu = distributional_laplacian(space, f);
    BoundCertificate cert;
    cert.sense = BoundSense::Distributional;
    cert.region = region;
    cert.tolerance = tol;
    for (int x : region) {
        double v = mu[static_cast<size_t>(x)] / space.mass(x) - eta[static_cast<size_t>(x)];
        if (v > cert.max_violation) {
            cert.max_violation = v;
            cert.witness = x;
        }
    }
    cert.max_violation = std::max(0.0, cert.max_violation);
    if (cert.max_violation <= tol) cert.witness.reset();
    return cert;
}

BoundCertificate check_heat_flow(const MmSpace& space, const ScalarField& f,
                                 const ScalarField& eta, const std::vector<int>& region,
                                 const BoundCheckOptions& opt) {
    HeatOperator op(space, {HeatMethod::ExactExponential, 64, 1e-10});
    BoundCertificate cert;
    cert.sense = BoundSense::HeatFlow;
    cert.region = region;
    cert.tolerance = opt.tol_heat_flow;
    for (int x : region) {
        auto est = op.heat_flow_laplacian(f, x, opt.heat_t_grid);
        double v = est.estimate - eta[static_cast<size_t>(x)];
        if (v > cert.max_violation) {
            cert.max_violation = v;
            cert.witness = x;
        }
    }
    cert.max_violation = std::max(0.0, cert.max_violation);
    if (cert.max_violation <= cert.tolerance) cert.witness.reset();
    return cert;
}

BoundCertificate check_comparison(const MmSpace& space, const ScalarField& f,
                                  const ScalarField& eta, const std::vector<int>& region,
                                  const BoundCheckOptions& opt) {
    // Test subdomains: every singleton in the region, plus the region interior
    // (dropped silently when it has no exterior). A supersolution must
    // dominate the Dirichlet solution on each of them.
    BoundCertificate cert;
    cert.sense = BoundSense::Comparison;
    cert.region = region;
    cert.tolerance = opt.tol_comparison;
    auto run_domain = [&](const std::vector<int>& dom) {
        if (dom.empty() || static_cast<int>(dom.size()) == space.vertex_count()) return;
        ScalarField g = poisson_dirichlet(space, dom, eta, f);
        for (int x : dom) {
            double v = g[static_cast<size_t>(x)] - f[static_cast<size_t>(x)];
            if (v > cert.max_violation) {
                cert.max_violation = v;
                cert.witness = x;
            }
        }
    };
    for (int x : region) run_domain({x});
    run_domain(region);
    cert.max_violation = std::max(0.0, cert.max_violation);
    if (cert.max_violation <= cert.tolerance) cert.witness.reset();
    return cert;
}

}  // namespace

BoundCertificate check_upper_bound(const MmSpace& space, const ScalarField& f,
                                   const ScalarField& eta, const std::vector<int>& region,
                                   BoundSense sense, const BoundCheckOptions& opt) {
    const int n = space.vertex_count();
    if (static_cast<int>(f.size()) != n || static_cast<int>(eta.size()) != n)
        throw std::invalid_argument("check_upper_bound: field size mismatch");
    if (region.empty()) throw std::invalid_argument("check_upper_bound: empty region");
    switch (sense) {
        case BoundSense::Distributional:
            return check_distributional(space, f, eta, region, opt.tol_distributional);
        case BoundSense::HeatFlow: return check_heat_flow(space, f, eta, region, opt);
        case BoundSense::Comparison:
            if (static_cast<int>(region.size()) == n)
                throw std::invalid_argument("check_upper_bound: comparison sense needs a nonempty exterior");
            return check_comparison(space, f, eta, region, opt);
    }
    throw std::invalid_argument("check_upper_bound: bad sense");
}

CrossValidationReport cross_validate_senses(const MmSpace& space,
                                            const std::vector<ScalarField>& fields,
                                            const std::vector<ScalarField>& etas,
                                            const std::vector<int>& region, double margin_band,
                                            const BoundCheckOptions& opt) {
    if (fields.size() != etas.size())
        throw std::invalid_argument("cross_validate_senses: fields/etas size mismatch");
    CrossValidationReport rep;
    for (size_t c = 0; c < fields.size(); ++c) {
        auto d = check_upper_bound(space, fields[c], etas[c], region, BoundSense::Distributional, opt);
        auto h = check_upper_bound(space, fields[c], etas[c], region, BoundSense::HeatFlow, opt);
        auto cp = check_upper_bound(space, fields[c], etas[c], region, BoundSense::Comparison, opt);
        ++rep.cases;
        bool ok = true;
        if (d.passed() == h.passed()) ++rep.dist_heat_agree;
        else ok = false;
        // Margin of the distributional verdict: distance from the threshold.
        VertexMeasure mu = distributional_laplacian(space, fields[c]);
        double margin = std::numeric_limits<double>::infinity();
        double worst = -std::numeric_limits<double>::infinity();
        for (int x : region)
            worst = std::max(worst, mu[static_cast<size_t>(x)] / space.mass(x) -
                                        etas[c][static_cast<size_t>(x)]);
        margin = std::abs(worst);
        if (margin > margin_band) {
            ++rep.comparison_checked;
            if (d.passed() == cp.passed()) ++rep.dist_comparison_agree;
            else ok = false;
        }
        if (!ok) rep.disagreement_cases.push_back(static_cast<int>(c));
    }
    return rep;
}

double superminimizer_violation(const MmSpace& space, const ScalarField& f,
                                const ScalarField& eta, const std::vector<int>& region,
                                const std::vector<double>& amplitudes) {
    auto energy = [&](const ScalarField& v) {
        double acc = 0.0;
        for (const Edge& e : space.edges()) {
            double d = v[static_cast<size_t>(e.u)] - v[static_cast<size_t>(e.v)];
            acc += 0.5 * e.weight * d * d;
        }
        for (int x = 0; x < space.vertex_count(); ++x)
            acc += space.mass(x) * v[static_cast<size_t>(x)] * eta[static_cast<size_t>(x)];
        return acc;
    };
    const double base = energy(f);
    double worst = 0.0;
    for (int x : region) {
        for (double a : amplitudes) {
            if (!(a > 0.0)) throw std::invalid_argument("superminimizer_violation: amplitudes must be positive");
            ScalarField g = f;
            g[static_cast<size_t>(x)] += a;
            worst = std::max(worst, base - energy(g));
        }
    }
    return worst;
}

double viscosity_probe(const MmSpace& space, const ScalarField& f, int x) {
    auto d = space.distances_from(x);
    // Largest a with f(x) - a d(x,.)^2 <= f everywhere: the test field then
    // touches f at x from below.
    double a = 0.0;
    bool constrained = false;
    for (int y = 0; y < space.vertex_count(); ++y) {
        if (y == x) continue;
        double dd = d[static_cast<size_t>(y)] * d[static_cast<size_t>(y)];
        if (dd <= 0.0) continue;
        double need = (f[static_cast<size_t>(x)] - f[static_cast<size_t>(y)]) / dd;
        if (!constrained || need > a) a = need, constrained = true;
    }
    a = std::max(a, 0.0);
    ScalarField phi(f.size());
    for (int y = 0; y < space.vertex_count(); ++y)
        phi[static_cast<size_t>(y)] =
            f[static_cast<size_t>(x)] - a * d[static_cast<size_t>(y)] * d[static_cast<size_t>(y)];
    VertexMeasure mu = distributional_laplacian(space, phi);
    return mu[static_cast<size_t>(x)] / space.mass(x);
}

}  // namespace rcdlab
