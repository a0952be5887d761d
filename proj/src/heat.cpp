#include "rcdlab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace rcdlab {

namespace {
constexpr int kExactLimit = 2000;
}

struct HeatOperator::Impl {
    Eigen::SparseMatrix<double> A;  // graph Laplacian matrix D - W (PSD)
    Eigen::VectorXd m, sqrt_m, inv_sqrt_m;

    mutable std::once_flag eig_once;
    mutable Eigen::MatrixXd U;       // eigenvectors of S = m^{-1/2} A m^{-1/2}
    mutable Eigen::VectorXd lambda;  // eigenvalues (nonnegative)

    void ensure_eigen() const {
        std::call_once(eig_once, [this]() {
            Eigen::MatrixXd S = Eigen::MatrixXd(A);
            for (int i = 0; i < S.rows(); ++i)
                for (int j = 0; j < S.cols(); ++j) S(i, j) *= inv_sqrt_m(i) * inv_sqrt_m(j);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
            if (es.info() != Eigen::Success)
                throw std::runtime_error("heat: eigendecomposition failed");
            U = es.eigenvectors();
            lambda = es.eigenvalues();
        });
    }
};

HeatOperator::HeatOperator(const MmSpace& space, HeatConfig config)
    : space_(space), config_(config), impl_(std::make_unique<Impl>()) {
    const int n = space.vertex_count();
    impl_->m.resize(n);
    impl_->sqrt_m.resize(n);
    impl_->inv_sqrt_m.resize(n);
    for (int i = 0; i < n; ++i) {
        impl_->m(i) = space.mass(i);
        impl_->sqrt_m(i) = std::sqrt(space.mass(i));
        impl_->inv_sqrt_m(i) = 1.0 / impl_->sqrt_m(i);
    }
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<double> diag(static_cast<size_t>(n), 0.0);
    for (const Edge& e : space.edges()) {
        trips.emplace_back(e.u, e.v, -e.weight);
        trips.emplace_back(e.v, e.u, -e.weight);
        diag[static_cast<size_t>(e.u)] += e.weight;
        diag[static_cast<size_t>(e.v)] += e.weight;
    }
    for (int i = 0; i < n; ++i) trips.emplace_back(i, i, diag[static_cast<size_t>(i)]);
    impl_->A.resize(n, n);
    impl_->A.setFromTriplets(trips.begin(), trips.end());
}

HeatOperator::~HeatOperator() = default;
HeatOperator::HeatOperator(HeatOperator&&) noexcept = default;

bool HeatOperator::use_exact() const {
    switch (config_.method) {
        case HeatMethod::ExactExponential: return true;
        case HeatMethod::ImplicitSteps: return false;
        case HeatMethod::Auto: return space_.vertex_count() <= kExactLimit;
    }
    return true;
}

ScalarField HeatOperator::laplacian(const ScalarField& f) const {
    const int n = space_.vertex_count();
    if (static_cast<int>(f.size()) != n) throw std::invalid_argument("laplacian: field size mismatch");
    ScalarField out(static_cast<size_t>(n), 0.0);
    for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (int eid : space_.incident_edges(x)) {
            const Edge& e = space_.edges()[static_cast<size_t>(eid)];
            int y = e.u == x ? e.v : e.u;
            acc += e.weight * (f[static_cast<size_t>(y)] - f[static_cast<size_t>(x)]);
        }
        out[static_cast<size_t>(x)] = acc / space_.mass(x);
    }
    return out;
}

ScalarField HeatOperator::gradient_sq(const ScalarField& f) const {
    const int n = space_.vertex_count();
    if (static_cast<int>(f.size()) != n) throw std::invalid_argument("gradient_sq: field size mismatch");
    ScalarField out(static_cast<size_t>(n), 0.0);
    for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (int eid : space_.incident_edges(x)) {
            const Edge& e = space_.edges()[static_cast<size_t>(eid)];
            int y = e.u == x ? e.v : e.u;
            double d = f[static_cast<size_t>(y)] - f[static_cast<size_t>(x)];
            acc += e.weight * d * d;
        }
        out[static_cast<size_t>(x)] = acc / (2.0 * space_.mass(x));
    }
    return out;
}

ScalarField HeatOperator::apply_exact(const ScalarField& f, double t) const {
    impl_->ensure_eigen();
    const int n = space_.vertex_count();
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = f[static_cast<size_t>(i)] * impl_->sqrt_m(i);
    Eigen::VectorXd w = impl_->U.transpose() * v;
    for (int i = 0; i < n; ++i) w(i) *= std::exp(-t * std::max(0.0, impl_->lambda(i)));
    v = impl_->U * w;
    ScalarField out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = v(i) * impl_->inv_sqrt_m(i);
    return out;
}

ScalarField HeatOperator::apply_implicit(const ScalarField& f, double t) const {
    const int n = space_.vertex_count();
    const int k = std::max(1, config_.implicit_steps);
    const double tau = t / k;
    Eigen::SparseMatrix<double> sys = impl_->A * tau;
    for (int i = 0; i < n; ++i) sys.coeffRef(i, i) += impl_->m(i);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(sys);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("heat: implicit factorization failed");
    Eigen::VectorXd cur(n);
    for (int i = 0; i < n; ++i) cur(i) = f[static_cast<size_t>(i)];
    for (int step = 0; step < k; ++step) {
        Eigen::VectorXd rhs = impl_->m.asDiagonal() * cur;
        Eigen::VectorXd next = solver.solve(rhs);
        double resid = (sys * next - rhs).cwiseAbs().maxCoeff();
        double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
        if (!(resid <= config_.solver_tolerance * scale * 1e3)) {
            std::ostringstream msg;
            msg << "heat: implicit solve did not converge, residual " << resid;
            throw std::runtime_error(msg.str());
        }
        cur = next;
    }
    ScalarField out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = cur(i);
    return out;
}

ScalarField HeatOperator::apply(const ScalarField& f, double t) const {
    const int n = space_.vertex_count();
    if (static_cast<int>(f.size()) != n) throw std::invalid_argument("heat apply: field size mismatch");
    if (t < 0.0) throw std::invalid_argument("heat apply: t >= 0 required");
    if (t == 0.0) return f;
    return use_exact() ? apply_exact(f, t) : apply_implicit(f, t);
}

ScalarField HeatOperator::kernel_row(int x, double t) const {
    const int n = space_.vertex_count();
    if (x < 0 || x >= n) throw std::invalid_argument("kernel_row: vertex out of range");
    if (!(t > 0.0)) throw std::invalid_argument("kernel_row: t > 0 required");
    ScalarField delta(static_cast<size_t>(n), 0.0);
    delta[static_cast<size_t>(x)] = 1.0 / space_.mass(x);
    // e^{tL}(delta_x / m(x)) evaluated at y equals p_t(x,y) by symmetry of
    // the kernel density.
    return apply(delta, t);
}

HeatFlowEstimate HeatOperator::heat_flow_laplacian(const ScalarField& f, int x,
                                                   const std::vector<double>& t_grid) const {
    if (t_grid.size() < 3)
        throw std::invalid_argument("heat_flow_laplacian: need at least 3 grid points");
    for (size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i + 1]) || !(t_grid.back() > 0.0))
            throw std::invalid_argument("heat_flow_laplacian: t grid must be decreasing, positive");
    HeatFlowEstimate est;
    for (double t : t_grid) {
        ScalarField pf = apply(f, t);
        est.quotients.push_back((pf[static_cast<size_t>(x)] - f[static_cast<size_t>(x)]) / t);
    }
    // Neville polynomial extrapolation of the quotients to t = 0.
    std::vector<double> p = est.quotients;
    const size_t k = p.size();
    for (size_t level = 1; level < k; ++level)
        for (size_t i = 0; i + level < k; ++i) {
            double t0 = t_grid[i], t1 = t_grid[i + level];
            p[i] = (t0 * p[i + 1] - t1 * p[i]) / (t0 - t1);
        }
    est.estimate = p[0];
    // Trust diagnostic: successive quotient differences should not change sign.
    int sign = 0;
    for (size_t i = 0; i + 1 < est.quotients.size(); ++i) {
        double d = est.quotients[i + 1] - est.quotients[i];
        if (std::abs(d) < 1e-14) continue;
        int s = d > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) est.trusted = false;
    }
    return est;
}

double HeatOperator::bakry_emery_gap(const ScalarField& f, double t, double K) const {
    ScalarField ptf = apply(f, t);
    ScalarField lhs = gradient_sq(ptf);
    ScalarField pt_gamma = apply(gradient_sq(f), t);
    const double decay = std::exp(-2.0 * K * t);
    double gap = 0.0;
    for (size_t i = 0; i < lhs.size(); ++i) gap = std::max(gap, lhs[i] - decay * pt_gamma[i]);
    return std::max(0.0, gap);
}

}  // namespace rcdlab
