#pragma once

#include <memory>
#include <vector>

#include "rcdlab/space.hpp"

namespace rcdlab {

enum class HeatMethod {
    Auto,              // exact exponential up to 2000 vertices, implicit beyond
    ExactExponential,  // dense eigendecomposition of the symmetrized operator
    ImplicitSteps,     // backward Euler with sub-stepping
};

struct HeatConfig {
    HeatMethod method = HeatMethod::Auto;
    int implicit_steps = 64;
    double solver_tolerance = 1e-10;
};

struct HeatFlowEstimate {
    double estimate = 0.0;            // extrapolated limit of (P_t f - f)/t at t=0
    std::vector<double> quotients;    // raw quotients on the t grid
    bool trusted = true;              // false when the quotients are not monotone
};

/// Weighted graph Laplacian (Lf)(x) = (1/m(x)) sum_y w(x,y) (f(y) - f(x))
/// together with the semigroup e^{tL}. Immutable after assembly; apply() is
/// const and safe to call concurrently (the spectral cache is built once
/// under a lock).
class HeatOperator {
public:
    explicit HeatOperator(const MmSpace& space, HeatConfig config = {});
    ~HeatOperator();
    HeatOperator(HeatOperator&&) noexcept;

    const MmSpace& space() const { return space_; }
    const HeatConfig& config() const { return config_; }

    ScalarField laplacian(const ScalarField& f) const;

    /// Carre du champ: Gamma(f)(x) = (1/(2 m(x))) sum_y w(x,y) (f(y)-f(x))^2.
    /// The 1/2 makes sum_x m(x) Gamma(f)(x) equal twice the Dirichlet energy
    /// (1/2) sum_edges w (df)^2 and lets Gamma(f) converge to |grad f|^2 on
    /// the model samplers.
    ScalarField gradient_sq(const ScalarField& f) const;

    ScalarField apply(const ScalarField& f, double t) const;

    /// Heat kernel density p_t(x,.) with respect to the vertex measure.
    ScalarField kernel_row(int x, double t) const;

    HeatFlowEstimate heat_flow_laplacian(const ScalarField& f, int x,
                                         const std::vector<double>& t_grid) const;

    /// Largest violation of Gamma(P_t f) <= e^{-2Kt} P_t Gamma(f), clipped at 0.
    double bakry_emery_gap(const ScalarField& f, double t, double K) const;

private:
    const MmSpace& space_;
    HeatConfig config_;
    struct Impl;
    std::unique_ptr<Impl> impl_;

    ScalarField apply_exact(const ScalarField& f, double t) const;
    ScalarField apply_implicit(const ScalarField& f, double t) const;
    bool use_exact() const;
};

}  // namespace rcdlab
