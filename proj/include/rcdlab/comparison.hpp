#pragma once

#include <optional>
#include <vector>

#include "rcdlab/perimeter.hpp"
#include "rcdlab/space.hpp"

namespace rcdlab {

/// The comparison function appearing in the sharp Laplacian bound for the
/// distance from a minimal boundary:
///   -sqrt(K(N-1)) tan(sqrt(K/(N-1)) x)   for K > 0,
///   0                                     for K = 0,
///   sqrt(-K(N-1)) tanh(sqrt(-K/(N-1)) x)  for K < 0.
/// For K > 0 the domain is |x| < (pi/2) sqrt((N-1)/K).
double comparison_function(double K, double N, double x);

struct ComparisonProfile {
    double K = 0.0;
    double N = 2.0;

    double operator()(double x) const { return comparison_function(K, N, x); }
    bool in_domain(double x) const;
    double domain_radius() const;  // +inf for K <= 0

    /// Residual of t' = -K - t^2/(N-1) by central differences at x.
    double ode_residual(double x, double step = 1e-4) const;
};

/// Distances attached to a perimeter set. The discrete stand-in for the
/// closure of E is members + outer boundary ring, so the distance from the
/// closure vanishes on E and on the ring and the ring carries the boundary
/// Laplacian mass. The signed distance is measured from the ring, negative
/// on members.
struct DistanceProfile {
    ScalarField d_closure;
    ScalarField d_signed;
    std::vector<int> footpoint;  // ring vertex realizing d_closure (lowest id on ties)
    std::vector<int> ring;       // outer boundary
};

DistanceProfile distance_profile(const MmSpace& space, const PerimeterSet& set);

struct ExcessReport {
    double max_excess = 0.0;
    std::optional<int> witness;
    double max_excess_on_reach = 0.0;  // restricted to vertices whose footpoint lies in the window
    int evaluated = 0;
};

/// Signed max over the region (minus the closure) of L d - t_{K,N}(d).
/// Vertices on the boundary ring are excluded; they are covered by
/// boundary_representation_report instead. The optional window restricts the
/// reach set: a vertex contributes to max_excess_on_reach when its footpoint
/// lies inside the window.
ExcessReport laplacian_comparison_report(const MmSpace& space, const PerimeterSet& set,
                                         const DistanceProfile& prof,
                                         const ComparisonProfile& profile,
                                         const std::vector<int>& region,
                                         const std::vector<int>& reach_window = {});

struct BoundaryRepresentationRow {
    int vertex = 0;
    double laplacian_mass = 0.0;   // m(x) (L d_closure)(x)
    double perimeter_share = 0.0;  // area-normalized cut weight incident to x
    double ratio = 0.0;
};

struct BoundaryRepresentationReport {
    std::vector<BoundaryRepresentationRow> rows;
    double min_ratio = 0.0, max_ratio = 0.0;
};

/// Compares the distributional Laplacian mass of the closure distance on the
/// boundary ring against the local codimension-one perimeter density.
BoundaryRepresentationReport boundary_representation_report(const MmSpace& space,
                                                            const PerimeterSet& set,
                                                            const DistanceProfile& prof);

struct SignedDistanceReport {
    double inside_excess = 0.0;    // max over E cap region of t(d^s) - L d^s
    double outside_excess = 0.0;   // max over region minus closure of L d^s - t(d^s)
    double boundary_mass = 0.0;    // max |m (L d^s)| over ring cap region
};

SignedDistanceReport signed_distance_report(const MmSpace& space, const PerimeterSet& set,
                                            const DistanceProfile& prof,
                                            const ComparisonProfile& profile,
                                            const std::vector<int>& region);

struct EquidistantReport {
    double per_equidistant = 0.0;    // Per(E^h, Gamma)
    double per_base = 0.0;           // Per(E, Gamma_Sigma)
    double bound_factor = 1.0;       // cos/1/cosh branch raised to N-1
    double ratio = 0.0;              // per_equidistant / per_base
    bool within_bound = false;
    bool reach_ok = false;           // every bundle vertex carries a footpoint in the window
    double integral_form_rhs = 0.0;  // per_base + sum over the bundle of t_{K,N}(d) dm
    std::vector<int> gamma;          // the equidistant window actually used
    std::vector<int> gamma_sigma;    // its footpoints on the ring
};

/// Perimeter comparison between the equidistant slice at offset h and its
/// footpoint window on the boundary. Gamma defaults to the full discrete
/// equidistant set {d_closure = h}; pass a subset for localized windows.
EquidistantReport equidistant_perimeter_check(const MmSpace& space, const PerimeterSet& set,
                                              const DistanceProfile& prof, double h,
                                              const ComparisonProfile& profile,
                                              const std::vector<int>& gamma = {},
                                              const std::vector<int>& reach_window = {});

struct MinkowskiRow {
    double eps = 0.0;
    double ratio = 0.0;  // (1/eps) m(shell) / area-normalized perimeter
    bool sub_resolution = false;
};

/// Minkowski content of the one-sided shell {v outside E : d_closure < eps}
/// against the area-normalized perimeter, both restricted to the window.
/// Epsilons below the mesh scale are flagged and reported as 0.
std::vector<MinkowskiRow> minkowski_equals_perimeter(const MmSpace& space,
                                                     const PerimeterSet& set,
                                                     const DistanceProfile& prof,
                                                     const std::vector<double>& eps_grid,
                                                     const std::vector<int>& window = {});

}  // namespace rcdlab
