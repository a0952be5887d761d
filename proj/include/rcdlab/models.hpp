#pragma once

#include <string>
#include <vector>

#include "rcdlab/space.hpp"

namespace rcdlab {

enum class ModelKind { EuclideanGrid, Sphere, HyperbolicDisc, CircleCone, ProductLine };

ModelKind model_kind_from_string(const std::string& s);
std::string to_string(ModelKind k);

/// Parameters for the model-geometry samplers.
///
/// euclidean_grid: [0, extent]^N lattice with spacing h.
/// sphere:         N=2 band |s| <= extent around the equator of the round
///                 sphere with curvature parameter K > 0 (radius sqrt((N-1)/K)).
/// hyperbolic_disc:N=2 Fermi slab around a geodesic, curvature K < 0;
///                 metric dt^2 + cosh^2(sqrt(-K) t) dx^2, |t|,|x| <= extent.
/// circle_cone:    flat cone over a circle of radius r in (0,1], rays up to
///                 extent; N=3 takes the product with a line segment.
/// product_line:   segment [-extent, extent] times a circle of radius r.
struct ModelSpec {
    ModelKind kind = ModelKind::EuclideanGrid;
    int N = 2;
    double K = 0.0;
    double cone_radius = 1.0;
    double h = 0.1;
    double extent = 1.0;
};

MmSpace sample_model(const ModelSpec& spec);

/// 1-D flat torus: cycle with n vertices and the given total circumference.
MmSpace make_cycle(int n, double circumference = 1.0);

/// Box product of two spaces with product masses and consistent
/// finite-volume edge weights (the product Laplacian is the sum of factors).
MmSpace product_space(const MmSpace& a, const MmSpace& b);

/// Volume of the radius-r ball in the model space of dimension N and
/// curvature parameter K (the reference in the volume-ratio inequality).
double model_ball_volume(double K, double N, double r);

struct BishopGromovReport {
    std::vector<double> radii;
    std::vector<double> ratios;        // m(B_r(x)) / v_{K,N}(r)
    double max_upward_violation = 0.0; // largest increase along the radii
};

BishopGromovReport bishop_gromov_ratio(const MmSpace& space, int x, double K, double N,
                                       const std::vector<double>& radii);

}  // namespace rcdlab
