#include "rcdlab/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rcdlab {

namespace {

constexpr double kPi = std::numbers::pi;

int axis_count(double extent, double h) {
    int steps = static_cast<int>(std::lround(extent / h));
    if (steps < 1) throw std::invalid_argument("sample_model: resolution too coarse for extent");
    return steps + 1;
}

// Node positions 0, h, ..., extent with half cells at the two ends.
double node_width(int i, int count, double h) {
    return (i == 0 || i == count - 1) ? h / 2.0 : h;
}

MmSpace sample_grid(const ModelSpec& spec) {
    if (spec.N < 1) throw std::invalid_argument("euclidean_grid: N >= 1 required");
    const int per_axis = axis_count(spec.extent, spec.h);
    int n = 1;
    for (int a = 0; a < spec.N; ++a) n *= per_axis;

    auto index_of = [&](const std::vector<int>& idx) {
        int lin = 0;
        for (int a = spec.N - 1; a >= 0; --a) lin = lin * per_axis + idx[static_cast<size_t>(a)];
        return lin;
    };

    std::vector<double> masses(static_cast<size_t>(n));
    std::vector<std::vector<double>> coords(static_cast<size_t>(n));
    std::vector<Edge> edges;
    std::vector<int> idx(static_cast<size_t>(spec.N), 0);
    for (int lin = 0; lin < n; ++lin) {
        double m = 1.0;
        std::vector<double> c(static_cast<size_t>(spec.N));
        for (int a = 0; a < spec.N; ++a) {
            m *= node_width(idx[static_cast<size_t>(a)], per_axis, spec.h);
            c[static_cast<size_t>(a)] = idx[static_cast<size_t>(a)] * spec.h;
        }
        masses[static_cast<size_t>(lin)] = m;
        coords[static_cast<size_t>(lin)] = std::move(c);
        for (int a = 0; a < spec.N; ++a) {
            if (idx[static_cast<size_t>(a)] + 1 < per_axis) {
                auto nb = idx;
                nb[static_cast<size_t>(a)] += 1;
                // Dual face: product of cell widths over the other axes.
                double face = 1.0;
                for (int b = 0; b < spec.N; ++b)
                    if (b != a) face *= node_width(idx[static_cast<size_t>(b)], per_axis, spec.h);
                edges.push_back({lin, index_of(nb), spec.h, face / spec.h});
            }
        }
        // advance mixed-radix counter
        for (int a = 0; a < spec.N; ++a) {
            if (++idx[static_cast<size_t>(a)] < per_axis) break;
            idx[static_cast<size_t>(a)] = 0;
        }
    }
    return MmSpace(std::move(masses), std::move(edges), std::move(coords),
                   static_cast<double>(spec.N));
}

// Surface of revolution sampled on a (row, column) lattice with periodic
// columns: row i sits at profile radius rho(i), rows are spaced h apart
// along the profile curve. Shared by the sphere band and the Fermi slab.
struct RevolutionPatch {
    std::vector<double> rho_node;  // circle radius at each row
    std::vector<double> rho_mid;   // circle radius between rows
    double h;
    int columns;
    bool clamp_row_ends;  // half cells on first/last row
};

MmSpace sample_revolution(const RevolutionPatch& p,
                          const std::vector<std::vector<double>>& coords, double dim_hint) {
    const int rows = static_cast<int>(p.rho_node.size());
    const int M = p.columns;
    if (M < 3) throw std::invalid_argument("sample_model: fewer than 3 columns; refine h");
    const int n = rows * M;
    auto id = [&](int i, int j) { return i * M + ((j % M + M) % M); };
    const double dtheta = 2.0 * kPi / M;

    std::vector<double> masses(static_cast<size_t>(n));
    std::vector<Edge> edges;
    for (int i = 0; i < rows; ++i) {
        double wrow = p.clamp_row_ends ? node_width(i, rows, p.h) : p.h;
        double arc = p.rho_node[static_cast<size_t>(i)] * dtheta;
        for (int j = 0; j < M; ++j) {
            masses[static_cast<size_t>(id(i, j))] = wrow * arc;
            edges.push_back({id(i, j), id(i, j + 1), arc, wrow / arc});
            if (i + 1 < rows) {
                double face = p.rho_mid[static_cast<size_t>(i)] * dtheta;
                edges.push_back({id(i, j), id(i + 1, j), p.h, face / p.h});
            }
        }
    }
    return MmSpace(std::move(masses), std::move(edges), coords, dim_hint);
}

MmSpace sample_sphere(const ModelSpec& spec) {
    if (spec.N != 2) throw std::invalid_argument("sphere sampler supports N=2");
    if (!(spec.K > 0.0)) throw std::invalid_argument("sphere sampler requires K > 0");
    const double R = std::sqrt((spec.N - 1) / spec.K);
    if (!(spec.extent < kPi * R / 2.0))
        throw std::invalid_argument("sphere band must stay away from the poles (extent < pi*R/2)");
    const int half = static_cast<int>(std::lround(spec.extent / spec.h));
    if (half < 1) throw std::invalid_argument("sphere sampler: resolution too coarse");
    const int rows = 2 * half + 1;
    const int M = std::max(3, static_cast<int>(std::lround(2.0 * kPi * R / spec.h)));

    RevolutionPatch p;
    p.h = spec.h;
    p.columns = M;
    p.clamp_row_ends = true;
    std::vector<std::vector<double>> coords;
    for (int i = 0; i < rows; ++i) {
        double s = (i - half) * spec.h;  // meridian arc length from the equator
        p.rho_node.push_back(R * std::cos(s / R));
        if (i + 1 < rows) p.rho_mid.push_back(R * std::cos((s + spec.h / 2.0) / R));
    }
    const double dtheta = 2.0 * kPi / M;
    for (int i = 0; i < rows; ++i) {
        double s = (i - half) * spec.h;
        double phi = s / R;
        for (int j = 0; j < M; ++j) {
            double th = j * dtheta;
            coords.push_back({R * std::cos(phi) * std::cos(th), R * std::cos(phi) * std::sin(th),
                              R * std::sin(phi)});
        }
    }
    return sample_revolution(p, coords, 2.0);
}

MmSpace sample_fermi_slab(const ModelSpec& spec) {
    if (spec.N != 2) throw std::invalid_argument("hyperbolic_disc sampler supports N=2");
    if (!(spec.K < 0.0)) throw std::invalid_argument("hyperbolic_disc sampler requires K < 0");
    const double a = std::sqrt(-spec.K / (spec.N - 1));
    const int half_t = static_cast<int>(std::lround(spec.extent / spec.h));
    const int cols = axis_count(2.0 * spec.extent, spec.h);
    if (half_t < 1) throw std::invalid_argument("hyperbolic_disc sampler: resolution too coarse");
    const int rows = 2 * half_t + 1;

    // Fermi chart around a geodesic: dt^2 + cosh^2(a t) dx^2. Cells are
    // (t,x) rectangles; the x direction is not periodic here.
    const int n = rows * cols;
    auto id = [&](int i, int j) { return i * cols + j; };
    std::vector<double> masses(static_cast<size_t>(n));
    std::vector<std::vector<double>> coords(static_cast<size_t>(n));
    std::vector<Edge> edges;
    for (int i = 0; i < rows; ++i) {
        double t = (i - half_t) * spec.h;
        double rho = std::cosh(a * t);
        double wrow = node_width(i, rows, spec.h);
        for (int j = 0; j < cols; ++j) {
            double x = -spec.extent + j * spec.h;
            double wcol = node_width(j, cols, spec.h);
            masses[static_cast<size_t>(id(i, j))] = wrow * wcol * rho;
            coords[static_cast<size_t>(id(i, j))] = {t, x};
            if (j + 1 < cols) {
                double len = rho * spec.h;
                edges.push_back({id(i, j), id(i, j + 1), len, wrow / len});
            }
            if (i + 1 < rows) {
                double face = std::cosh(a * (t + spec.h / 2.0)) * wcol;
                edges.push_back({id(i, j), id(i + 1, j), spec.h, face / spec.h});
            }
        }
    }
    return MmSpace(std::move(masses), std::move(edges), std::move(coords), 2.0);
}

MmSpace sample_cone_2d(const ModelSpec& spec) {
    if (!(spec.cone_radius > 0.0) || spec.cone_radius > 1.0)
        throw std::invalid_argument("circle_cone requires cone radius r in (0,1]");
    const double r = spec.cone_radius;
    const int rings = static_cast<int>(std::lround(spec.extent / spec.h));
    if (rings < 2) throw std::invalid_argument("circle_cone: resolution too coarse");
    const int M = std::max(3, static_cast<int>(std::lround(2.0 * kPi * r * spec.extent / spec.h)));
    const double dtheta = 2.0 * kPi * r / M;  // physical angle per sector

    // Tip vertex 0, then ring i (1..rings) with M sectors each.
    const int n = 1 + rings * M;
    auto id = [&](int i, int j) { return 1 + (i - 1) * M + ((j % M + M) % M); };
    std::vector<double> masses(static_cast<size_t>(n));
    std::vector<std::vector<double>> coords(static_cast<size_t>(n));
    std::vector<Edge> edges;

    const double slope = std::sqrt(1.0 - r * r);  // embedding height per unit rho
    masses[0] = 2.0 * kPi * r * (spec.h / 2.0) * (spec.h / 2.0) / 2.0;
    coords[0] = {0.0, 0.0, 0.0};
    for (int i = 1; i <= rings; ++i) {
        double rho = i * spec.h;
        double lo = rho - spec.h / 2.0;
        double hi = (i == rings) ? rho : rho + spec.h / 2.0;
        for (int j = 0; j < M; ++j) {
            int v = id(i, j);
            masses[static_cast<size_t>(v)] = dtheta * (hi * hi - lo * lo) / 2.0;
            double az = (j * dtheta) / r;  // embedding azimuth
            coords[static_cast<size_t>(v)] = {rho * r * std::cos(az), rho * r * std::sin(az),
                                              rho * slope};
            double arc = rho * dtheta;
            edges.push_back({v, id(i, j + 1), arc, (hi - lo) / arc});
            if (i == 1) {
                edges.push_back({0, v, spec.h, (spec.h / 2.0) * dtheta / spec.h});
            }
            if (i + 1 <= rings) {
                double face = (rho + spec.h / 2.0) * dtheta;
                edges.push_back({v, id(i + 1, j), spec.h, face / spec.h});
            }
        }
    }
    return MmSpace(std::move(masses), std::move(edges), std::move(coords), 2.0);
}

MmSpace sample_segment(double extent_full, double h, int& count_out) {
    const int count = axis_count(extent_full, h);
    count_out = count;
    std::vector<double> masses(static_cast<size_t>(count));
    std::vector<std::vector<double>> coords(static_cast<size_t>(count));
    std::vector<Edge> edges;
    for (int i = 0; i < count; ++i) {
        masses[static_cast<size_t>(i)] = node_width(i, count, h);
        coords[static_cast<size_t>(i)] = {-extent_full / 2.0 + i * h};
        if (i + 1 < count) edges.push_back({i, i + 1, h, 1.0 / h});
    }
    return MmSpace(std::move(masses), std::move(edges), std::move(coords), 1.0);
}

MmSpace sample_cone(const ModelSpec& spec) {
    if (spec.N == 2) return sample_cone_2d(spec);
    if (spec.N == 3) {
        int dummy = 0;
        MmSpace line = sample_segment(2.0 * spec.extent, spec.h, dummy);
        MmSpace cone = sample_cone_2d(spec);
        return product_space(line, cone);
    }
    throw std::invalid_argument("circle_cone sampler supports N=2 (cone) or N=3 (cone x line)");
}

MmSpace sample_product_line(const ModelSpec& spec) {
    if (spec.N != 2) throw std::invalid_argument("product_line sampler supports N=2");
    int dummy = 0;
    MmSpace line = sample_segment(2.0 * spec.extent, spec.h, dummy);
    int m = std::max(3, static_cast<int>(std::lround(2.0 * kPi * spec.cone_radius / spec.h)));
    MmSpace circle = make_cycle(m, 2.0 * kPi * spec.cone_radius);
    return product_space(line, circle);
}

}  // namespace

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "euclidean_grid") return ModelKind::EuclideanGrid;
    if (s == "sphere") return ModelKind::Sphere;
    if (s == "hyperbolic_disc") return ModelKind::HyperbolicDisc;
    if (s == "circle_cone") return ModelKind::CircleCone;
    if (s == "product_line") return ModelKind::ProductLine;
    throw std::invalid_argument("unknown model kind: " + s);
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::EuclideanGrid: return "euclidean_grid";
        case ModelKind::Sphere: return "sphere";
        case ModelKind::HyperbolicDisc: return "hyperbolic_disc";
        case ModelKind::CircleCone: return "circle_cone";
        case ModelKind::ProductLine: return "product_line";
    }
    return "?";
}

MmSpace sample_model(const ModelSpec& spec) {
    if (!(spec.h > 0.0) || !(spec.extent > 0.0))
        throw std::invalid_argument("sample_model: h and extent must be positive");
    switch (spec.kind) {
        case ModelKind::EuclideanGrid: return sample_grid(spec);
        case ModelKind::Sphere: return sample_sphere(spec);
        case ModelKind::HyperbolicDisc: return sample_fermi_slab(spec);
        case ModelKind::CircleCone: return sample_cone(spec);
        case ModelKind::ProductLine: return sample_product_line(spec);
    }
    throw std::invalid_argument("sample_model: bad kind");
}

MmSpace make_cycle(int n, double circumference) {
    if (n < 3) throw std::invalid_argument("make_cycle: need n >= 3");
    const double h = circumference / n;
    std::vector<double> masses(static_cast<size_t>(n), h);
    std::vector<std::vector<double>> coords(static_cast<size_t>(n));
    std::vector<Edge> edges;
    const double r = circumference / (2.0 * kPi);
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * kPi * i / n;
        coords[static_cast<size_t>(i)] = {r * std::cos(th), r * std::sin(th)};
        edges.push_back({i, (i + 1) % n, h, 1.0 / h});
    }
    return MmSpace(std::move(masses), std::move(edges), std::move(coords), 1.0);
}

MmSpace product_space(const MmSpace& a, const MmSpace& b) {
    const int na = a.vertex_count(), nb = b.vertex_count();
    auto id = [&](int i, int j) { return i * nb + j; };
    std::vector<double> masses(static_cast<size_t>(na * nb));
    std::vector<std::vector<double>> coords(static_cast<size_t>(na * nb));
    const bool have_coords = a.coords().has_value() && b.coords().has_value();
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            masses[static_cast<size_t>(id(i, j))] = a.mass(i) * b.mass(j);
            if (have_coords) {
                std::vector<double> c = (*a.coords())[static_cast<size_t>(i)];
                const auto& cb = (*b.coords())[static_cast<size_t>(j)];
                c.insert(c.end(), cb.begin(), cb.end());
                coords[static_cast<size_t>(id(i, j))] = std::move(c);
            }
        }
    std::vector<Edge> edges;
    // Edge weight in a product carries the transverse cell mass so that the
    // product Laplacian splits as L_a + L_b.
    for (const Edge& e : a.edges())
        for (int j = 0; j < nb; ++j)
            edges.push_back({id(e.u, j), id(e.v, j), e.length, e.weight * b.mass(j)});
    for (const Edge& e : b.edges())
        for (int i = 0; i < na; ++i)
            edges.push_back({id(i, e.u), id(i, e.v), e.length, e.weight * a.mass(i)});
    std::optional<std::vector<std::vector<double>>> oc;
    if (have_coords) oc = std::move(coords);
    return MmSpace(std::move(masses), std::move(edges), std::move(oc),
                   a.dimension_hint() + b.dimension_hint());
}

double model_ball_volume(double K, double N, double r) {
    if (!(N > 1.0)) throw std::invalid_argument("model_ball_volume: N > 1 required");
    if (r < 0.0) throw std::invalid_argument("model_ball_volume: r >= 0 required");
    const double omega_n = std::pow(kPi, N / 2.0) / std::tgamma(N / 2.0 + 1.0);
    if (K == 0.0) return omega_n * std::pow(r, N);
    const double k = K / (N - 1.0);  // sectional curvature of the model
    double rmax = r;
    if (k > 0.0) rmax = std::min(r, kPi / std::sqrt(k));
    // N * omega_N * int_0^r sn_k(t)^(N-1) dt, composite Simpson.
    auto sn = [&](double t) {
        if (k > 0.0) return std::sin(std::sqrt(k) * t) / std::sqrt(k);
        return std::sinh(std::sqrt(-k) * t) / std::sqrt(-k);
    };
    const int panels = 2048;
    const double dt = rmax / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        double t0 = i * dt, t1 = t0 + dt, tm = t0 + dt / 2.0;
        acc += dt / 6.0 *
               (std::pow(sn(t0), N - 1.0) + 4.0 * std::pow(sn(tm), N - 1.0) +
                std::pow(sn(t1), N - 1.0));
    }
    return N * omega_n * acc;
}

BishopGromovReport bishop_gromov_ratio(const MmSpace& space, int x, double K, double N,
                                       const std::vector<double>& radii) {
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("bishop_gromov_ratio: radii must be increasing");
    if (!radii.empty() && !(radii.front() > 0.0))
        throw std::invalid_argument("bishop_gromov_ratio: radii must be positive");
    BishopGromovReport rep;
    rep.radii = radii;
    auto d = space.distances_from(x);
    for (double r : radii) {
        double mass = 0.0;
        for (int v = 0; v < space.vertex_count(); ++v)
            if (d[static_cast<size_t>(v)] < r) mass += space.mass(v);
        rep.ratios.push_back(mass / model_ball_volume(K, N, r));
    }
    for (size_t i = 0; i + 1 < rep.ratios.size(); ++i)
        rep.max_upward_violation =
            std::max(rep.max_upward_violation, rep.ratios[i + 1] - rep.ratios[i]);
    return rep;
}

}  // namespace rcdlab
