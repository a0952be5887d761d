#pragma once

#include <map>
#include <vector>

#include "rcdlab/models.hpp"
#include "rcdlab/perimeter.hpp"
#include "rcdlab/space.hpp"

namespace rcdlab {

struct FlatnessReport {
    int center = 0;
    double r = 0.0;
    double gh_estimate = 0.0;           // ambient ball vs reference ball
    double boundary_gh_estimate = 0.0;  // boundary slice vs flat slice
    double l1_closeness = 0.0;          // best-alignment volume-fraction bound
};

struct FlatnessOptions {
    int sample_size = 64;       // points matched per side
    int improve_rounds = 200;   // 2-swap improvement iterations
    double reference_h_factor = 6.0;  // reference grid spacing = r / factor
};

/// Flatness surrogate at (x, r): a bounded-distortion assignment of at most
/// `sample_size` ball vertices into a dense sample of the Euclidean
/// reference ball (greedy insertion in farthest-point order plus local
/// 2-swaps). Half the achieved max distortion upper-bounds the
/// Gromov-Hausdorff discrepancy of the matched samples. The boundary entry
/// repeats this for the boundary ring against a flat slice; the volume
/// entry lower-bounds any aligned half-space symmetric difference.
FlatnessReport flatness(const MmSpace& space, const PerimeterSet& set, int x, double r,
                        const ModelSpec& reference, const FlatnessOptions& opt = {});

struct SingularScanResult {
    double delta = 0.0;
    std::vector<double> r_grid;
    std::vector<int> flagged;  // boundary vertices with no certifying scale
    std::map<double, double> tube_masses;
    bool ambient_only = false;
};

/// Flags every boundary-ring vertex for which no scale in r_grid produces a
/// FlatnessReport with all entries <= delta * r. Scales whose ball holds
/// fewer than 4 vertices cannot certify regularity and are skipped. With
/// ambient_only only the ambient estimate is thresholded.
SingularScanResult classify_points(const MmSpace& space, const PerimeterSet& set, double delta,
                                   const std::vector<double>& r_grid, const ModelSpec& reference,
                                   bool ambient_only = false, const FlatnessOptions& opt = {});

struct TubeEstimateRow {
    double r = 0.0;
    double mass = 0.0;
};

struct TubeEstimateReport {
    std::vector<TubeEstimateRow> rows;
    bool slope_reported = false;
    double loglog_slope = 0.0;
    double gamma = 0.0;
    bool satisfies_bound = false;  // slope >= 2 - gamma
};

/// Tube masses of the flagged set over the scan's scale ladder and the
/// log-log slope fit (needs >= 3 scales with positive mass).
TubeEstimateReport tube_estimate_experiment(const MmSpace& space, const PerimeterSet& set,
                                            const SingularScanResult& scan, double gamma,
                                            const std::vector<int>& window = {});

struct PerimeterRatioReport {
    std::vector<double> radii;
    std::vector<double> ratios;  // area-normalized Per(E, B_r(x)) / r^(N-1)
    double max_downward_violation = 0.0;
};

PerimeterRatioReport perimeter_ratio_monotonicity(const MmSpace& space, const PerimeterSet& set,
                                                  int x, const std::vector<double>& r_grid);

}  // namespace rcdlab
