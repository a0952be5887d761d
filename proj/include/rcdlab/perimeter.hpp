#pragma once

#include <vector>

#include "rcdlab/space.hpp"

namespace rcdlab {

/// A vertex subset with its cut edges cached. Boundary rings are recomputed
/// from the cut edges, never from stale membership flags.
class PerimeterSet {
public:
    PerimeterSet(const MmSpace& space, std::vector<int> members);

    const MmSpace& space() const { return *space_; }
    const std::vector<int>& members() const { return members_; }
    bool contains(int v) const { return flags_[static_cast<size_t>(v)] != 0; }
    const std::vector<int>& cut_edges() const { return cut_edges_; }
    double perimeter_total() const { return perimeter_total_; }

    /// Members incident to a cut edge.
    const std::vector<int>& inner_boundary() const { return inner_boundary_; }
    /// Non-members incident to a cut edge; stands in for the topological
    /// boundary of the (open) set, and closure() = members + this ring.
    const std::vector<int>& outer_boundary() const { return outer_boundary_; }
    std::vector<int> closure() const;

private:
    const MmSpace* space_;
    std::vector<int> members_;
    std::vector<char> flags_;
    std::vector<int> cut_edges_;
    std::vector<int> inner_boundary_, outer_boundary_;
    double perimeter_total_ = 0.0;
};

/// Localized perimeter: sum of cut-edge weights with at least one endpoint
/// in the region.
double perimeter(const MmSpace& space, const PerimeterSet& set, const std::vector<int>& region);
double perimeter(const MmSpace& space, const PerimeterSet& set, const Ball& region);

/// Same localization with weight * length per cut edge: the codimension-one
/// area normalization used when a report compares against volume-derived
/// quantities.
double perimeter_area(const MmSpace& space, const PerimeterSet& set,
                      const std::vector<int>& region);

struct LocalMinProblem {
    const MmSpace* space = nullptr;
    Ball ball;                       // free vertices
    std::vector<int> frozen_members; // membership outside the ball
};

/// Global minimizer of the cut among configurations that agree with the
/// frozen exterior; realized as a min s-t cut (Dinic). Among minimum cuts
/// the smallest member set is returned (source side closest to the frozen
/// members).
PerimeterSet minimize_in_ball(const LocalMinProblem& problem);

/// Reference enumerator for instances with few free vertices.
PerimeterSet minimize_in_ball_brute(const LocalMinProblem& problem, int max_free = 24);

struct DensityRow {
    int center = 0;
    double r = 0.0;
    double inside_fraction = 0.0;   // m(E cap B)/m(B)
    double outside_fraction = 0.0;  // m(B minus E)/m(B)
    double perimeter_ratio = 0.0;   // area-normalized Per(E,B) * r / m(B)
};
std::vector<DensityRow> quasi_min_density_report(const MmSpace& space, const PerimeterSet& set,
                                                 const std::vector<Ball>& balls);

/// Mass of the closed tube {d(., S) <= r}.
double tube_volume(const MmSpace& space, const std::vector<int>& vertex_set, double r);

struct CutAndPasteReport {
    double per_e = 0.0, per_f = 0.0, per_intersection = 0.0, per_union = 0.0;
    bool submodular_everywhere = false;  // per-edge indicator inequality
    int shared_cut_same_side = 0;        // both sets cut the edge with aligned orientation
    int shared_cut_opposite = 0;
};
CutAndPasteReport cut_and_paste_checks(const MmSpace& space, const PerimeterSet& e,
                                       const PerimeterSet& f);

struct CoareaReport {
    double weighted_variation = 0.0;  // sum over edges of fbar w |dv|
    double level_integral = 0.0;      // int Per_f({v > r}) dr, exact level sums
    double mismatch = 0.0;
};
/// Discrete coarea identity with fbar(e) = average of the weight field at the
/// endpoints; exact by telescoping over the sorted level values.
CoareaReport coarea_check(const MmSpace& space, const ScalarField& v, const ScalarField& f);

}  // namespace rcdlab
