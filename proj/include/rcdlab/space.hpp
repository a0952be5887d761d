#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcdlab {

using ScalarField = std::vector<double>;

/// Signed vertex weights, one per vertex. Used for measure-valued objects
/// (distributional Laplacians, perimeter densities).
using VertexMeasure = std::vector<double>;

struct Edge {
    int u = 0;
    int v = 0;
    double length = 1.0;
    double weight = 1.0;
};

/// A finite discrete metric measure space: weighted graph with vertex masses
/// and a shortest-path metric over edge lengths. Immutable after construction;
/// all queries are const and safe to call concurrently.
class MmSpace {
public:
    MmSpace(std::vector<double> masses, std::vector<Edge> edges,
            std::optional<std::vector<std::vector<double>>> coords = std::nullopt,
            double dimension_hint = 2.0);

    int vertex_count() const { return static_cast<int>(masses_.size()); }
    const std::vector<double>& masses() const { return masses_; }
    double mass(int v) const { return masses_[static_cast<size_t>(v)]; }
    double total_mass() const { return total_mass_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::optional<std::vector<std::vector<double>>>& coords() const { return coords_; }
    double dimension_hint() const { return dimension_hint_; }

    /// Edge ids incident to v.
    const std::vector<int>& incident_edges(int v) const { return incidence_[static_cast<size_t>(v)]; }
    int other_end(int edge_id, int v) const {
        const Edge& e = edges_[static_cast<size_t>(edge_id)];
        return e.u == v ? e.v : e.u;
    }

    /// Single-source shortest-path distances (Dijkstra over edge lengths).
    std::vector<double> distances_from(int source) const;

    /// Shortest distance to a source set, each source starting at the given
    /// offset (0 if offsets empty). Also reports, per vertex, the source that
    /// realizes the minimum (ties broken towards the lowest vertex id).
    struct MultiSourceResult {
        std::vector<double> distance;
        std::vector<int> footpoint;  // realizing source id, -1 if unreachable
    };
    MultiSourceResult distances_from_set(const std::vector<int>& sources,
                                         const std::vector<double>& offsets = {}) const;

    double diameter_upper_bound() const;  // sum of edge lengths (crude, cheap)

private:
    std::vector<double> masses_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incidence_;
    std::optional<std::vector<std::vector<double>>> coords_;
    double dimension_hint_;
    double total_mass_ = 0.0;

    void validate() const;
};

/// Open metric ball: members = { v : d(center, v) < radius }.
struct Ball {
    int center = 0;
    double radius = 0.0;
    std::vector<int> members;
};

Ball ball(const MmSpace& space, int center, double radius);

/// All-pairs distance table (row i = distances from i). Data-parallel over
/// sources; the serial variant is the reference used by tests and benchmarks.
std::vector<std::vector<double>> all_pairs_distances(const MmSpace& space);
std::vector<std::vector<double>> all_pairs_distances_serial(const MmSpace& space);

/// Distance oracle: dense table for small spaces, cached per-source rows
/// on demand for large ones. Not thread-safe (per-thread instances are cheap).
class DistanceOracle {
public:
    explicit DistanceOracle(const MmSpace& space, int dense_threshold = 1024);
    double operator()(int u, int v) const;
    const std::vector<double>& row(int u) const;

private:
    const MmSpace& space_;
    bool dense_;
    mutable std::vector<std::vector<double>> rows_;
};

// Space file I/O. Schema:
//   {"masses":[...], "edges":[[u,v,length,weight],...],
//    "coords":[[...],...], "dimension_hint":N}
std::string space_to_json(const MmSpace& space);
MmSpace space_from_json(const std::string& text);
MmSpace load_space(const std::string& path);
void save_space(const MmSpace& space, const std::string& path);

// Field / set file helpers (field file: JSON array of reals; set file:
// {"members":[ids]}).
ScalarField load_field(const std::string& path, int expected_size = -1);
void save_field(const ScalarField& f, const std::string& path);
std::vector<int> load_member_set(const std::string& path);
void save_member_set(const std::vector<int>& members, const std::string& path);

/// FNV-1a hash of the canonical serialization; used for report provenance.
std::uint64_t space_hash(const MmSpace& space);

}  // namespace rcdlab
