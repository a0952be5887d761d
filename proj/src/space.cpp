#include "rcdlab/space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rcdlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MmSpace::MmSpace(std::vector<double> masses, std::vector<Edge> edges,
                 std::optional<std::vector<std::vector<double>>> coords,
                 double dimension_hint)
    : masses_(std::move(masses)),
      edges_(std::move(edges)),
      coords_(std::move(coords)),
      dimension_hint_(dimension_hint) {
    incidence_.assign(masses_.size(), {});
    for (size_t i = 0; i < edges_.size(); ++i) {
        incidence_[static_cast<size_t>(edges_[i].u)].push_back(static_cast<int>(i));
        incidence_[static_cast<size_t>(edges_[i].v)].push_back(static_cast<int>(i));
    }
    for (double m : masses_) total_mass_ += m;
    validate();
}

void MmSpace::validate() const {
    const int n = vertex_count();
    if (n == 0) throw std::invalid_argument("MmSpace: empty vertex set");
    for (double m : masses_)
        if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("MmSpace: masses must be positive");
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges_) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument("MmSpace: edge endpoint out of range");
        if (e.u == e.v) throw std::invalid_argument("MmSpace: self-loop");
        if (!(e.length > 0.0) || !(e.weight > 0.0))
            throw std::invalid_argument("MmSpace: edge length/weight must be positive");
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second) throw std::invalid_argument("MmSpace: duplicate edge");
    }
    // Connectivity (BFS).
    std::vector<char> vis(static_cast<size_t>(n), 0);
    std::queue<int> q;
    q.push(0);
    vis[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int eid : incidence_[static_cast<size_t>(u)]) {
            int w = other_end(eid, u);
            if (!vis[static_cast<size_t>(w)]) {
                vis[static_cast<size_t>(w)] = 1;
                ++count;
                q.push(w);
            }
        }
    }
    if (count != n) throw std::invalid_argument("MmSpace: graph is not connected");
    if (coords_ && static_cast<int>(coords_->size()) != n)
        throw std::invalid_argument("MmSpace: coords size mismatch");
}

std::vector<double> MmSpace::distances_from(int source) const {
    return distances_from_set({source}).distance;
}

MmSpace::MultiSourceResult MmSpace::distances_from_set(const std::vector<int>& sources,
                                                       const std::vector<double>& offsets) const {
    const int n = vertex_count();
    if (sources.empty()) throw std::invalid_argument("distances_from_set: no sources");
    if (!offsets.empty() && offsets.size() != sources.size())
        throw std::invalid_argument("distances_from_set: offsets size mismatch");
    MultiSourceResult res;
    res.distance.assign(static_cast<size_t>(n), kInf);
    res.footpoint.assign(static_cast<size_t>(n), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (size_t i = 0; i < sources.size(); ++i) {
        int s = sources[i];
        if (s < 0 || s >= n) throw std::invalid_argument("distances_from_set: source out of range");
        double d0 = offsets.empty() ? 0.0 : offsets[i];
        size_t si = static_cast<size_t>(s);
        // Ties towards the lowest source id.
        if (d0 < res.distance[si] ||
            (d0 == res.distance[si] && (res.footpoint[si] < 0 || s < res.footpoint[si]))) {
            res.distance[si] = d0;
            res.footpoint[si] = s;
            heap.push({d0, s});
        }
    }
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        size_t ui = static_cast<size_t>(u);
        if (d > res.distance[ui]) continue;
        for (int eid : incidence_[ui]) {
            const Edge& e = edges_[static_cast<size_t>(eid)];
            int w = e.u == u ? e.v : e.u;
            size_t wi = static_cast<size_t>(w);
            double nd = d + e.length;
            if (nd < res.distance[wi] ||
                (nd == res.distance[wi] && res.footpoint[ui] >= 0 &&
                 res.footpoint[ui] < res.footpoint[wi])) {
                res.distance[wi] = nd;
                res.footpoint[wi] = res.footpoint[ui];
                heap.push({nd, w});
            }
        }
    }
    return res;
}

double MmSpace::diameter_upper_bound() const {
    double s = 0.0;
    for (const Edge& e : edges_) s += e.length;
    return s;
}

Ball ball(const MmSpace& space, int center, double radius) {
    if (radius < 0.0) throw std::invalid_argument("ball: negative radius");
    Ball b;
    b.center = center;
    b.radius = radius;
    auto d = space.distances_from(center);
    for (int v = 0; v < space.vertex_count(); ++v)
        if (d[static_cast<size_t>(v)] < radius) b.members.push_back(v);
    return b;
}

std::vector<std::vector<double>> all_pairs_distances_serial(const MmSpace& space) {
    const int n = space.vertex_count();
    std::vector<std::vector<double>> table(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) table[static_cast<size_t>(i)] = space.distances_from(i);
    return table;
}

std::vector<std::vector<double>> all_pairs_distances(const MmSpace& space) {
    const int n = space.vertex_count();
    std::vector<std::vector<double>> table(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) table[static_cast<size_t>(i)] = space.distances_from(i);
    return table;
}

DistanceOracle::DistanceOracle(const MmSpace& space, int dense_threshold) : space_(space) {
    dense_ = space.vertex_count() <= dense_threshold;
    rows_.assign(static_cast<size_t>(space.vertex_count()), {});
    if (dense_) {
        auto table = all_pairs_distances(space);
        rows_ = std::move(table);
    }
}

const std::vector<double>& DistanceOracle::row(int u) const {
    auto& r = rows_[static_cast<size_t>(u)];
    if (r.empty()) r = space_.distances_from(u);
    return r;
}

double DistanceOracle::operator()(int u, int v) const { return row(u)[static_cast<size_t>(v)]; }

namespace {

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, p);
}

}  // namespace

std::string space_to_json(const MmSpace& space) {
    // Hand-rolled emission keeps the float formatting byte-deterministic
    // (shortest round-trip via to_chars).
    std::ostringstream out;
    out << "{\"masses\":[";
    for (int v = 0; v < space.vertex_count(); ++v) {
        if (v) out << ",";
        out << format_double(space.mass(v));
    }
    out << "],\"edges\":[";
    for (size_t i = 0; i < space.edges().size(); ++i) {
        const Edge& e = space.edges()[i];
        if (i) out << ",";
        out << "[" << e.u << "," << e.v << "," << format_double(e.length) << ","
            << format_double(e.weight) << "]";
    }
    out << "]";
    if (space.coords()) {
        out << ",\"coords\":[";
        for (size_t i = 0; i < space.coords()->size(); ++i) {
            if (i) out << ",";
            out << "[";
            const auto& c = (*space.coords())[i];
            for (size_t j = 0; j < c.size(); ++j) {
                if (j) out << ",";
                out << format_double(c[j]);
            }
            out << "]";
        }
        out << "]";
    }
    out << ",\"dimension_hint\":" << format_double(space.dimension_hint()) << "}";
    return out.str();
}

MmSpace space_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<double> masses = j.at("masses").get<std::vector<double>>();
    std::vector<Edge> edges;
    for (const auto& row : j.at("edges")) {
        if (row.size() != 4) throw std::invalid_argument("space json: edge row must be [u,v,length,weight]");
        edges.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>(), row[3].get<double>()});
    }
    std::optional<std::vector<std::vector<double>>> coords;
    if (j.contains("coords")) coords = j.at("coords").get<std::vector<std::vector<double>>>();
    double dim = j.value("dimension_hint", 2.0);
    return MmSpace(std::move(masses), std::move(edges), std::move(coords), dim);
}

MmSpace load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open space file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return space_from_json(ss.str());
}

void save_space(const MmSpace& space, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write space file: " + path);
    out << space_to_json(space) << "\n";
}

ScalarField load_field(const std::string& path, int expected_size) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open field file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    ScalarField f = j.get<std::vector<double>>();
    if (expected_size >= 0 && static_cast<int>(f.size()) != expected_size)
        throw std::runtime_error("field file size mismatch: " + path);
    return f;
}

void save_field(const ScalarField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write field file: " + path);
    out << "[";
    for (size_t i = 0; i < f.size(); ++i) {
        if (i) out << ",";
        out << format_double(f[i]);
    }
    out << "]\n";
}

std::vector<int> load_member_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open set file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    return j.at("members").get<std::vector<int>>();
}

void save_member_set(const std::vector<int>& members, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write set file: " + path);
    out << "{\"members\":[";
    for (size_t i = 0; i < members.size(); ++i) {
        if (i) out << ",";
        out << members[i];
    }
    out << "]}\n";
}

std::uint64_t space_hash(const MmSpace& space) {
    std::string s = space_to_json(space);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace rcdlab
