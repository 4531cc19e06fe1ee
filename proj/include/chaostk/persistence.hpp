#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace chaostk {

struct PersistencePoint {
    int dim = 0;
    double birth = 0.0;
    double death = 0.0;
    bool essential = false;

    double lifetime() const { return death - birth; }
    bool operator==(const PersistencePoint&) const = default;
};

using PersistenceDiagram = std::vector<PersistencePoint>;

struct ScalarField2D {
    std::vector<double> values; // row-major, values[y * width + x]
    std::size_t width = 0;
    std::size_t height = 0;

    double& at(std::size_t x, std::size_t y) { return values[y * width + x]; }
    double at(std::size_t x, std::size_t y) const { return values[y * width + x]; }
    std::size_t size() const { return values.size(); }
};

namespace detail {

struct UnionFind {
    std::vector<std::uint32_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void link(std::uint32_t root, std::uint32_t child) { parent[child] = root; }
};

} // namespace detail

/// 0-dimensional sublevel-set persistence of a 2D grid under 4-connectivity.
/// Components are born at local minima and die by the elder rule; pairs with
/// zero persistence are dropped. The essential component spans
/// [global min, global max] and is flagged.
inline PersistenceDiagram sublevel_0d(const ScalarField2D& field) {
    const std::size_t n = field.size();
    if (n == 0 || field.width == 0 || field.height == 0)
        throw std::invalid_argument("sublevel_0d: empty grid");

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (field.values[a] != field.values[b]) return field.values[a] < field.values[b];
        return a < b;
    });

    std::vector<std::uint32_t> rank_of(n); // processing order of each cell
    for (std::uint32_t r = 0; r < n; ++r) rank_of[order[r]] = r;

    detail::UnionFind uf(n);
    std::vector<double> birth(n, 0.0); // per root
    std::vector<bool> processed(n, false);

    PersistenceDiagram diagram;
    const auto w = static_cast<std::ptrdiff_t>(field.width);
    const auto h = static_cast<std::ptrdiff_t>(field.height);

    for (std::uint32_t r = 0; r < n; ++r) {
        const std::uint32_t cell = order[r];
        const double level = field.values[cell];
        const auto x = static_cast<std::ptrdiff_t>(cell % field.width);
        const auto y = static_cast<std::ptrdiff_t>(cell / field.width);

        std::uint32_t roots[4];
        int n_roots = 0;
        const std::ptrdiff_t dx[4] = {-1, 1, 0, 0};
        const std::ptrdiff_t dy[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
            const std::ptrdiff_t nx = x + dx[k], ny = y + dy[k];
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            const auto ncell = static_cast<std::uint32_t>(ny * w + nx);
            if (!processed[ncell]) continue;
            const std::uint32_t root = uf.find(ncell);
            bool seen = false;
            for (int m = 0; m < n_roots; ++m) seen |= roots[m] == root;
            if (!seen) roots[n_roots++] = root;
        }

        processed[cell] = true;
        if (n_roots == 0) {
            birth[cell] = level; // new local-minimum component
            continue;
        }
        // Elder rule: the root with the smallest birth (ties: processed
        // earlier) absorbs the others and the current cell.
        std::uint32_t elder = roots[0];
        for (int m = 1; m < n_roots; ++m) {
            const std::uint32_t cand = roots[m];
            if (birth[cand] < birth[elder] ||
                (birth[cand] == birth[elder] && rank_of[cand] < rank_of[elder]))
                elder = cand;
        }
        for (int m = 0; m < n_roots; ++m) {
            if (roots[m] == elder) continue;
            if (level > birth[roots[m]])
                diagram.push_back({0, birth[roots[m]], level, false});
            uf.link(elder, roots[m]);
        }
        uf.link(elder, cell);
    }

    const double global_min = field.values[order.front()];
    const double global_max = field.values[order.back()];
    diagram.push_back({0, global_min, global_max, true});
    return diagram;
}

using DistanceMatrix = std::vector<std::vector<double>>;

namespace detail {

inline void validate_distance_matrix(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i].size() != n) throw std::invalid_argument("vr_persistence: non-square matrix");
        if (dist[i][i] != 0.0) throw std::invalid_argument("vr_persistence: non-zero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(dist[i][j]) || dist[i][j] < 0.0)
                throw std::invalid_argument("vr_persistence: negative or non-finite entry");
            if (dist[i][j] != dist[j][i])
                throw std::invalid_argument("vr_persistence: non-symmetric matrix");
        }
    }
}

/// GF(2) symmetric difference of two ascending index lists.
inline void xor_column(std::vector<std::uint32_t>& col, const std::vector<std::uint32_t>& other) {
    std::vector<std::uint32_t> merged;
    merged.reserve(col.size() + other.size());
    std::size_t a = 0, b = 0;
    while (a < col.size() && b < other.size()) {
        if (col[a] < other[b]) merged.push_back(col[a++]);
        else if (other[b] < col[a]) merged.push_back(other[b++]);
        else { ++a; ++b; }
    }
    merged.insert(merged.end(), col.begin() + static_cast<std::ptrdiff_t>(a), col.end());
    merged.insert(merged.end(), other.begin() + static_cast<std::ptrdiff_t>(b), other.end());
    col = std::move(merged);
}

} // namespace detail

/// Vietoris-Rips persistence (H0 and H1) of a finite metric given by a
/// distance matrix. A simplex enters at its largest pairwise distance.
/// H1 deaths come from boundary-matrix reduction over the triangles; H0 from
/// a union-find sweep over edges. Classes that never die are reported with
/// death = (max entry + 1) and flagged essential. Zero-persistence pairs are
/// dropped.
inline PersistenceDiagram vr_persistence(const DistanceMatrix& dist) {
    detail::validate_distance_matrix(dist);
    const std::size_t nv = dist.size();
    PersistenceDiagram diagram;
    if (nv == 0) return diagram;
    if (nv == 1) {
        diagram.push_back({0, 0.0, 1.0, true});
        return diagram;
    }

    double max_entry = 0.0;
    for (const auto& row : dist)
        for (double d : row) max_entry = std::max(max_entry, d);
    const double essential_death = max_entry + 1.0;

    // Edges sorted by (filtration, lexicographic).
    struct Edge {
        double filt;
        std::uint32_t i, j;
    };
    std::vector<Edge> edges;
    edges.reserve(nv * (nv - 1) / 2);
    for (std::uint32_t i = 0; i < nv; ++i)
        for (std::uint32_t j = i + 1; j < nv; ++j)
            edges.push_back({dist[i][j], i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.filt != b.filt) return a.filt < b.filt;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    std::vector<std::uint32_t> edge_rank(nv * nv, 0);
    for (std::uint32_t r = 0; r < edges.size(); ++r) {
        edge_rank[edges[r].i * nv + edges[r].j] = r;
        edge_rank[edges[r].j * nv + edges[r].i] = r;
    }

    // H0: union-find over sorted edges. Negative edges merge components.
    detail::UnionFind uf(nv);
    std::vector<bool> edge_positive(edges.size(), false);
    std::size_t components = nv;
    for (std::uint32_t r = 0; r < edges.size(); ++r) {
        const auto ri = uf.find(edges[r].i), rj = uf.find(edges[r].j);
        if (ri == rj) {
            edge_positive[r] = true;
            continue;
        }
        uf.link(ri, rj);
        --components;
        if (edges[r].filt > 0.0) diagram.push_back({0, 0.0, edges[r].filt, false});
    }
    for (std::size_t k = 0; k < components; ++k)
        diagram.push_back({0, 0.0, essential_death, true});

    // Triangles sorted by (filtration, lexicographic); vertices packed into
    // one 64-bit key so the sort runs over plain integers.
    struct Tri {
        double filt;
        std::uint64_t key; // i << 40 | j << 20 | k
    };
    std::vector<Tri> tris;
    if (nv >= 3) tris.reserve(nv * (nv - 1) * (nv - 2) / 6);
    for (std::uint32_t i = 0; i < nv; ++i)
        for (std::uint32_t j = i + 1; j < nv; ++j) {
            const double dij = dist[i][j];
            for (std::uint32_t k = j + 1; k < nv; ++k) {
                const double filt = std::max({dij, dist[i][k], dist[j][k]});
                tris.push_back({filt, (static_cast<std::uint64_t>(i) << 40) |
                                          (static_cast<std::uint64_t>(j) << 20) | k});
            }
        }
    std::sort(tris.begin(), tris.end(), [](const Tri& a, const Tri& b) {
        if (a.filt != b.filt) return a.filt < b.filt;
        return a.key < b.key;
    });

    // Reduce the triangle boundary matrix; pivot pairings give H1 deaths.
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> pivot_column;
    pivot_column.reserve(edges.size());
    std::vector<bool> edge_paired(edges.size(), false);

    std::vector<std::uint32_t> col;
    for (const auto& tri : tris) {
        const auto i = static_cast<std::uint32_t>(tri.key >> 40);
        const auto j = static_cast<std::uint32_t>((tri.key >> 20) & 0xFFFFFu);
        const auto k = static_cast<std::uint32_t>(tri.key & 0xFFFFFu);
        col = {edge_rank[i * nv + j], edge_rank[i * nv + k], edge_rank[j * nv + k]};
        std::sort(col.begin(), col.end());

        while (!col.empty()) {
            const std::uint32_t pivot = col.back();
            auto it = pivot_column.find(pivot);
            if (it == pivot_column.end()) {
                edge_paired[pivot] = true;
                if (tri.filt > edges[pivot].filt)
                    diagram.push_back({1, edges[pivot].filt, tri.filt, false});
                pivot_column.emplace(pivot, std::move(col));
                col.clear();
                break;
            }
            detail::xor_column(col, it->second);
        }
    }

    // Positive edges never killed by a triangle are essential H1 classes.
    for (std::uint32_t r = 0; r < edges.size(); ++r)
        if (edge_positive[r] && !edge_paired[r])
            diagram.push_back({1, edges[r].filt, essential_death, true});

    return diagram;
}

struct PersistenceScoreResult {
    double score = 0.0;
    std::size_t diagrams_used = 0;
    std::size_t diagrams_excluded = 0;
};

/// Ensemble persistence score: per diagram, the mean Euclidean distance of
/// surviving 0D points (birth >= birth_floor) to the origin; then the mean
/// over diagrams. Diagrams with no surviving point are excluded.
inline PersistenceScoreResult persistence_score(const std::vector<PersistenceDiagram>& diagrams,
                                                double birth_floor = 0.01) {
    if (diagrams.empty()) throw std::invalid_argument("persistence_score: no diagrams");
    PersistenceScoreResult result;
    double total = 0.0;
    for (const auto& diagram : diagrams) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& pt : diagram) {
            if (pt.dim != 0 || pt.birth < birth_floor) continue;
            sum += std::sqrt(pt.birth * pt.birth + pt.death * pt.death);
            ++count;
        }
        if (count == 0) {
            ++result.diagrams_excluded;
            continue;
        }
        total += sum / static_cast<double>(count);
        ++result.diagrams_used;
    }
    if (result.diagrams_used == 0)
        throw std::runtime_error("persistence_score: every diagram was excluded by the birth floor");
    result.score = total / static_cast<double>(result.diagrams_used);
    return result;
}

/// Base-2 Shannon entropy of normalized lifetimes for one homology
/// dimension. Essential points are excluded; empty and single-point
/// diagrams give 0.
inline double persistent_entropy(const PersistenceDiagram& diagram, int dim) {
    std::vector<double> lifetimes;
    for (const auto& pt : diagram)
        if (pt.dim == dim && !pt.essential && pt.lifetime() > 0.0)
            lifetimes.push_back(pt.lifetime());
    if (lifetimes.size() < 2) return 0.0;
    const double total = std::accumulate(lifetimes.begin(), lifetimes.end(), 0.0);
    double entropy = 0.0;
    for (double l : lifetimes) {
        const double p = l / total;
        entropy -= p * std::log2(p);
    }
    return entropy;
}

/// E' = E / log2(sum of lifetimes) over the H1 part of the diagram.
/// Defined as 0 (degenerate) when the diagram is empty, has a single point,
/// or the lifetime sum is <= 1.
inline double normalized_persistent_entropy(const PersistenceDiagram& diagram,
                                            bool* degenerate = nullptr) {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& pt : diagram)
        if (pt.dim == 1 && !pt.essential && pt.lifetime() > 0.0) {
            total += pt.lifetime();
            ++count;
        }
    if (count < 2 || total <= 1.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    if (degenerate) *degenerate = false;
    return persistent_entropy(diagram, 1) / std::log2(total);
}

/// CSV serialization: dim,birth,death,essential_flag with 17 significant
/// digits so decimal round-trips are bit-exact.
inline void write_diagram_csv(std::ostream& os, const PersistenceDiagram& diagram) {
    os << "dim,birth,death,essential\n";
    os << std::setprecision(17);
    for (const auto& pt : diagram)
        os << pt.dim << ',' << pt.birth << ',' << pt.death << ',' << (pt.essential ? 1 : 0) << '\n';
}

inline PersistenceDiagram read_diagram_csv(std::istream& is) {
    PersistenceDiagram diagram;
    std::string line;
    if (!std::getline(is, line) || line.rfind("dim,", 0) != 0)
        throw std::runtime_error("read_diagram_csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        PersistencePoint pt;
        char comma;
        int essential_flag;
        if (!(ss >> pt.dim >> comma >> pt.birth >> comma >> pt.death >> comma >> essential_flag))
            throw std::runtime_error("read_diagram_csv: malformed row: " + line);
        pt.essential = essential_flag != 0;
        diagram.push_back(pt);
    }
    return diagram;
}

} // namespace chaostk
