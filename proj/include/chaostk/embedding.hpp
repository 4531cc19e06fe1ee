#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chaostk/time_series.hpp"

namespace chaostk {

struct EmbeddingParams {
    int n = 6;    // permutation / embedding dimension
    int tau = 1;  // delay in samples

    void validate() const {
        if (n < 2 || n > 8) throw std::invalid_argument("EmbeddingParams: n must be in [2, 8]");
        if (tau < 1) throw std::invalid_argument("EmbeddingParams: tau must be >= 1");
    }
};

inline std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

/// Delay vectors s_i = [x_i, x_{i+tau}, ..., x_{i+(n-1)tau}].
inline std::vector<std::vector<double>> takens_embed(const TimeSeries& series,
                                                     const EmbeddingParams& params) {
    params.validate();
    const std::size_t span = static_cast<std::size_t>(params.n - 1) * static_cast<std::size_t>(params.tau);
    if (series.samples.size() < span + 1)
        throw std::invalid_argument("takens_embed: series too short for (n, tau)");

    const std::size_t count = series.samples.size() - span;
    std::vector<std::vector<double>> vectors(count);
    for (std::size_t i = 0; i < count; ++i) {
        vectors[i].resize(static_cast<std::size_t>(params.n));
        for (int d = 0; d < params.n; ++d)
            vectors[i][static_cast<std::size_t>(d)] =
                series.samples[i + static_cast<std::size_t>(d) * static_cast<std::size_t>(params.tau)];
    }
    return vectors;
}

/// Lexicographic index of the ordinal rank pattern of v. Ties resolved by
/// giving the earlier position the lower rank.
inline std::uint32_t permutation_index(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 2 || n > 8) throw std::invalid_argument("permutation_index: dimension must be in [2, 8]");

    std::array<int, 8> rank{};
    for (std::size_t i = 0; i < n; ++i) {
        int r = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (v[j] < v[i] || (v[j] == v[i] && j < i)) ++r;
        }
        rank[i] = r;
    }

    // Lehmer code of the rank sequence.
    std::uint32_t index = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        int smaller_after = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (rank[j] < rank[i]) ++smaller_after;
        index += static_cast<std::uint32_t>(smaller_after) *
                 static_cast<std::uint32_t>(factorial(static_cast<int>(n - 1 - i)));
    }
    return index;
}

struct PermutationSequence {
    std::vector<std::uint32_t> symbols;
    int n = 0;
};

inline PermutationSequence symbolize(const TimeSeries& series, const EmbeddingParams& params) {
    const auto vectors = takens_embed(series, params);
    PermutationSequence seq;
    seq.n = params.n;
    seq.symbols.reserve(vectors.size());
    for (const auto& v : vectors) seq.symbols.push_back(permutation_index(v));
    return seq;
}

/// Normalized Shannon entropy of symbol frequencies, in [0, 1].
inline double permutation_entropy(const PermutationSequence& seq) {
    if (seq.symbols.empty()) throw std::invalid_argument("permutation_entropy: empty sequence");
    std::map<std::uint32_t, std::size_t> counts;
    for (auto s : seq.symbols) ++counts[s];
    const double total = static_cast<double>(seq.symbols.size());
    double entropy = 0.0;
    for (const auto& [sym, cnt] : counts) {
        const double p = static_cast<double>(cnt) / total;
        entropy -= p * std::log2(p);
    }
    return entropy / std::log2(static_cast<double>(factorial(seq.n)));
}

/// Undirected unweighted graph on observed permutations plus the
/// shortest-path metric on its largest connected component.
struct OrdinalNetwork {
    int n = 0;
    std::vector<std::uint32_t> nodes;                       // observed permutations, sorted
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges; // unordered pairs, lo < hi
    std::vector<std::uint32_t> component_nodes;             // largest connected component
    std::vector<std::vector<int>> dist;                     // shortest paths over component_nodes
    bool disconnected = false;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }
};

/// Builds the OPN from a permutation sequence: one node per observed symbol,
/// one edge per observed transition between distinct consecutive symbols.
inline OrdinalNetwork opn_from_symbols(const PermutationSequence& seq) {
    std::vector<std::uint32_t> nodes = seq.symbols;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.size() < 2)
        throw std::runtime_error("opn_from_symbols: degenerate network (fewer than 2 distinct symbols)");

    std::map<std::uint32_t, std::size_t> node_pos;
    for (std::size_t i = 0; i < nodes.size(); ++i) node_pos[nodes[i]] = i;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t i = 0; i + 1 < seq.symbols.size(); ++i) {
        const auto a = seq.symbols[i], b = seq.symbols[i + 1];
        if (a == b) continue; // self-transitions carry no edge
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    OrdinalNetwork net;
    net.n = seq.n;
    net.nodes = std::move(nodes);
    net.edges = std::move(edges);

    // Adjacency over node positions.
    const std::size_t nv = net.nodes.size();
    std::vector<std::vector<std::size_t>> adj(nv);
    for (const auto& [a, b] : net.edges) {
        adj[node_pos[a]].push_back(node_pos[b]);
        adj[node_pos[b]].push_back(node_pos[a]);
    }

    // Largest connected component by BFS.
    std::vector<int> comp(nv, -1);
    int n_comp = 0;
    for (std::size_t s = 0; s < nv; ++s) {
        if (comp[s] >= 0) continue;
        std::deque<std::size_t> queue{s};
        comp[s] = n_comp;
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop_front();
            for (auto v : adj[u])
                if (comp[v] < 0) {
                    comp[v] = n_comp;
                    queue.push_back(v);
                }
        }
        ++n_comp;
    }
    std::vector<std::size_t> comp_size(static_cast<std::size_t>(n_comp), 0);
    for (std::size_t i = 0; i < nv; ++i) ++comp_size[static_cast<std::size_t>(comp[i])];
    const int largest = static_cast<int>(
        std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());
    net.disconnected = n_comp > 1;

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < nv; ++i)
        if (comp[i] == largest) members.push_back(i);
    net.component_nodes.reserve(members.size());
    for (auto m : members) net.component_nodes.push_back(net.nodes[m]);

    // All-pairs shortest paths on the component via BFS from each node.
    std::vector<std::size_t> local(nv, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;
    const std::size_t nc = members.size();
    net.dist.assign(nc, std::vector<int>(nc, 0));
    for (std::size_t si = 0; si < nc; ++si) {
        std::vector<int> d(nv, -1);
        std::deque<std::size_t> queue{members[si]};
        d[members[si]] = 0;
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop_front();
            for (auto v : adj[u])
                if (d[v] < 0) {
                    d[v] = d[u] + 1;
                    queue.push_back(v);
                }
        }
        for (std::size_t ti = 0; ti < nc; ++ti)
            net.dist[si][ti] = d[members[ti]];
    }
    return net;
}

inline OrdinalNetwork opn_from_series(const TimeSeries& series, const EmbeddingParams& params) {
    return opn_from_symbols(symbolize(series, params));
}

/// Delay selection: maximize normalized permutation entropy over a tau grid,
/// ties to the smallest tau. An explicit tau can always be passed instead.
inline int select_tau_mpe(const TimeSeries& series, int n, int tau_min, int tau_max) {
    if (tau_min < 1 || tau_max < tau_min)
        throw std::invalid_argument("select_tau_mpe: bad tau range");
    int best_tau = -1;
    double best_pe = -1.0;
    for (int tau = tau_min; tau <= tau_max; ++tau) {
        EmbeddingParams p{n, tau};
        const std::size_t span = static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(tau);
        if (series.samples.size() < span + 1) break;
        const double pe = permutation_entropy(symbolize(series, p));
        if (pe > best_pe + 1e-15) {
            best_pe = pe;
            best_tau = tau;
        }
    }
    if (best_tau < 0) throw std::invalid_argument("select_tau_mpe: empty feasible range");
    return best_tau;
}

} // namespace chaostk
