#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "floodnet/degree_model.hpp"

namespace floodnet {

/// Undirected multigraph. Self-loops and parallel edges are allowed; a
/// self-loop appears exactly once in its endpoint's incidence list, so it
/// contributes 1 to the degree (one forwarding opportunity).
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;    // unordered endpoint pairs
    std::vector<std::vector<int>> incidence;   // edge ids per node

    int degree(int v) const { return static_cast<int>(incidence[v].size()); }

    /// The endpoint of edge e opposite to v (v itself for a self-loop).
    int opposite(int e, int v) const {
        const auto& [a, b] = edges[e];
        return a == v ? b : a;
    }

    int self_loop_count() const;
    long long degree_sum() const;

    /// Checks the incidence invariants; throws std::logic_error on violation.
    void validate() const;

    /// Edge-list dump: header line "# n=<n>", then one "u v" pair per line.
    void write_edge_list(std::ostream& os) const;
};

/// Builds incidence lists from an edge multiset.
Graph graph_from_edges(int n, std::vector<std::pair<int, int>> edges);

/// Erdos-Renyi G(n, z/(n-1)): every pair of distinct nodes is joined
/// independently with probability z/(n-1). Simple graph by construction.
/// Requires n >= 2 and 0 < z <= n-1.
Graph generate_er(int n, double z, std::uint64_t seed);

/// Configuration-model multigraph: degrees are sampled i.i.d. from the
/// model (the whole sequence is resampled while the sum is odd), one ball
/// per degree unit goes into an urn, and a uniformly random perfect
/// matching of the balls yields the edges. Self-loops and parallel edges
/// are kept. Throws after 1000 odd-sum resamples.
Graph generate_configuration(int n, const DegreeModel& model, std::uint64_t seed);

struct ComponentLabeling {
    std::vector<int> component;        // component id per node
    std::vector<int> sizes;            // size per component id
    int largest_id = -1;
    std::vector<int> largest_members;  // ascending node ids

    int count() const { return static_cast<int>(sizes.size()); }
    int largest_size() const { return largest_id < 0 ? 0 : sizes[largest_id]; }
};

/// Labels connected components by BFS (multi-edges and self-loops are
/// ordinary connectivity) and records the largest one. Ties go to the
/// lowest component id, so the result is deterministic.
ComponentLabeling largest_component(const Graph& g);

/// BFS hop distances from source; -1 marks unreachable nodes.
std::vector<int> bfs_distances(const Graph& g, int source);

}  // namespace floodnet
