#include "floodnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "floodnet/rng.hpp"

namespace floodnet {

namespace {
constexpr int kOddSumRetryCap = 1000;
}

int Graph::self_loop_count() const {
    int loops = 0;
    for (const auto& [u, v] : edges)
        if (u == v) ++loops;
    return loops;
}

long long Graph::degree_sum() const {
    long long total = 0;
    for (const auto& inc : incidence) total += static_cast<long long>(inc.size());
    return total;
}

void Graph::validate() const {
    if (static_cast<int>(incidence.size()) != n)
        throw std::logic_error("graph: incidence list size mismatch");
    std::vector<int> seen(edges.size(), 0);
    for (int v = 0; v < n; ++v) {
        for (int e : incidence[v]) {
            if (e < 0 || e >= static_cast<int>(edges.size()))
                throw std::logic_error("graph: incidence references unknown edge");
            const auto& [a, b] = edges[e];
            if (a != v && b != v)
                throw std::logic_error("graph: incidence references non-incident edge");
            ++seen[e];
        }
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const int expected = edges[e].first == edges[e].second ? 1 : 2;
        if (seen[e] != expected)
            throw std::logic_error("graph: edge appears in the wrong number of incidence lists");
    }
    if (degree_sum() != 2 * static_cast<long long>(edges.size()) - self_loop_count())
        throw std::logic_error("graph: degree sum does not match edge count");
}

void Graph::write_edge_list(std::ostream& os) const {
    os << "# n=" << n << '\n';
    for (const auto& [u, v] : edges) os << u << ' ' << v << '\n';
}

Graph graph_from_edges(int n, std::vector<std::pair<int, int>> edges) {
    Graph g;
    g.n = n;
    g.edges = std::move(edges);
    g.incidence.resize(n);
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const auto& [u, v] = g.edges[e];
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        g.incidence[u].push_back(e);
        if (v != u) g.incidence[v].push_back(e);
    }
    return g;
}

Graph generate_er(int n, double z, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_er requires n >= 2");
    if (!(z > 0.0)) throw std::invalid_argument("generate_er requires z > 0");
    if (z > n - 1.0) throw std::invalid_argument("generate_er requires z <= n-1");
    const double p = z / (n - 1.0);

    auto rng = make_engine(seed);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(0.5 * n * z * 1.1) + 16);

    if (p >= 1.0) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    } else {
        // Geometric skips over the lexicographically ordered pairs (i, j),
        // j < i: expected time O(n + m) instead of O(n^2).
        const double log1mp = std::log1p(-p);
        long long idx = -1;  // last pair taken, flattened
        const long long total = static_cast<long long>(n) * (n - 1) / 2;
        while (true) {
            const double u = unit_double(rng());
            const double skip = std::floor(std::log1p(-u) / log1mp);
            if (skip > static_cast<double>(total)) break;
            idx += 1 + static_cast<long long>(skip);
            if (idx >= total) break;
            // unflatten: pair index within row i spans i*(i-1)/2 .. i*(i+1)/2-1
            const int i = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(idx))) / 2.0);
            long long base = static_cast<long long>(i) * (i - 1) / 2;
            int row = i;
            while (base > idx) { --row; base -= row; }          // float guard
            while (idx - base >= row) { base += row; ++row; }   // float guard
            const int j = static_cast<int>(idx - base);
            edges.emplace_back(row, j);
        }
    }

    Graph g = graph_from_edges(n, std::move(edges));
    g.validate();
    return g;
}

Graph generate_configuration(int n, const DegreeModel& model, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_configuration requires n >= 1");
    if (!(model.mean_degree() > 0.0))
        throw std::invalid_argument("generate_configuration requires a model with positive mean degree");

    auto rng = make_engine(seed);
    std::vector<int> degrees(n);
    long long total = 0;
    int attempt = 0;
    for (;; ++attempt) {
        if (attempt >= kOddSumRetryCap)
            throw std::runtime_error("configuration model: degree sum stayed odd after retry cap");
        total = 0;
        for (int i = 0; i < n; ++i) {
            degrees[i] = model.sample(rng);
            total += degrees[i];
        }
        if (total % 2 == 0) break;
    }

    // Urn of labeled balls: node i appears degrees[i] times. A uniform
    // shuffle paired off two at a time is a uniform perfect matching.
    std::vector<int> stubs;
    stubs.reserve(total);
    for (int i = 0; i < n; ++i) stubs.insert(stubs.end(), degrees[i], i);
    for (std::size_t k = stubs.size(); k > 1; --k)
        std::swap(stubs[k - 1], stubs[bounded(rng, k)]);

    std::vector<std::pair<int, int>> edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2)
        edges.emplace_back(stubs[k], stubs[k + 1]);

    Graph g = graph_from_edges(n, std::move(edges));
    g.validate();
    return g;
}

ComponentLabeling largest_component(const Graph& g) {
    ComponentLabeling lab;
    lab.component.assign(g.n, -1);
    std::vector<int> queue;
    for (int start = 0; start < g.n; ++start) {
        if (lab.component[start] >= 0) continue;
        const int id = lab.count();
        int size = 0;
        queue.clear();
        queue.push_back(start);
        lab.component[start] = id;
        while (!queue.empty()) {
            const int v = queue.back();
            queue.pop_back();
            ++size;
            for (int e : g.incidence[v]) {
                const int w = g.opposite(e, v);
                if (lab.component[w] < 0) {
                    lab.component[w] = id;
                    queue.push_back(w);
                }
            }
        }
        lab.sizes.push_back(size);
        if (lab.largest_id < 0 || size > lab.sizes[lab.largest_id]) lab.largest_id = id;
    }
    for (int v = 0; v < g.n; ++v)
        if (lab.component[v] == lab.largest_id) lab.largest_members.push_back(v);
    return lab;
}

std::vector<int> bfs_distances(const Graph& g, int source) {
    std::vector<int> dist(g.n, -1);
    std::vector<int> frontier{source}, next;
    dist[source] = 0;
    int d = 0;
    while (!frontier.empty()) {
        ++d;
        next.clear();
        for (int v : frontier) {
            for (int e : g.incidence[v]) {
                const int w = g.opposite(e, v);
                if (dist[w] < 0) {
                    dist[w] = d;
                    next.push_back(w);
                }
            }
        }
        frontier.swap(next);
    }
    return dist;
}

}  // namespace floodnet
