#include "floodnet/flood_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "floodnet/rng.hpp"

namespace floodnet {

FloodOutcome run_flood(const Graph& g, const ComponentLabeling& comp, int originator,
                       const FloodRule& rule, std::uint64_t seed,
                       std::vector<std::uint8_t>* reached_out) {
    if (originator < 0 || originator >= g.n)
        throw std::invalid_argument("run_flood: originator out of range");
    if (comp.component[originator] != comp.largest_id)
        throw std::invalid_argument("run_flood: originator outside the largest component");

    int max_deg = 0;
    for (int v = 0; v < g.n; ++v) max_deg = std::max(max_deg, g.degree(v));
    const std::vector<double> phi = rule.forward_profile(std::max(max_deg, 1));
    const bool always = rule.kind() == RuleKind::uninformed;

    std::vector<std::uint8_t> informed(g.n, 0);
    std::vector<int> frontier{originator}, next;
    informed[originator] = 1;

    FloodOutcome out;
    out.reached = 1;
    int round = 0;
    while (!frontier.empty()) {
        next.clear();
        for (int v : frontier) {
            const int dv = g.degree(v);
            const std::uint64_t node_seed = derive_seed(seed, static_cast<std::uint64_t>(v));
            for (int k = 0; k < dv; ++k) {
                const int e = g.incidence[v][k];
                const int w = g.opposite(e, v);
                if (!always) {
                    const double p = phi[std::min(dv, g.degree(w))];
                    if (p < 1.0) {
                        const double u = unit_double(derive_seed(node_seed, static_cast<std::uint64_t>(k)));
                        if (u >= p) continue;
                    }
                }
                ++out.messages;
                out.rounds = round + 1;
                if (!informed[w]) {
                    informed[w] = 1;
                    ++out.reached;
                    out.waiting_sum += round + 1;
                    next.push_back(w);
                }
            }
        }
        frontier.swap(next);
        ++round;
    }

    if (reached_out) *reached_out = std::move(informed);
    return out;
}

BatchStats run_batch(const Graph& g, const FloodRule& rule, long long instances,
                     std::uint64_t seed) {
    if (instances < 1) throw std::invalid_argument("run_batch: instances must be >= 1");
    const ComponentLabeling comp = largest_component(g);
    if (comp.largest_size() < 1) throw std::invalid_argument("run_batch: empty component");

    const long long comp_size = comp.largest_size();
    long long comp_degree_sum = 0;
    for (int v : comp.largest_members) comp_degree_sum += g.degree(v);

    BatchStats stats;
    stats.component_size = static_cast<int>(comp_size);
    stats.instances = instances;

    for (long long i = 0; i < instances; ++i) {
        const std::uint64_t inst_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
        auto pick = make_engine(derive_seed(inst_seed, 0x6f726967ULL));  // originator draw
        const int originator =
            comp.largest_members[bounded(pick, comp.largest_members.size())];

        const FloodOutcome out = run_flood(g, comp, originator, rule, inst_seed);

        stats.pn.add(static_cast<double>(out.reached) / static_cast<double>(comp_size));
        stats.pm.add(comp_degree_sum > 0
                         ? static_cast<double>(out.messages) / static_cast<double>(comp_degree_sum)
                         : 0.0);
        if (out.reached > 1) {
            // Normalizer: mean BFS distance from this originator, i.e. the
            // exact per-node waiting time of uninformed flooding.
            const std::vector<int> dist = bfs_distances(g, originator);
            long long dist_sum = 0;
            for (int v : comp.largest_members) dist_sum += dist[v];
            const double mean_wait =
                static_cast<double>(out.waiting_sum) / static_cast<double>(out.reached - 1);
            const double mean_dist = static_cast<double>(dist_sum) / static_cast<double>(comp_size - 1);
            if (mean_dist > 0.0) stats.pt.add(mean_wait / mean_dist);
        } else if (comp_size > 1) {
            // A flood that never leaves the originator contributes a zero
            // waiting-time ratio. This is how the analytical P_t weights
            // failed floods (the theta_in/theta_g factor), and it is what
            // makes the simulated ratio vanish below the digraph transition.
            stats.pt.add(0.0);
        }
    }
    return stats;
}

}  // namespace floodnet
