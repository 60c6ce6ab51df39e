#pragma once

#include <cstdint>
#include <vector>

#include "floodnet/flood_rule.hpp"
#include "floodnet/graph.hpp"

namespace floodnet {

/// Result of one flooding instance.
struct FloodOutcome {
    long long reached = 0;      // component nodes that got the message, originator included
    long long messages = 0;     // forwarded copies, self-loop and back-edge sends included
    long long waiting_sum = 0;  // sum of first-receipt rounds over reached non-originators
    int rounds = 0;             // round index of the last delivery
};

/// Streaming mean / standard-error accumulator with commutative merge.
struct RunningStat {
    long long count = 0;
    double sum = 0.0;
    double sumsq = 0.0;

    void add(double x) {
        ++count;
        sum += x;
        sumsq += x * x;
    }
    void merge(const RunningStat& o) {
        count += o.count;
        sum += o.sum;
        sumsq += o.sumsq;
    }
    double mean() const { return count > 0 ? sum / count : 0.0; }
    double std_error() const {
        if (count < 2) return 0.0;
        const double m = mean();
        const double var = std::max(0.0, (sumsq - count * m * m) / (count - 1));
        return std::sqrt(var / count);
    }
};

/// Empirical reach / message / waiting-time ratios over a batch of
/// flooding instances on one graph's largest component. An instance whose
/// flood never leaves the originator has no waiting time of its own and
/// enters the waiting-time mean as 0, mirroring how the analytical ratio
/// weights failed floods; the mean is undefined only on a one-node
/// component.
struct BatchStats {
    RunningStat pn, pm, pt;
    long long instances = 0;
    int component_size = 0;

    void merge(const BatchStats& o) {
        pn.merge(o.pn);
        pm.merge(o.pm);
        pt.merge(o.pt);
        instances += o.instances;
        if (component_size == 0) component_size = o.component_size;
    }
};

/// One synchronous flooding instance from the given originator, which must
/// lie in the largest component of the labeling. When a node first receives
/// the message at round t it decides independently for every incident edge
/// (the arrival edge included) with the rule's forwarding probability;
/// successful sends deliver at round t+1 and duplicates are ignored.
///
/// Decisions are keyed by (seed, node, incident-edge slot), so an outcome
/// depends only on (graph, originator, rule, seed) and two runs with a
/// shared seed use the same underlying uniforms — raising p in the
/// probabilistic rule can only grow the reached set.
///
/// If reached_out is non-null it receives a 0/1 mask of reached nodes.
FloodOutcome run_flood(const Graph& g, const ComponentLabeling& comp, int originator,
                       const FloodRule& rule, std::uint64_t seed,
                       std::vector<std::uint8_t>* reached_out = nullptr);

/// Runs `instances` floods from originators drawn uniformly from the
/// largest component, and aggregates the three ratios against the
/// uninformed-flooding normalizers: component size for reach, component
/// degree sum for messages, and the per-originator BFS mean distance for
/// waiting times. Instance i uses the child seed derive_seed(seed, i).
BatchStats run_batch(const Graph& g, const FloodRule& rule, long long instances,
                     std::uint64_t seed);

}  // namespace floodnet
