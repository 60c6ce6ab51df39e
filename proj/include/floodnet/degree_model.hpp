#pragma once

#include <random>
#include <string>
#include <vector>

namespace floodnet {

enum class DegreeKind { poisson, power_law, empirical };

struct PhaseTransition {
    double ratio;  // <K^2> / Z
    bool above;    // ratio > 2, i.e. a giant component almost surely exists
};

/// A node-degree distribution truncated to degrees 0..max_degree and
/// renormalized. Immutable after construction; safe to share across threads.
class DegreeModel {
public:
    /// Poisson(z) degrees, P(a) proportional to e^-z z^a / a!. Requires z > 0.
    static DegreeModel poisson(double z, int max_degree);

    /// Power-law degrees, P(0) = 0 and P(a) proportional to a^-tau for
    /// a = 1..max_degree. Requires tau > 0. The truncated power sum plays
    /// the role of the zeta-function normalizer.
    static DegreeModel power_law(double tau, int max_degree);

    /// Distribution proportional to the given per-degree counts
    /// (index = degree). Counts beyond max_degree are discarded.
    static DegreeModel empirical(const std::vector<double>& degree_counts, int max_degree);

    DegreeKind kind() const { return kind_; }
    double param() const { return param_; }
    int max_degree() const { return max_degree_; }
    const std::vector<double>& pmf() const { return pmf_; }

    /// s-th moment  sum_a a^s P(a), s >= 1. s = 1 is the mean degree Z.
    double moment(int s) const;
    double mean_degree() const { return moment(1); }

    /// Probability that a random edge end attaches to a degree-b node:
    /// entry b holds b P(b) / Z for b = 0..max_degree (entry 0 is 0).
    /// Throws if Z = 0.
    std::vector<double> edge_end_pmf() const;

    /// Giant-component criterion <K^2>/Z > 2. Throws if Z = 0.
    PhaseTransition phase_transition() const;

    /// Degree generating function G0(x) = sum_a P(a) x^a and its derivative.
    double g0(double x) const;
    double g0_prime(double x) const;

    /// Inverse-CDF degree draw (pinned algorithm, reproducible everywhere).
    int sample(std::mt19937_64& rng) const;

    std::string name() const;

private:
    DegreeModel(DegreeKind kind, double param, int max_degree, std::vector<double> pmf);

    DegreeKind kind_;
    double param_;
    int max_degree_;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

}  // namespace floodnet
