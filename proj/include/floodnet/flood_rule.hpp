#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace floodnet {

enum class RuleKind { uninformed, probabilistic, heuristic };

/// Forwarding policy: the probability that a node of degree a forwards a
/// first-received message over an edge whose far end has degree b.
/// All shipped rules are symmetric in (a, b) and depend on the degrees
/// only through min{a, b}.
class FloodRule {
public:
    static FloodRule uninformed() { return FloodRule(RuleKind::uninformed, 1.0); }

    static FloodRule probabilistic(double p) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("forwarding probability p must lie in [0, 1]");
        return FloodRule(RuleKind::probabilistic, p);
    }

    /// alpha is the target probability that a node receives the message.
    /// alpha = 1 is excluded; uninformed flooding covers that case.
    static FloodRule heuristic(double alpha) {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("heuristic target alpha must lie in (0, 1)");
        return FloodRule(RuleKind::heuristic, alpha);
    }

    RuleKind kind() const { return kind_; }

    /// p for probabilistic, alpha for heuristic, 1 for uninformed.
    double param() const { return param_; }

    /// f(a, b) for degrees a, b >= 1. Degree-0 arguments are a contract
    /// violation (an isolated node never forwards) and throw.
    double forward_probability(int a, int b) const {
        if (a < 1 || b < 1)
            throw std::invalid_argument("forward_probability requires degrees >= 1");
        switch (kind_) {
            case RuleKind::uninformed:
                return 1.0;
            case RuleKind::probabilistic:
                return param_;
            case RuleKind::heuristic: {
                const int m = a < b ? a : b;
                if (m == 1) return 1.0;  // h collapses exactly to 1
                return (1.0 - std::pow(1.0 - param_, 1.0 / m)) / param_;
            }
        }
        return 0.0;  // unreachable
    }

    /// forward_probability as a function of min{a, b}: entry m holds
    /// f(a, b) for any degrees with min{a, b} = m (entry 0 is unused).
    std::vector<double> forward_profile(int max_degree) const {
        std::vector<double> phi(max_degree + 1, 0.0);
        for (int m = 1; m <= max_degree; ++m) phi[m] = forward_probability(m, m);
        return phi;
    }

    std::string name() const {
        switch (kind_) {
            case RuleKind::uninformed: return "uninformed";
            case RuleKind::probabilistic: return "probabilistic";
            case RuleKind::heuristic: return "heuristic";
        }
        return "unknown";
    }

    bool operator==(const FloodRule& other) const {
        return kind_ == other.kind_ && param_ == other.param_;
    }

private:
    FloodRule(RuleKind kind, double param) : kind_(kind), param_(param) {}

    RuleKind kind_;
    double param_;
};

}  // namespace floodnet
