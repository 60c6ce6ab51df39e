#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "floodnet/degree_model.hpp"
#include "floodnet/flood_rule.hpp"

namespace floodnet {

/// Percolation quantities of the undirected graph: the fixed point q of the
/// edge-following generating function, the giant-component fraction, the
/// expected degree and 2-neighbor count inside the giant component, and the
/// expected path lengths. Path lengths (and the GCC-conditioned means when
/// no giant component exists) are absent when their formulas leave the log
/// domain, which happens at or below the phase transition.
struct GccAnalysis {
    double q = 1.0;
    double theta_g = 0.0;
    std::optional<double> z_gcc;
    std::optional<double> z2_gcc;
    std::optional<double> l_g;
    std::optional<double> l_gcc;
    long long n = 0;
};

GccAnalysis gcc_analysis(const DegreeModel& model, long long n);

/// Which membership the dead-end system describes: `out` solves descent
/// probabilities (GIN side), `in` solves ancestry probabilities (GOUT side).
/// The two systems differ only by swapping the forwarding-probability
/// arguments, so they coincide for the symmetric rules shipped here.
enum class Direction { out, in };

/// Solves q_b = (sum_c [1 - f(b,c) + f(b,c) q_c] c P(c)/Z)^(b-1) for
/// b = 1..D by fixed-point iteration from all zeros (the smallest root).
/// Entry b of the result is q_b; entry 0 is unused and set to 1.
/// Max-norm residual below 1e-12 on return; throws on non-convergence.
std::vector<double> solve_dead_end_probs(const DegreeModel& model, const FloodRule& rule,
                                         Direction direction);

/// Fractions of nodes in the giant in- and out-components of the flooding
/// digraph, as (theta_in, theta_out).
std::pair<double, double> giant_fractions(const DegreeModel& model, const FloodRule& rule);

/// Predicted reach probability theta_in * theta_out / theta_g^2.
double predict_pn(const DegreeModel& model, const FloodRule& rule);

/// Predicted message ratio z_gout * P_n / z_gcc; 0 when the giant
/// out-component does not exist.
double predict_pm(const DegreeModel& model, const FloodRule& rule);

/// Predicted waiting-time ratio theta_in * L_gout / (theta_g * L_gcc).
/// The directed path length L_gout uses the geometric-progression form for
/// constant rules (uninformed, probabilistic) and the edge-following
/// branching factor rho for the heuristic rule on Poisson models; the
/// heuristic rule on other models has no analytical route and yields
/// nullopt. Log-domain failures (no giant out-component, branching <= 1)
/// throw rather than clamp.
std::optional<double> predict_pt(const DegreeModel& model, const FloodRule& rule, long long n);

/// Everything the flooding-digraph analysis produces for one (model, rule)
/// pair. p_t is absent when analytically unsupported or when the digraph is
/// below its phase transition; pt_quality_warning marks the probabilistic
/// power-law case whose path-length inputs are known not to converge.
struct DigraphAnalysis {
    std::vector<double> q_out;
    std::vector<double> q_in;
    double theta_in = 0.0;
    double theta_out = 0.0;
    std::vector<double> h_minus;
    double z_gout = 0.0;
    double z2_gout = 0.0;
    std::optional<double> rho;
    std::optional<double> l_gout;
    double p_n = 0.0;
    double p_m = 0.0;
    std::optional<double> p_t;
    bool pt_quality_warning = false;
};

DigraphAnalysis analyze_digraph(const DegreeModel& model, const FloodRule& rule, long long n);

}  // namespace floodnet
