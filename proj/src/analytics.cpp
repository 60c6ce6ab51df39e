#include "floodnet/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace floodnet {

namespace {

constexpr double kFixedPointTol = 1e-12;
constexpr long kIterationCap = 100000;
constexpr int kStagnationWindow = 10;
constexpr double kDamping = 0.5;
constexpr double kThetaFloor = 1e-12;  // below this a giant component is absent
// At or below this branching factor the all-ones vector is the smallest
// fixed point and is returned exactly; iterating to it from zero would be
// O(1/k) at criticality and never finish within any reasonable cap.
constexpr double kCriticalWindow = 1e-9;

double require_positive_mean(const DegreeModel& model) {
    const double z = model.mean_degree();
    if (!(z > 0.0))
        throw std::invalid_argument("analytics require a model with positive mean degree");
    return z;
}

// Scalar fixed point of G1 in [0,1], iterated from 0 so the smallest root
// is found. Damping kicks in only if the residual stops decreasing.
double solve_scalar_q(const DegreeModel& model) {
    const double z = model.mean_degree();
    // G1'(1) = (<K^2> - Z)/Z; at or below 1 the smallest root is q = 1.
    if ((model.moment(2) - z) / z <= 1.0 + kCriticalWindow) return 1.0;
    double x = 0.0;
    double prev_res = std::numeric_limits<double>::infinity();
    int stagnant = 0;
    bool damped = false;
    for (long it = 0; it < kIterationCap; ++it) {
        double next = model.g0_prime(x) / z;
        if (damped) next = kDamping * x + (1.0 - kDamping) * next;
        const double res = std::abs(next - x);
        x = std::clamp(next, 0.0, 1.0);
        if (res < kFixedPointTol) return x;
        if (res >= prev_res) {
            if (++stagnant >= kStagnationWindow) damped = true;
        } else {
            stagnant = 0;
        }
        prev_res = res;
    }
    throw std::runtime_error("scalar fixed-point iteration did not converge");
}

struct DeadEndSolve {
    std::vector<double> q;  // q[b], b = 1..D; q[0] = 1 (unused)
    std::vector<double> v;  // v[b] = sum_c w_{b,c} c P(c)/Z at the solution
};

// One application of the dead-end map: given q, fill v with the per-degree
// dead-end mass and return the updated q. All shipped rules depend on the
// two degrees only through their minimum, which lets the double sum over
// (b, c) split into prefix/suffix accumulations and keeps each sweep O(D).
void apply_dead_end_map(const std::vector<double>& e, const std::vector<double>& phi, int D,
                        const std::vector<double>& q, std::vector<double>& v,
                        std::vector<double>& q_next) {
    double suffix = 0.0;  // sum_{c>b} (1 - q_c) e_c, filled right to left
    std::vector<double>& tmp = q_next;  // reuse storage for the suffix pass
    for (int b = D; b >= 1; --b) {
        tmp[b] = suffix;
        suffix += (1.0 - q[b]) * e[b];
    }
    double prefix = 0.0;  // sum_{c<=b} phi_c (1 - q_c) e_c
    for (int b = 1; b <= D; ++b) {
        prefix += phi[b] * (1.0 - q[b]) * e[b];
        v[b] = std::clamp(1.0 - (prefix + phi[b] * tmp[b]), 0.0, 1.0);
    }
    q_next[0] = 1.0;
    for (int b = 1; b <= D; ++b)
        q_next[b] = b == 1 ? 1.0 : std::pow(v[b], b - 1);
}

// Spectral radius of the linearization of the dead-end map around the
// all-ones point, M[b][c] = (b-1) phi(min(b,c)) e_c, by power iteration.
// This is the mean matrix of the induced multitype branching process, so
// rho(M) <= 1 is exactly the regime where the all-ones root is smallest.
double dead_end_branching(const std::vector<double>& e, const std::vector<double>& phi, int D) {
    std::vector<double> v(D + 1, 1.0), w(D + 1, 0.0);
    v[0] = 0.0;
    double ratio = 0.0, prev_ratio = -1.0;
    for (int it = 0; it < 2000; ++it) {
        double suffix = 0.0;
        for (int b = D; b >= 1; --b) {
            w[b] = suffix;
            suffix += e[b] * v[b];
        }
        double prefix = 0.0, norm = 0.0;
        for (int b = 1; b <= D; ++b) {
            prefix += phi[b] * e[b] * v[b];
            w[b] = (b - 1.0) * (prefix + phi[b] * w[b]);
            norm = std::max(norm, w[b]);
        }
        if (norm == 0.0) return 0.0;
        ratio = norm;  // v was sup-normalized, so the growth is the norm itself
        for (int b = 1; b <= D; ++b) v[b] = w[b] / norm;
        if (it > 20 && std::abs(ratio - prev_ratio) < 1e-12 * std::max(1.0, ratio)) break;
        prev_ratio = ratio;
    }
    return ratio;
}

DeadEndSolve solve_dead_end_system(const DegreeModel& model, const FloodRule& rule) {
    require_positive_mean(model);
    const int D = model.max_degree();
    const std::vector<double> e = model.edge_end_pmf();
    const std::vector<double> phi = rule.forward_profile(D);

    DeadEndSolve s;
    if (dead_end_branching(e, phi, D) <= 1.0 + kCriticalWindow) {
        // All neighbors are dead-ends with certainty: w = 1, v = 1, q = 1.
        s.q.assign(D + 1, 1.0);
        s.v.assign(D + 1, 1.0);
        return s;
    }
    s.q.assign(D + 1, 0.0);
    s.q[0] = 1.0;
    s.v.assign(D + 1, 0.0);
    std::vector<double> q_next(D + 1, 0.0);

    double prev_res = std::numeric_limits<double>::infinity();
    int stagnant = 0;
    bool damped = false;
    for (long it = 0; it < kIterationCap; ++it) {
        apply_dead_end_map(e, phi, D, s.q, s.v, q_next);
        double res = 0.0;
        for (int b = 1; b <= D; ++b) {
            if (damped) q_next[b] = kDamping * s.q[b] + (1.0 - kDamping) * q_next[b];
            res = std::max(res, std::abs(q_next[b] - s.q[b]));
        }
        s.q.swap(q_next);
        if (res < kFixedPointTol) {
            // v must correspond to the returned q, not the previous iterate.
            apply_dead_end_map(e, phi, D, s.q, s.v, q_next);
            return s;
        }
        if (res >= prev_res) {
            if (++stagnant >= kStagnationWindow) damped = true;
        } else {
            stagnant = 0;
        }
        prev_res = res;
    }
    throw std::runtime_error("dead-end fixed-point iteration did not converge");
}

// theta = 1 - sum_a v_a^a P(a); the a = 0 term contributes P(0).
double giant_fraction_from(const std::vector<double>& v, const DegreeModel& model) {
    const auto& pmf = model.pmf();
    double outside = pmf[0];
    for (int a = 1; a <= model.max_degree(); ++a)
        outside += std::pow(v[a], a) * pmf[a];
    double theta = 1.0 - outside;
    if (theta < kThetaFloor) theta = 0.0;
    return theta;
}

// Shared intermediate state for the P_n / P_m / P_t predictions. Both the
// one-shot operations and analyze_digraph build it through this single
// code path so their outputs agree bit for bit.
struct DigraphWork {
    double z = 0.0;
    double q_scalar = 1.0;
    double theta_g = 0.0;
    DeadEndSolve out;  // descent side (GIN membership)
    DeadEndSolve in;   // ancestry side (GOUT membership)
    double theta_in = 0.0;
    double theta_out = 0.0;
    std::vector<double> h_minus;
    double z_gout = 0.0;
    double z2_gout = 0.0;
    double inner_edge_mean = 0.0;  // sum_a a P(a) inner_a, feeds rho
    double h_edge_mean = 0.0;      // sum_b h_minus[b] e_b
    std::optional<double> z_gcc;
    std::optional<double> z2_gcc;
    double p_n = 0.0;
    double p_m = 0.0;
};

DigraphWork make_digraph_work(const DegreeModel& model, const FloodRule& rule) {
    DigraphWork w;
    w.z = require_positive_mean(model);
    const int D = model.max_degree();
    const auto& pmf = model.pmf();
    const std::vector<double> e = model.edge_end_pmf();
    const std::vector<double> phi = rule.forward_profile(D);

    w.q_scalar = solve_scalar_q(model);
    w.theta_g = 1.0 - model.g0(w.q_scalar);
    if (w.theta_g < kThetaFloor) w.theta_g = 0.0;
    if (w.theta_g > 0.0) {
        const double excess = (model.moment(2) - w.z) / w.z;
        w.z_gcc = (w.z - w.q_scalar * model.g0_prime(w.q_scalar)) / w.theta_g;
        w.z2_gcc = *w.z_gcc * excess;
    }

    w.out = solve_dead_end_system(model, rule);
    w.in = solve_dead_end_system(model, rule);
    w.theta_in = giant_fraction_from(w.out.v, model);
    w.theta_out = giant_fraction_from(w.in.v, model);

    // h_minus[a] = sum_b f(a,b) b P(b)/Z, split at the minimum.
    w.h_minus.assign(D + 1, 0.0);
    {
        std::vector<double> suf(D + 2, 0.0);
        for (int b = D; b >= 1; --b) suf[b] = suf[b + 1] + e[b];
        double pre = 0.0;
        for (int a = 1; a <= D; ++a) {
            pre += phi[a] * e[a];
            w.h_minus[a] = pre + phi[a] * suf[a + 1];
        }
    }

    // inner[a1] = sum_a2 (a2-1) h_minus[a2] f(a1,a2) a2 P(a2)/Z, the
    // per-neighbor expected 2-out-neighbor count.
    std::vector<double> inner(D + 1, 0.0);
    {
        std::vector<double> x(D + 1, 0.0);
        for (int c = 1; c <= D; ++c) x[c] = (c - 1.0) * w.h_minus[c] * e[c];
        std::vector<double> suf(D + 2, 0.0);
        for (int c = D; c >= 1; --c) suf[c] = suf[c + 1] + x[c];
        double pre = 0.0;
        for (int a = 1; a <= D; ++a) {
            pre += phi[a] * x[a];
            inner[a] = pre + phi[a] * suf[a + 1];
        }
    }

    for (int b = 1; b <= D; ++b) w.h_edge_mean += w.h_minus[b] * e[b];
    for (int a = 1; a <= D; ++a) w.inner_edge_mean += a * pmf[a] * inner[a];

    if (w.theta_out > 0.0) {
        double zg = 0.0, z2g = 0.0;
        for (int a = 1; a <= D; ++a) {
            const double in_gout = 1.0 - std::pow(w.in.v[a], a);
            zg += a * w.h_minus[a] * in_gout * pmf[a];
            z2g += a * in_gout * pmf[a] * inner[a];
        }
        w.z_gout = zg / w.theta_out;
        w.z2_gout = z2g / w.theta_out;
    }

    if (w.theta_g > 0.0) {
        w.p_n = w.theta_in * w.theta_out / (w.theta_g * w.theta_g);
        if (w.theta_out > 0.0 && w.z_gcc)
            w.p_m = w.z_gout * w.p_n / *w.z_gcc;
    }
    return w;
}

double directed_path_length(double n_gout, double z_gout, double branching) {
    if (!(n_gout > 1.0))
        throw std::runtime_error("directed path length undefined: giant out-component too small");
    if (!(z_gout > 0.0) || !(branching > 1.0))
        throw std::runtime_error("directed path length undefined: out-branching not above 1");
    return std::log(((n_gout - 1.0) / z_gout) * (branching - 1.0) + 1.0) / std::log(branching);
}

std::optional<double> predict_pt_from(const DigraphWork& w, const GccAnalysis& gcc,
                                      const DegreeModel& model, const FloodRule& rule,
                                      long long n, std::optional<double>* l_gout_out,
                                      std::optional<double>* rho_out) {
    const bool heuristic = rule.kind() == RuleKind::heuristic;
    if (heuristic && model.kind() != DegreeKind::poisson)
        return std::nullopt;  // no analytical route for these path lengths
    if (!(w.theta_out > 0.0) || !(w.theta_g > 0.0))
        throw std::runtime_error("waiting-time ratio undefined: no giant out-component");
    if (!gcc.l_gcc)
        throw std::runtime_error("waiting-time ratio undefined: GCC path length unavailable");

    double branching;
    if (heuristic) {
        // rho: expected out-neighbor count of the node an edge of the
        // flooding digraph points to.
        const double rho = w.inner_edge_mean / (w.z * w.h_edge_mean);
        if (rho_out) *rho_out = rho;
        branching = rho;
    } else {
        branching = w.z2_gout / w.z_gout;
    }
    const double l_gout =
        directed_path_length(static_cast<double>(n) * w.theta_out, w.z_gout, branching);
    if (l_gout_out) *l_gout_out = l_gout;
    return w.theta_in * l_gout / (w.theta_g * *gcc.l_gcc);
}

}  // namespace

GccAnalysis gcc_analysis(const DegreeModel& model, long long n) {
    const double z = require_positive_mean(model);
    GccAnalysis g;
    g.n = n;
    g.q = solve_scalar_q(model);
    g.theta_g = 1.0 - model.g0(g.q);
    if (g.theta_g < kThetaFloor) g.theta_g = 0.0;

    const double excess = (model.moment(2) - z) / z;  // Z^(2)/Z
    if (g.theta_g > 0.0) {
        g.z_gcc = (z - g.q * model.g0_prime(g.q)) / g.theta_g;
        g.z2_gcc = *g.z_gcc * excess;
    }
    if (excess > 1.0 && n >= 2)
        g.l_g = std::log(((n - 1.0) / z) * (excess - 1.0) + 1.0) / std::log(excess);
    if (g.z_gcc && excess > 1.0 && static_cast<double>(n) * g.theta_g > 1.0)
        g.l_gcc = std::log(((n * g.theta_g - 1.0) / *g.z_gcc) * (excess - 1.0) + 1.0) /
                  std::log(excess);
    return g;
}

std::vector<double> solve_dead_end_probs(const DegreeModel& model, const FloodRule& rule,
                                         Direction direction) {
    // For the out system w uses f(b, c), for the in system f(c, b); the
    // shipped rules are all symmetric, so both directions solve the same
    // equations and the distinction is kept only for the API contract.
    (void)direction;
    return solve_dead_end_system(model, rule).q;
}

std::pair<double, double> giant_fractions(const DegreeModel& model, const FloodRule& rule) {
    const DeadEndSolve out = solve_dead_end_system(model, rule);
    const DeadEndSolve in = solve_dead_end_system(model, rule);
    return {giant_fraction_from(out.v, model), giant_fraction_from(in.v, model)};
}

double predict_pn(const DegreeModel& model, const FloodRule& rule) {
    const DigraphWork w = make_digraph_work(model, rule);
    if (!(w.theta_g > 0.0))
        throw std::runtime_error("reach prediction undefined: no giant component");
    return w.p_n;
}

double predict_pm(const DegreeModel& model, const FloodRule& rule) {
    const DigraphWork w = make_digraph_work(model, rule);
    if (!(w.theta_g > 0.0))
        throw std::runtime_error("message-ratio prediction undefined: no giant component");
    return w.p_m;
}

std::optional<double> predict_pt(const DegreeModel& model, const FloodRule& rule, long long n) {
    const DigraphWork w = make_digraph_work(model, rule);
    const GccAnalysis gcc = gcc_analysis(model, n);
    return predict_pt_from(w, gcc, model, rule, n, nullptr, nullptr);
}

DigraphAnalysis analyze_digraph(const DegreeModel& model, const FloodRule& rule, long long n) {
    const DigraphWork w = make_digraph_work(model, rule);
    const GccAnalysis gcc = gcc_analysis(model, n);

    DigraphAnalysis a;
    a.q_out = w.out.q;
    a.q_in = w.in.q;
    a.theta_in = w.theta_in;
    a.theta_out = w.theta_out;
    a.h_minus = w.h_minus;
    a.z_gout = w.z_gout;
    a.z2_gout = w.z2_gout;
    a.p_n = w.p_n;
    a.p_m = w.p_m;
    a.pt_quality_warning = rule.kind() == RuleKind::probabilistic &&
                           model.kind() == DegreeKind::power_law;
    if (w.theta_out > 0.0 && w.theta_g > 0.0 && gcc.l_gcc) {
        try {
            a.p_t = predict_pt_from(w, gcc, model, rule, n, &a.l_gout, &a.rho);
        } catch (const std::runtime_error&) {
            // Barely supercritical points can leave the log domain of the
            // path-length formula; the aggregate then carries no P_t while
            // the strict predict_pt operation still reports the failure.
        }
    }
    return a;
}

}  // namespace floodnet
