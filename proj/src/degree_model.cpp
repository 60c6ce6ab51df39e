#include "floodnet/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "floodnet/rng.hpp"

namespace floodnet {

namespace {

std::vector<double> normalized(std::vector<double> weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0))
        throw std::invalid_argument("degree distribution has zero total mass");
    for (double& w : weights) w /= total;
    return weights;
}

}  // namespace

DegreeModel::DegreeModel(DegreeKind kind, double param, int max_degree, std::vector<double> pmf)
    : kind_(kind), param_(param), max_degree_(max_degree), pmf_(std::move(pmf)) {
    cdf_.resize(pmf_.size());
    double acc = 0.0;
    for (std::size_t a = 0; a < pmf_.size(); ++a) {
        acc += pmf_[a];
        cdf_[a] = acc;
    }
    cdf_.back() = 1.0;
}

DegreeModel DegreeModel::poisson(double z, int max_degree) {
    if (!(z > 0.0))
        throw std::invalid_argument("poisson mean degree z must be positive");
    if (max_degree < 1)
        throw std::invalid_argument("max_degree must be at least 1");
    std::vector<double> w(max_degree + 1);
    for (int a = 0; a <= max_degree; ++a)
        w[a] = std::exp(a * std::log(z) - z - std::lgamma(a + 1.0));
    return DegreeModel(DegreeKind::poisson, z, max_degree, normalized(std::move(w)));
}

DegreeModel DegreeModel::power_law(double tau, int max_degree) {
    if (!(tau > 0.0))
        throw std::invalid_argument("power-law exponent tau must be positive");
    if (max_degree < 1)
        throw std::invalid_argument("max_degree must be at least 1");
    std::vector<double> w(max_degree + 1, 0.0);
    for (int a = 1; a <= max_degree; ++a)
        w[a] = std::pow(static_cast<double>(a), -tau);
    return DegreeModel(DegreeKind::power_law, tau, max_degree, normalized(std::move(w)));
}

DegreeModel DegreeModel::empirical(const std::vector<double>& degree_counts, int max_degree) {
    if (max_degree < 1)
        throw std::invalid_argument("max_degree must be at least 1");
    std::vector<double> w(max_degree + 1, 0.0);
    for (std::size_t a = 0; a < degree_counts.size() && a <= static_cast<std::size_t>(max_degree); ++a) {
        if (degree_counts[a] < 0.0)
            throw std::invalid_argument("degree counts must be nonnegative");
        w[a] = degree_counts[a];
    }
    return DegreeModel(DegreeKind::empirical, 0.0, max_degree, normalized(std::move(w)));
}

double DegreeModel::moment(int s) const {
    if (s < 1) throw std::invalid_argument("moment order must be >= 1");
    double total = 0.0;
    for (int a = 1; a <= max_degree_; ++a)
        total += std::pow(static_cast<double>(a), s) * pmf_[a];
    return total;
}

std::vector<double> DegreeModel::edge_end_pmf() const {
    const double z = mean_degree();
    if (!(z > 0.0))
        throw std::invalid_argument("edge-end distribution undefined: mean degree is zero");
    std::vector<double> e(pmf_.size(), 0.0);
    for (int b = 1; b <= max_degree_; ++b)
        e[b] = b * pmf_[b] / z;
    return e;
}

PhaseTransition DegreeModel::phase_transition() const {
    const double z = mean_degree();
    if (!(z > 0.0))
        throw std::invalid_argument("phase-transition criterion undefined: mean degree is zero");
    const double ratio = moment(2) / z;
    return PhaseTransition{ratio, ratio > 2.0};
}

double DegreeModel::g0(double x) const {
    double total = 0.0;
    double xa = 1.0;  // x^a
    for (int a = 0; a <= max_degree_; ++a) {
        total += pmf_[a] * xa;
        xa *= x;
    }
    return total;
}

double DegreeModel::g0_prime(double x) const {
    double total = 0.0;
    double xa = 1.0;  // x^(a-1)
    for (int a = 1; a <= max_degree_; ++a) {
        total += a * pmf_[a] * xa;
        xa *= x;
    }
    return total;
}

int DegreeModel::sample(std::mt19937_64& rng) const {
    const double u = unit_double(rng());
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), max_degree_));
}

std::string DegreeModel::name() const {
    switch (kind_) {
        case DegreeKind::poisson: return "poisson";
        case DegreeKind::power_law: return "power_law";
        case DegreeKind::empirical: return "empirical";
    }
    return "unknown";
}

}  // namespace floodnet
