#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "floodnet/analytics.hpp"
#include "floodnet/degree_model.hpp"
#include "floodnet/flood_rule.hpp"
#include "floodnet/flood_sim.hpp"

namespace floodnet {

enum class ModelFamily { poisson, power_law };
enum class OutputFormat { csv, json };

/// A parameter sweep: one Monte Carlo + analytics evaluation per grid
/// point and rule. Desk-scale defaults keep a full sweep in the minutes
/// range; apply_full_scale() switches to the publication-scale protocol.
struct SweepConfig {
    ModelFamily family = ModelFamily::poisson;
    std::vector<double> grid;       // z values (poisson) or tau values (power law)
    long long n = 2000;
    std::vector<FloodRule> rules;
    int graphs = 5;
    long long instances = 200;
    std::uint64_t seed = 1;
    std::string out;                // output path; empty = stdout
    OutputFormat format = OutputFormat::csv;
    std::optional<int> max_degree;  // degree-sum truncation; default n-1
    bool allow_below_transition = false;
    unsigned threads = 0;           // 0 = hardware concurrency

    void apply_full_scale();
    void validate() const;
    DegreeModel model_at(double param) const;
};

/// One output row: simulated and predicted ratios for a (point, rule) pair.
/// Unset optionals serialize as empty fields; a nonempty error marks a
/// failed point whose statistics are absent.
struct SweepRow {
    ModelFamily family = ModelFamily::poisson;
    double param = 0.0;
    std::string rule;
    std::optional<double> rule_param;
    std::optional<double> pn_sim, pm_sim, pt_sim;
    double pn_se = 0.0, pm_se = 0.0, pt_se = 0.0;
    std::optional<double> pn_pred, pm_pred, pt_pred;
    int graphs = 0;
    long long instances = 0;
    long long n = 0;
    std::uint64_t seed = 0;
    std::string error;
};

/// Runs the configured sweep: per grid point, `graphs` random graphs are
/// generated from seeds derived as (seed, point, graph) and every rule is
/// simulated on the same graphs; samples are pooled over all
/// graph x instance pairs. Rows come out in grid order, rules inner.
/// Generation failures abort only their point (recorded on its rows).
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Inverts the analytical reach prediction: the p for which probabilistic
/// flooding reaches the target fraction, found by bisection (the reach
/// prediction is nondecreasing in p). Throws if the target is not strictly
/// between 0 and the reach at p = 1.
double calibrate_p(const DegreeModel& model, double target_pn, double tolerance);

/// Heuristic-vs-probabilistic comparison: per grid point, simulates the
/// heuristic rule from the config (exactly one rule, heuristic), calibrates
/// p to its simulated reach, simulates probabilistic flooding at that p on
/// the same graphs, and emits the row pair. Calibration failures are
/// recorded per point.
std::vector<SweepRow> run_comparison(const SweepConfig& config);

void write_csv(const std::vector<SweepRow>& rows, std::ostream& os);
void write_json(const std::vector<SweepRow>& rows, std::ostream& os);
void write_rows(const std::vector<SweepRow>& rows, const SweepConfig& config);

/// Loads a JSON config that mirrors SweepConfig field for field.
SweepConfig load_config_json(std::istream& is);
SweepConfig load_config_file(const std::string& path);

std::string family_name(ModelFamily family);

}  // namespace floodnet
