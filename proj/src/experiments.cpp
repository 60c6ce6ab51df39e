#include "floodnet/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "floodnet/parallel.hpp"
#include "floodnet/rng.hpp"

namespace floodnet {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

std::string fmt_opt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

std::optional<double> rule_param_of(const FloodRule& rule) {
    if (rule.kind() == RuleKind::uninformed) return std::nullopt;
    return rule.param();
}

Graph make_point_graph(const SweepConfig& config, const DegreeModel& model, double param,
                       std::uint64_t seed) {
    if (config.family == ModelFamily::poisson)
        return generate_er(static_cast<int>(config.n), param, seed);
    return generate_configuration(static_cast<int>(config.n), model, seed);
}

struct PointPrediction {
    std::optional<DigraphAnalysis> analysis;
    std::string error;
};

PointPrediction predict_point(const DegreeModel& model, const FloodRule& rule, long long n) {
    PointPrediction p;
    try {
        p.analysis = analyze_digraph(model, rule, n);
    } catch (const std::exception& e) {
        p.error = e.what();
    }
    return p;
}

SweepRow base_row(const SweepConfig& config, double param, const FloodRule& rule) {
    SweepRow row;
    row.family = config.family;
    row.param = param;
    row.rule = rule.name();
    row.rule_param = rule_param_of(rule);
    row.graphs = config.graphs;
    row.instances = config.instances;
    row.n = config.n;
    row.seed = config.seed;
    return row;
}

void fill_simulated(SweepRow& row, const BatchStats& stats) {
    row.pn_sim = stats.pn.mean();
    row.pm_sim = stats.pm.mean();
    row.pn_se = stats.pn.std_error();
    row.pm_se = stats.pm.std_error();
    if (stats.pt.count > 0) {
        row.pt_sim = stats.pt.mean();
        row.pt_se = stats.pt.std_error();
    }
}

void fill_predicted(SweepRow& row, const PointPrediction& pred) {
    if (pred.analysis) {
        row.pn_pred = pred.analysis->p_n;
        row.pm_pred = pred.analysis->p_m;
        row.pt_pred = pred.analysis->p_t;
    } else if (!pred.error.empty()) {
        row.error = row.error.empty() ? pred.error : row.error + "; " + pred.error;
    }
}

}  // namespace

void SweepConfig::apply_full_scale() {
    n = 10000;
    graphs = family == ModelFamily::poisson ? 15 : 300;
    instances = 1000;
}

void SweepConfig::validate() const {
    if (grid.empty()) throw std::invalid_argument("sweep config: empty parameter grid");
    if (graphs < 1) throw std::invalid_argument("sweep config: graphs must be >= 1");
    if (instances < 1) throw std::invalid_argument("sweep config: instances must be >= 1");
    if (n < 2) throw std::invalid_argument("sweep config: n must be >= 2");
    if (rules.empty()) throw std::invalid_argument("sweep config: no rules given");
    if (max_degree && *max_degree < 1)
        throw std::invalid_argument("sweep config: max_degree must be >= 1");
    if (!allow_below_transition) {
        for (double param : grid) {
            const DegreeModel model = model_at(param);
            if (!model.phase_transition().above)
                throw std::invalid_argument(
                    "sweep config: grid point " + fmt(param) +
                    " is not above the phase transition (pass allow_below_transition)");
        }
    }
}

DegreeModel SweepConfig::model_at(double param) const {
    const int d = max_degree ? *max_degree : static_cast<int>(n - 1);
    return family == ModelFamily::poisson ? DegreeModel::poisson(param, d)
                                          : DegreeModel::power_law(param, d);
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    config.validate();
    const std::size_t points = config.grid.size();
    const std::size_t n_rules = config.rules.size();
    const std::size_t per_point = n_rules * config.graphs;

    std::vector<std::optional<DegreeModel>> models(points);
    std::vector<std::string> model_errors(points);
    std::vector<std::vector<PointPrediction>> predictions(points);
    for (std::size_t pi = 0; pi < points; ++pi) {
        try {
            models[pi] = config.model_at(config.grid[pi]);
            predictions[pi].reserve(n_rules);
            for (const FloodRule& rule : config.rules)
                predictions[pi].push_back(predict_point(*models[pi], rule, config.n));
        } catch (const std::exception& e) {
            model_errors[pi] = e.what();
        }
    }

    struct TaskResult {
        BatchStats stats;
        std::string error;
    };
    std::vector<TaskResult> results(points * per_point);

    parallel_for(results.size(), config.threads, [&](std::size_t i) {
        const std::size_t pi = i / per_point;
        const std::size_t ri = (i % per_point) / config.graphs;
        const std::size_t gi = i % config.graphs;
        if (!models[pi]) return;
        try {
            // Graph seeds do not involve the rule, so every rule of a point
            // floods the same graphs, as in the reference protocol.
            const std::uint64_t graph_seed = derive_seed(config.seed, pi, gi);
            const Graph graph =
                make_point_graph(config, *models[pi], config.grid[pi], graph_seed);
            results[i].stats = run_batch(graph, config.rules[ri], config.instances,
                                         derive_seed(graph_seed, ri));
        } catch (const std::exception& e) {
            results[i].error = e.what();
        }
    });

    std::vector<SweepRow> rows;
    rows.reserve(points * n_rules);
    for (std::size_t pi = 0; pi < points; ++pi) {
        for (std::size_t ri = 0; ri < n_rules; ++ri) {
            SweepRow row = base_row(config, config.grid[pi], config.rules[ri]);
            if (!model_errors[pi].empty()) {
                row.error = model_errors[pi];
                rows.push_back(std::move(row));
                continue;
            }
            BatchStats merged;
            std::string task_error;
            for (int gi = 0; gi < config.graphs; ++gi) {
                const TaskResult& r = results[pi * per_point + ri * config.graphs + gi];
                if (!r.error.empty() && task_error.empty()) task_error = r.error;
                merged.merge(r.stats);
            }
            if (!task_error.empty()) {
                row.error = task_error;
            } else {
                fill_simulated(row, merged);
            }
            fill_predicted(row, predictions[pi][ri]);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

double calibrate_p(const DegreeModel& model, double target_pn, double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("calibrate_p: tolerance must be positive");
    if (!(target_pn > 0.0))
        throw std::invalid_argument("calibrate_p: target reach must be positive");
    const double max_pn = predict_pn(model, FloodRule::probabilistic(1.0));
    if (!(target_pn < max_pn))
        throw std::runtime_error("calibrate_p: target reach " + fmt(target_pn) +
                                 " is not below the reach at p = 1 (" + fmt(max_pn) + ")");
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double pn = predict_pn(model, FloodRule::probabilistic(mid));
        if (std::abs(pn - target_pn) < tolerance) return mid;
        if (pn < target_pn)
            lo = mid;
        else
            hi = mid;
    }
    throw std::runtime_error("calibrate_p: bisection did not reach the requested tolerance");
}

std::vector<SweepRow> run_comparison(const SweepConfig& config) {
    config.validate();
    if (config.rules.size() != 1 || config.rules[0].kind() != RuleKind::heuristic)
        throw std::invalid_argument("run_comparison expects exactly one heuristic rule");
    const FloodRule heuristic = config.rules[0];
    const std::size_t points = config.grid.size();

    std::vector<std::optional<DegreeModel>> models(points);
    std::vector<std::string> model_errors(points);
    for (std::size_t pi = 0; pi < points; ++pi) {
        try {
            models[pi] = config.model_at(config.grid[pi]);
        } catch (const std::exception& e) {
            model_errors[pi] = e.what();
        }
    }

    struct TaskResult {
        BatchStats stats;
        std::string error;
    };

    auto run_phase = [&](const std::vector<std::optional<FloodRule>>& point_rules,
                         std::size_t rule_index) {
        std::vector<TaskResult> results(points * config.graphs);
        parallel_for(results.size(), config.threads, [&](std::size_t i) {
            const std::size_t pi = i / config.graphs;
            const std::size_t gi = i % config.graphs;
            if (!models[pi] || !point_rules[pi]) return;
            try {
                const std::uint64_t graph_seed = derive_seed(config.seed, pi, gi);
                const Graph graph =
                    make_point_graph(config, *models[pi], config.grid[pi], graph_seed);
                results[i].stats = run_batch(graph, *point_rules[pi], config.instances,
                                             derive_seed(graph_seed, rule_index));
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        });
        return results;
    };

    auto merge_point = [&](const std::vector<TaskResult>& results, std::size_t pi,
                           BatchStats& merged, std::string& error) {
        for (int gi = 0; gi < config.graphs; ++gi) {
            const TaskResult& r = results[pi * config.graphs + gi];
            if (!r.error.empty() && error.empty()) error = r.error;
            merged.merge(r.stats);
        }
    };

    std::vector<std::optional<FloodRule>> heur_rules(points);
    for (std::size_t pi = 0; pi < points; ++pi)
        if (models[pi]) heur_rules[pi] = heuristic;
    const auto heur_results = run_phase(heur_rules, 0);

    // Calibrate p per point against the pooled simulated heuristic reach.
    std::vector<std::optional<FloodRule>> prob_rules(points);
    std::vector<BatchStats> heur_stats(points);
    std::vector<std::string> sim_errors(points);    // model or batch failures
    std::vector<std::string> calib_errors(points);  // calibration failures
    for (std::size_t pi = 0; pi < points; ++pi) {
        if (!models[pi]) {
            sim_errors[pi] = model_errors[pi];
            continue;
        }
        merge_point(heur_results, pi, heur_stats[pi], sim_errors[pi]);
        if (!sim_errors[pi].empty()) continue;
        try {
            const double p =
                calibrate_p(*models[pi], heur_stats[pi].pn.mean(), 1e-4);
            prob_rules[pi] = FloodRule::probabilistic(p);
        } catch (const std::exception& e) {
            calib_errors[pi] = e.what();
        }
    }

    const auto prob_results = run_phase(prob_rules, 1);

    std::vector<SweepRow> rows;
    rows.reserve(points * 2);
    for (std::size_t pi = 0; pi < points; ++pi) {
        SweepRow heur_row = base_row(config, config.grid[pi], heuristic);
        if (sim_errors[pi].empty()) {
            fill_simulated(heur_row, heur_stats[pi]);
            fill_predicted(heur_row, predict_point(*models[pi], heuristic, config.n));
        } else {
            heur_row.error = sim_errors[pi];
        }
        rows.push_back(std::move(heur_row));

        if (prob_rules[pi]) {
            SweepRow prob_row = base_row(config, config.grid[pi], *prob_rules[pi]);
            BatchStats merged;
            std::string error;
            merge_point(prob_results, pi, merged, error);
            if (error.empty()) {
                fill_simulated(prob_row, merged);
                fill_predicted(prob_row, predict_point(*models[pi], *prob_rules[pi], config.n));
            } else {
                prob_row.error = error;
            }
            rows.push_back(std::move(prob_row));
        } else {
            SweepRow prob_row = base_row(config, config.grid[pi], FloodRule::probabilistic(0.0));
            prob_row.rule_param = std::nullopt;
            prob_row.error = !calib_errors[pi].empty() ? calib_errors[pi] : sim_errors[pi];
            rows.push_back(std::move(prob_row));
        }
    }
    return rows;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << "family,param,rule,rule_param,pn_sim,pn_se,pm_sim,pm_se,pt_sim,pt_se,"
          "pn_pred,pm_pred,pt_pred,graphs,instances,n,seed\n";
    for (const SweepRow& r : rows) {
        os << family_name(r.family) << ',' << fmt(r.param) << ',' << r.rule << ','
           << fmt_opt(r.rule_param) << ',' << fmt_opt(r.pn_sim) << ','
           << (r.pn_sim ? fmt(r.pn_se) : std::string()) << ',' << fmt_opt(r.pm_sim) << ','
           << (r.pm_sim ? fmt(r.pm_se) : std::string()) << ',' << fmt_opt(r.pt_sim) << ','
           << (r.pt_sim ? fmt(r.pt_se) : std::string()) << ',' << fmt_opt(r.pn_pred) << ','
           << fmt_opt(r.pm_pred) << ',' << fmt_opt(r.pt_pred) << ',' << r.graphs << ','
           << r.instances << ',' << r.n << ',' << r.seed << '\n';
    }
}

void write_json(const std::vector<SweepRow>& rows, std::ostream& os) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const SweepRow& r : rows) {
        nlohmann::ordered_json j;
        j["family"] = family_name(r.family);
        j["param"] = r.param;
        j["rule"] = r.rule;
        j["rule_param"] = r.rule_param ? nlohmann::ordered_json(*r.rule_param)
                                       : nlohmann::ordered_json(nullptr);
        auto opt = [](const std::optional<double>& v) {
            return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
        };
        j["pn_sim"] = opt(r.pn_sim);
        j["pn_se"] = r.pn_se;
        j["pm_sim"] = opt(r.pm_sim);
        j["pm_se"] = r.pm_se;
        j["pt_sim"] = opt(r.pt_sim);
        j["pt_se"] = r.pt_se;
        j["pn_pred"] = opt(r.pn_pred);
        j["pm_pred"] = opt(r.pm_pred);
        j["pt_pred"] = opt(r.pt_pred);
        j["graphs"] = r.graphs;
        j["instances"] = r.instances;
        j["n"] = r.n;
        j["seed"] = r.seed;
        if (!r.error.empty()) j["error"] = r.error;
        out.push_back(std::move(j));
    }
    os << out.dump(2) << '\n';
}

void write_rows(const std::vector<SweepRow>& rows, const SweepConfig& config) {
    const auto emit = [&](std::ostream& os) {
        config.format == OutputFormat::csv ? write_csv(rows, os) : write_json(rows, os);
    };
    if (config.out.empty()) {
        emit(std::cout);
    } else {
        std::ofstream file(config.out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + config.out);
        emit(file);
    }
}

SweepConfig load_config_json(std::istream& is) {
    nlohmann::json j;
    is >> j;
    SweepConfig c;
    if (j.contains("family")) {
        const std::string f = j["family"].get<std::string>();
        if (f == "poisson")
            c.family = ModelFamily::poisson;
        else if (f == "power_law")
            c.family = ModelFamily::power_law;
        else
            throw std::invalid_argument("config: unknown family '" + f + "'");
    }
    if (j.contains("grid")) c.grid = j["grid"].get<std::vector<double>>();
    if (j.contains("n")) c.n = j["n"].get<long long>();
    if (j.contains("rules")) {
        for (const auto& rj : j["rules"]) {
            const std::string kind = rj.at("kind").get<std::string>();
            if (kind == "uninformed")
                c.rules.push_back(FloodRule::uninformed());
            else if (kind == "probabilistic")
                c.rules.push_back(FloodRule::probabilistic(rj.at("p").get<double>()));
            else if (kind == "heuristic")
                c.rules.push_back(FloodRule::heuristic(rj.at("alpha").get<double>()));
            else
                throw std::invalid_argument("config: unknown rule kind '" + kind + "'");
        }
    }
    if (j.contains("graphs")) c.graphs = j["graphs"].get<int>();
    if (j.contains("instances")) c.instances = j["instances"].get<long long>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) {
        const std::string f = j["format"].get<std::string>();
        if (f == "csv")
            c.format = OutputFormat::csv;
        else if (f == "json")
            c.format = OutputFormat::json;
        else
            throw std::invalid_argument("config: unknown format '" + f + "'");
    }
    if (j.contains("max_degree") && !j["max_degree"].is_null())
        c.max_degree = j["max_degree"].get<int>();
    if (j.contains("allow_below_transition"))
        c.allow_below_transition = j["allow_below_transition"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    return c;
}

SweepConfig load_config_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open config file: " + path);
    return load_config_json(file);
}

std::string family_name(ModelFamily family) {
    return family == ModelFamily::poisson ? "poisson" : "power_law";
}

}  // namespace floodnet
