#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "floodnet/analytics.hpp"
#include "floodnet/experiments.hpp"
#include "floodnet/flood_sim.hpp"
#include "floodnet/graph.hpp"
#include "floodnet/rng.hpp"

namespace {

using namespace floodnet;

struct CliArgs {
    std::string config_path;
    std::string model = "poisson";
    std::vector<double> z_values;
    std::vector<double> tau_values;
    long long n = 0;
    std::vector<std::string> rule_names;
    std::vector<double> p_values;
    std::vector<double> alpha_values;
    int graphs = 0;
    long long instances = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    int max_degree = 0;
    unsigned threads = 0;
    bool full_scale = false;
    bool strict = false;
    bool allow_below = false;
    std::string dump_graph;
};

void add_common_options(CLI::App* cmd, CliArgs& args, bool with_grid) {
    cmd->add_option("--config", args.config_path, "JSON config file; flags override its values");
    cmd->add_option("--model", args.model, "degree model family: poisson | power_law")
        ->check(CLI::IsMember({"poisson", "power_law"}));
    if (with_grid) {
        cmd->add_option("--z", args.z_values, "Poisson mean degree grid (repeatable)");
        cmd->add_option("--tau", args.tau_values, "power-law exponent grid (repeatable)");
    } else {
        cmd->add_option("--z", args.z_values, "Poisson mean degree")->expected(1);
        cmd->add_option("--tau", args.tau_values, "power-law exponent")->expected(1);
    }
    cmd->add_option("--n", args.n, "node count");
    cmd->add_option("--rule", args.rule_names,
                    "forwarding rule: uninformed | probabilistic | heuristic (repeatable; "
                    "probabilistic rules consume --p values in order, heuristic --alpha)")
        ->check(CLI::IsMember({"uninformed", "probabilistic", "heuristic"}));
    cmd->add_option("--p", args.p_values, "forwarding probability for probabilistic rules");
    cmd->add_option("--alpha", args.alpha_values, "target reach probability for heuristic rules");
    cmd->add_option("--graphs", args.graphs, "random graphs per grid point");
    cmd->add_option("--instances", args.instances, "flooding instances per graph");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--out", args.out, "output file (default: stdout)");
    cmd->add_option("--format", args.format, "output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--max-degree", args.max_degree, "degree truncation bound (default n-1)");
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
    cmd->add_flag("--full-scale", args.full_scale,
                  "publication-scale protocol: n=10000, 15 (Poisson) or 300 (power-law) "
                  "graphs, 1000 instances");
    cmd->add_flag("--strict", args.strict, "exit nonzero if any grid point fails");
    cmd->add_flag("--allow-below-transition", args.allow_below,
                  "permit grid points without a giant component");
}

std::vector<FloodRule> rules_from_args(const CliArgs& args) {
    std::vector<FloodRule> rules;
    std::size_t pi = 0, ai = 0;
    for (const std::string& name : args.rule_names) {
        if (name == "uninformed") {
            rules.push_back(FloodRule::uninformed());
        } else if (name == "probabilistic") {
            if (pi >= args.p_values.size())
                throw CLI::ValidationError("--rule probabilistic needs a matching --p value");
            rules.push_back(FloodRule::probabilistic(args.p_values[pi++]));
        } else {
            if (ai >= args.alpha_values.size())
                throw CLI::ValidationError("--rule heuristic needs a matching --alpha value");
            rules.push_back(FloodRule::heuristic(args.alpha_values[ai++]));
        }
    }
    if (pi < args.p_values.size() || ai < args.alpha_values.size())
        throw CLI::ValidationError("more --p/--alpha values than matching rules");
    return rules;
}

SweepConfig build_config(const CLI::App* cmd, const CliArgs& args) {
    SweepConfig config;
    if (!args.config_path.empty()) config = load_config_file(args.config_path);

    const auto given = [&](const std::string& flag) { return cmd->count(flag) > 0; };

    if (given("--model"))
        config.family = args.model == "poisson" ? ModelFamily::poisson : ModelFamily::power_law;
    if (args.full_scale) config.apply_full_scale();
    if (given("--z") || given("--tau")) {
        config.grid = config.family == ModelFamily::poisson ? args.z_values : args.tau_values;
        if (config.grid.empty())
            throw CLI::ValidationError(config.family == ModelFamily::poisson
                                           ? "poisson models take --z values"
                                           : "power-law models take --tau values");
    }
    if (given("--n")) config.n = args.n;
    if (given("--rule")) config.rules = rules_from_args(args);
    if (given("--graphs")) config.graphs = args.graphs;
    if (given("--instances")) config.instances = args.instances;
    if (given("--seed")) config.seed = args.seed;
    if (given("--out")) config.out = args.out;
    if (given("--format")) config.format = args.format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (given("--max-degree")) config.max_degree = args.max_degree;
    if (given("--threads")) config.threads = args.threads;
    if (args.allow_below) config.allow_below_transition = true;
    return config;
}

int finish(const std::vector<SweepRow>& rows, const SweepConfig& config, bool strict) {
    write_rows(rows, config);
    bool warned = false;
    nlohmann::json failures = nlohmann::json::array();
    for (const SweepRow& r : rows) {
        if (!r.error.empty())
            failures.push_back({{"family", family_name(r.family)},
                                {"param", r.param},
                                {"rule", r.rule},
                                {"error", r.error}});
        if (!warned && r.family == ModelFamily::power_law && r.rule == "probabilistic" &&
            r.pt_pred) {
            std::cerr << "note: power-law waiting-time predictions use path-length sums "
                         "that do not converge; treat pt_pred as indicative only\n";
            warned = true;
        }
    }
    if (!failures.empty()) {
        std::cerr << nlohmann::json{{"failed_points", failures}}.dump() << '\n';
        if (strict) return 2;
    }
    return 0;
}

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

int run_analyze(const CLI::App* cmd, const CliArgs& args) {
    SweepConfig config = build_config(cmd, args);
    if (config.rules.size() != 1)
        throw CLI::ValidationError("analyze expects exactly one --rule");
    if (config.grid.size() != 1)
        throw CLI::ValidationError("analyze expects exactly one grid point (--z or --tau)");
    const DegreeModel model = config.model_at(config.grid[0]);
    const FloodRule rule = config.rules[0];

    if (config.format == OutputFormat::csv) {
        SweepRow row;
        row.family = config.family;
        row.param = config.grid[0];
        row.rule = rule.name();
        if (rule.kind() != RuleKind::uninformed) row.rule_param = rule.param();
        row.n = config.n;
        row.seed = config.seed;
        const DigraphAnalysis d = analyze_digraph(model, rule, config.n);
        row.pn_pred = d.p_n;
        row.pm_pred = d.p_m;
        row.pt_pred = d.p_t;
        return finish({row}, config, args.strict);
    }

    const GccAnalysis gcc = gcc_analysis(model, config.n);
    const DigraphAnalysis d = analyze_digraph(model, rule, config.n);
    nlohmann::ordered_json j;
    j["family"] = family_name(config.family);
    j["param"] = config.grid[0];
    j["n"] = config.n;
    j["max_degree"] = model.max_degree();
    j["rule"] = rule.name();
    if (rule.kind() != RuleKind::uninformed) j["rule_param"] = rule.param();
    j["gcc"] = {{"q", gcc.q},
                {"theta_g", gcc.theta_g},
                {"z_gcc", opt_json(gcc.z_gcc)},
                {"z2_gcc", opt_json(gcc.z2_gcc)},
                {"l_g", opt_json(gcc.l_g)},
                {"l_gcc", opt_json(gcc.l_gcc)}};
    j["digraph"] = {{"theta_in", d.theta_in},
                    {"theta_out", d.theta_out},
                    {"z_gout", d.z_gout},
                    {"z2_gout", d.z2_gout},
                    {"rho", opt_json(d.rho)},
                    {"l_gout", opt_json(d.l_gout)},
                    {"pn", d.p_n},
                    {"pm", d.p_m},
                    {"pt", opt_json(d.p_t)},
                    {"pt_quality_warning", d.pt_quality_warning}};
    if (d.pt_quality_warning && d.p_t)
        std::cerr << "note: power-law waiting-time predictions use path-length sums that "
                     "do not converge; treat pt as indicative only\n";
    if (config.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream file(config.out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + config.out);
        file << j.dump(2) << '\n';
    }
    return 0;
}

int run_simulate(const CLI::App* cmd, const CliArgs& args) {
    SweepConfig config = build_config(cmd, args);
    config.graphs = 1;
    if (config.rules.size() != 1)
        throw CLI::ValidationError("simulate expects exactly one --rule");
    if (config.grid.size() != 1)
        throw CLI::ValidationError("simulate expects exactly one grid point (--z or --tau)");

    if (!args.dump_graph.empty()) {
        const DegreeModel model = config.model_at(config.grid[0]);
        const std::uint64_t graph_seed = derive_seed(config.seed, 0, 0);
        const Graph graph = config.family == ModelFamily::poisson
                                ? generate_er(static_cast<int>(config.n), config.grid[0], graph_seed)
                                : generate_configuration(static_cast<int>(config.n), model, graph_seed);
        std::ofstream file(args.dump_graph, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open dump file: " + args.dump_graph);
        graph.write_edge_list(file);
    }

    return finish(run_sweep(config), config, args.strict);
}

int run_sweep_cmd(const CLI::App* cmd, const CliArgs& args) {
    const SweepConfig config = build_config(cmd, args);
    return finish(run_sweep(config), config, args.strict);
}

int run_compare_cmd(const CLI::App* cmd, const CliArgs& args) {
    SweepConfig config = build_config(cmd, args);
    if (config.rules.empty()) config.rules = {FloodRule::heuristic(0.99)};
    return finish(run_comparison(config), config, args.strict);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"floodnet: probabilistic flooding on random graphs — Monte Carlo simulation "
                 "and generating-function predictions"};
    app.require_subcommand(1);

    CliArgs analyze_args, simulate_args, sweep_args, compare_args;

    CLI::App* analyze = app.add_subcommand("analyze", "analytical predictions only");
    add_common_options(analyze, analyze_args, false);

    CLI::App* simulate = app.add_subcommand("simulate", "one graph, one rule");
    add_common_options(simulate, simulate_args, false);
    simulate->add_option("--dump-graph", simulate_args.dump_graph,
                         "also write the generated graph as an edge list");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep: simulation + predictions");
    add_common_options(sweep, sweep_args, true);

    CLI::App* compare =
        app.add_subcommand("compare", "heuristic vs reach-calibrated probabilistic flooding");
    add_common_options(compare, compare_args, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(analyze, analyze_args);
        if (simulate->parsed()) return run_simulate(simulate, simulate_args);
        if (sweep->parsed()) return run_sweep_cmd(sweep, sweep_args);
        if (compare->parsed()) return run_compare_cmd(compare, compare_args);
    } catch (const CLI::Error& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
