// partpower: sample-size planning and coverage simulation for K-armed
// experiments analysed per leaf of a feature-space partition.
//
// Exit codes: 0 success (including infeasible inversions), 2 usage or
// validation error, 3 estimation error at run time.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "partpower/budget.hpp"
#include "partpower/errors.hpp"
#include "partpower/io.hpp"
#include "partpower/learner.hpp"
#include "partpower/planning.hpp"
#include "partpower/simulator.hpp"
#include "partpower/variance_bounds.hpp"

namespace {

using namespace partpower;

constexpr int kUsage = 2;
constexpr int kEstimation = 3;

// Human-readable number, six significant digits.
std::string human(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct DesignFlags {
    std::int64_t arms = 2;
    std::int64_t leaves = 1;
    double alpha = 0.1;
    double epsilon = 0.1;
    std::string method = "clt";
    std::string scope = "random";
    std::string clt_variant = "two-sided";
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<double> sigma_sq;
    double honest_fraction = 0.5;

    void attach(CLI::App* app) {
        app->add_option("--arms", arms, "Number of treatment arms K");
        app->add_option("--leaves", leaves, "Number of partition leaves L");
        app->add_option("--alpha", alpha, "Miscoverage level alpha (confidence 1-alpha)");
        app->add_option("--epsilon", epsilon, "Margin of error in outcome units");
        app->add_option("--method", method, "clt | hoeffding | bennett");
        app->add_option("--scope", scope, "random | uniform");
        app->add_option("--clt-variant", clt_variant, "two-sided | one-sided");
        app->add_option("--lo", lo, "Outcome lower bound a");
        app->add_option("--hi", hi, "Outcome upper bound b");
        app->add_option("--sigma-sq", sigma_sq, "Bound on the conditional outcome variance");
        app->add_option("--honest-fraction", honest_fraction, "Share of the sample held out for honest estimation");
    }

    PlanningSpec spec() const {
        PlanningSpec s;
        s.arms = arms;
        s.leaves = leaves;
        s.alpha = alpha;
        s.epsilon = epsilon;
        s.method.kind = io::parse_method(method);
        s.method.clt_variant = io::parse_clt_variant(clt_variant);
        s.scope = io::parse_scope(scope);
        if (lo || hi) {
            if (!lo || !hi) throw ConfigError("outcome bounds need both --lo and --hi");
            s.bounds = OutcomeBounds{*lo, *hi};
        }
        s.sigma_sq = sigma_sq;
        s.honest_fraction = honest_fraction;
        return s;
    }
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw ConfigError(std::string(what) + ": '" + item + "' is not a number");
        }
        values.push_back(v);
    }
    return values;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

struct PlanCmd {
    DesignFlags design;
    std::string curve;
    std::string out;
    std::string format = "table";

    int run() const {
        const PlanningSpec spec = design.spec();
        if (!curve.empty()) {
            const auto grid = parse_list(curve, "--curve");
            const auto points = power_curve(spec, grid);
            if (out.empty()) {
                io::write_curve_csv(std::cout, points);
            } else {
                auto file = open_out(out);
                io::write_curve_csv(file, points);
            }
            return 0;
        }
        const CellRequirement req = required_cell_size(spec);
        if (format == "csv") {
            std::cout << "min_cell_size,total_experiment_size,exponent,raw_bound\n"
                      << req.min_cell_size << ',' << req.total_experiment_size << ','
                      << io::format_double(req.exponent_used) << ',' << io::format_double(req.raw_bound) << '\n';
        } else {
            std::cout << "min_cell_size " << req.min_cell_size << '\n'
                      << "total_experiment_size " << req.total_experiment_size << '\n'
                      << "exponent " << human(req.exponent_used) << '\n'
                      << "raw_bound " << human(req.raw_bound) << '\n';
        }
        return 0;
    }
};

struct InvertCmd {
    DesignFlags design;
    std::int64_t budget = 0;
    std::string solve_for;

    int run() const {
        BudgetSpec b{budget, design.spec()};
        InversionResult r;
        if (solve_for == "arms") {
            r = max_arms(b);
        } else if (solve_for == "leaves") {
            r = max_leaves(b);
        } else if (solve_for == "confidence") {
            r = sup_confidence(b);
        } else if (solve_for == "epsilon") {
            r = inf_epsilon(b);
        } else {
            throw ConfigError("--solve-for must be arms, leaves, confidence or epsilon");
        }
        const bool integral = solve_for == "arms" || solve_for == "leaves";
        std::cout << "solve_for " << solve_for << '\n'
                  << "solved_value " << (integral ? std::to_string(static_cast<long long>(r.solved_value)) : human(r.solved_value))
                  << '\n'
                  << "feasible " << (r.feasible ? "true" : "false") << '\n'
                  << "binding_bound " << human(r.binding_bound) << '\n';
        return 0;
    }
};

struct BoundVarianceCmd {
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<double> anchor;
    std::optional<double> rate;
    bool binary = false;

    int run() const {
        double value = 0.0;
        std::string formula;
        if (binary) {
            if (!rate) throw ConfigError("--binary needs --rate");
            value = binary_outcome_variance(*rate);
            formula = "binary";
        } else {
            if (!lo || !hi) throw ConfigError("bound-variance needs --lo and --hi (or --binary --rate)");
            const double worst = worst_case_variance(*lo, *hi);
            value = worst;
            formula = "worst_case";
            if (anchor || rate) {
                if (!anchor || !rate) throw ConfigError("the rare-deviation bound needs both --anchor and --rate");
                const double rare = rare_deviation_variance({*anchor, *rate, *lo, *hi});
                if (rare < worst) {
                    value = rare;
                    formula = "rare_deviation";
                }
            }
        }
        std::cout << "sigma_sq " << human(value) << '\n' << "formula " << formula << '\n';
        return 0;
    }
};

struct LearnTreeCmd {
    std::string train_path;
    std::string honest_path;
    int arms = 2;
    LearnerConfig config;
    std::string out;

    int run() const {
        const Dataset train = io::read_dataset_file(train_path, arms, DataRole::Train);
        const Dataset honest = io::read_dataset_file(honest_path, arms, DataRole::Honest);
        const Partition p = learn_tree(train, honest, arms, config);
        const std::string doc = io::partition_to_document(p);
        if (out.empty()) {
            std::cout << doc;
        } else {
            auto file = open_out(out);
            file << doc;
            std::cout << "leaves " << p.leaf_count() << '\n';
        }
        return 0;
    }
};

struct EstimateCmd {
    std::string partition_path;
    std::string data_path;
    int arms = 2;
    std::optional<std::int64_t> required;
    std::vector<std::string> at;
    std::string out;

    int run() const {
        const Partition p = io::read_partition_file(partition_path);
        const Dataset honest = io::read_dataset_file(data_path, arms, DataRole::Honest);
        const EstimatorTable table = fit_honest_means(p, honest, arms);
        if (out.empty()) {
            io::write_table_csv(std::cout, table);
        } else {
            auto file = open_out(out);
            io::write_table_csv(file, table);
        }
        if (required) {
            const MinCellCheck check = check_min_cell(table, *required);
            std::cout << "min_cell_check " << (check.ok ? "true" : "false") << " min_count " << check.min_count
                      << " required " << *required << '\n';
            for (const Cell& c : check.violating) {
                std::cout << "violating_cell arm " << c.arm << " leaf " << c.leaf << " count "
                          << table.count(c.arm, c.leaf) << '\n';
            }
        }
        for (const std::string& query : at) {
            const std::vector<double> x = parse_list(query, "--at");
            std::cout << "at " << query << " leaf " << p.assign_leaf(x) << '\n';
            for (int w = 1; w <= arms; ++w) {
                std::cout << "mu_hat " << w << ' ' << human(mu_hat(table, x, w)) << '\n';
            }
            for (int w = 1; w <= arms; ++w) {
                for (int v = 1; v <= arms; ++v) {
                    if (v != w) std::cout << "tau_hat " << w << ' ' << v << ' ' << human(tau_hat(table, x, w, v)) << '\n';
                }
            }
            const BestArm best = best_arm(table, x);
            std::cout << "best_arm " << best.arm << ' ' << human(best.value) << '\n';
        }
        return 0;
    }
};

unsigned thread_cap(std::optional<unsigned> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("PARTITION_POWER_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw ConfigError("PARTITION_POWER_THREADS must be a positive integer");
    }
    return 0;
}

struct SimulateCmd {
    std::string preset;
    std::string plan_file;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicates;
    std::optional<unsigned> threads;
    std::string out;
    std::string summary_out;
    std::string dump_plan;

    SimulationPlan load() const {
        if (preset.empty() == plan_file.empty()) throw ConfigError("simulate needs exactly one of --preset or --plan-file");
        SimulationPlan plan;
        if (!preset.empty()) {
            plan = make_preset(preset, seed.value_or(0));
        } else {
            std::ifstream in(plan_file, std::ios::binary);
            if (!in) throw ConfigError("cannot open '" + plan_file + "'");
            std::stringstream ss;
            ss << in.rdbuf();
            plan = io::plan_from_document(ss.str());
            if (seed) plan.seed = *seed;
        }
        if (replicates) plan.replicates = *replicates;
        validate(plan);
        return plan;
    }

    int run() const {
        const SimulationPlan plan = load();
        if (!dump_plan.empty()) {
            auto file = open_out(dump_plan);
            file << io::plan_to_document(plan);
        }
        const CoverageReport report = run_simulation(plan, thread_cap(threads));
        if (!out.empty()) {
            auto file = open_out(out);
            io::write_report_csv(file, report);
        }
        if (!summary_out.empty()) {
            auto file = open_out(summary_out);
            io::write_summary_csv(file, report.summary);
        }
        const CoverageSummary& s = report.summary;
        std::cout << "replicates " << s.replicates << '\n'
                  << "joint_mean " << human(s.joint_mean) << '\n'
                  << "best_arm " << human(s.best_arm) << '\n'
                  << "cate " << human(s.cate) << '\n'
                  << "joint_mean_uniform " << human(s.joint_mean_uniform) << '\n'
                  << "best_arm_uniform " << human(s.best_arm_uniform) << '\n'
                  << "cate_uniform " << human(s.cate_uniform) << '\n'
                  << "implication_violations " << s.implication_violations << '\n'
                  << "mean_leaf_count " << human(s.mean_leaf_count) << '\n'
                  << "min_cell_size " << s.min_cell_size << '\n';
        return 0;
    }
};

struct GenerateCmd {
    std::string preset = "paper-desk";
    std::uint64_t seed = 0;
    std::int64_t rows = 1000;
    std::string out;

    int run() const {
        const SimulationPlan plan = make_preset(preset, seed);
        std::mt19937_64 rng = replicate_rng(seed, 0);
        const Dataset data = draw_dataset(plan.dgp, rows, rng, DataRole::Unspecified);
        if (out.empty()) {
            io::write_dataset_csv(std::cout, data);
        } else {
            auto file = open_out(out);
            io::write_dataset_csv(file, data);
        }
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sample-size planning and coverage simulation for partitioned K-armed experiments"};
    app.require_subcommand(1);

    PlanCmd plan;
    auto* plan_app = app.add_subcommand("plan", "Sufficient per-cell and total sample size");
    plan.design.attach(plan_app);
    plan_app->add_option("--curve", plan.curve, "Comma-separated confidence levels; emits confidence,total_n rows");
    plan_app->add_option("--out", plan.out, "Output file for --curve");
    plan_app->add_option("--format", plan.format, "table | csv");

    InvertCmd invert;
    auto* invert_app = app.add_subcommand("invert", "Solve a fixed honest budget for one design parameter");
    invert.design.attach(invert_app);
    invert_app->add_option("--budget", invert.budget, "Honest-set sample size n_S")->required();
    invert_app->add_option("--solve-for", invert.solve_for, "arms | leaves | confidence | epsilon")->required();

    BoundVarianceCmd bound;
    auto* bound_app = app.add_subcommand("bound-variance", "Defensible bound on the conditional outcome variance");
    bound_app->add_option("--lo", bound.lo, "Outcome lower bound");
    bound_app->add_option("--hi", bound.hi, "Outcome upper bound");
    bound_app->add_option("--anchor", bound.anchor, "Value the outcome rarely deviates from");
    bound_app->add_option("--rate", bound.rate, "Largest per-cell deviation rate, at most 1/2");
    bound_app->add_flag("--binary", bound.binary, "Outcome is 0/1");

    LearnTreeCmd learn;
    auto* learn_app = app.add_subcommand("learn-tree", "Learn an honest policy tree");
    learn_app->add_option("--train", learn.train_path, "Training CSV")->required();
    learn_app->add_option("--honest", learn.honest_path, "Honest CSV (outcomes are not read)")->required();
    learn_app->add_option("--arms", learn.arms, "Number of arms");
    learn_app->add_option("--max-leaves", learn.config.max_leaves, "Leaf budget");
    learn_app->add_option("--max-depth", learn.config.max_depth, "Depth limit");
    learn_app->add_option("--min-cell-size", learn.config.min_cell_size, "Honest rows per arm per leaf");
    learn_app->add_option("--candidates", learn.config.candidate_quantiles, "Thresholds per feature per node");
    learn_app->add_option("--out", learn.out, "Partition document path");

    EstimateCmd estimate;
    auto* estimate_app = app.add_subcommand("estimate", "Honest per-cell means on a partition");
    estimate_app->add_option("--partition", estimate.partition_path, "Partition document")->required();
    estimate_app->add_option("--data", estimate.data_path, "Honest CSV")->required();
    estimate_app->add_option("--arms", estimate.arms, "Number of arms");
    estimate_app->add_option("--required-cell-size", estimate.required, "Check every cell has at least this many rows");
    estimate_app->add_option("--at", estimate.at, "Comma-separated feature vector to query (repeatable)");
    estimate_app->add_option("--out", estimate.out, "Table CSV path");

    SimulateCmd simulate;
    auto* simulate_app = app.add_subcommand("simulate", "Monte Carlo coverage of the planned guarantees");
    simulate_app->add_option("--preset", simulate.preset, "known-bernoulli | paper-desk | paper-full");
    simulate_app->add_option("--plan-file", simulate.plan_file, "Plan document (JSON)");
    simulate_app->add_option("--seed", simulate.seed, "Master seed");
    simulate_app->add_option("--replicates", simulate.replicates, "Override the replicate count");
    simulate_app->add_option("--threads", simulate.threads, "Replicate concurrency (default: PARTITION_POWER_THREADS or all cores)");
    simulate_app->add_option("--out", simulate.out, "Per-replicate report CSV");
    simulate_app->add_option("--summary-out", simulate.summary_out, "Aggregate coverage CSV");
    simulate_app->add_option("--dump-plan", simulate.dump_plan, "Write the effective plan document");

    GenerateCmd generate;
    auto* generate_app = app.add_subcommand("generate", "Draw a synthetic dataset from a preset's DGP");
    generate_app->add_option("--preset", generate.preset, "Preset whose DGP to sample");
    generate_app->add_option("--seed", generate.seed, "Seed");
    generate_app->add_option("--rows", generate.rows, "Row count");
    generate_app->add_option("--out", generate.out, "Dataset CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*plan_app) return plan.run();
        if (*invert_app) return invert.run();
        if (*bound_app) return bound.run();
        if (*learn_app) return learn.run();
        if (*estimate_app) return estimate.run();
        if (*simulate_app) return simulate.run();
        if (*generate_app) return generate.run();
    } catch (const EstimationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kEstimation;
    } catch (const ReplicateError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kEstimation;
    } catch (const LearnerError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kEstimation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
