// Command-line front end: seeded study simulation, decision-focused
// evaluation of prediction quality, and the closed-form random baseline.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rmab/baseline.hpp"
#include "rmab/cohort.hpp"
#include "rmab/csv.hpp"
#include "rmab/estimation.hpp"
#include "rmab/evaluate.hpp"
#include "rmab/rng.hpp"
#include "rmab/study.hpp"
#include "rmab/whittle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

// Built-in cohort: two behavioural segments with a clear treatment effect,
// used when no cohort spec file is given.
rmab::CohortSpec default_cohort_spec(std::size_t n, double prediction_noise) {
    rmab::CohortSpec spec;
    spec.n = n;
    spec.prediction_noise = prediction_noise;
    spec.initial_engaging_fraction = 0.5;
    spec.clusters = {
        {0.5, {0.25, 0.45}, {0.65, 0.85}, 0.05},
        {0.5, {0.55, 0.75}, {0.70, 0.90}, 0.05},
    };
    return spec;
}

rmab::CohortSpec load_cohort_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cohort spec: " + path);
    json j = json::parse(in);

    rmab::CohortSpec spec;
    spec.n = j.at("n").get<std::size_t>();
    spec.prediction_noise = j.value("prediction_noise", 0.0);
    spec.initial_engaging_fraction = j.value("initial_engaging_fraction", 0.5);
    for (const json& c : j.at("clusters")) {
        rmab::ClusterSpec cluster;
        cluster.weight = c.at("weight").get<double>();
        cluster.passive_center = {c.at("passive_center").at(0).get<double>(),
                                  c.at("passive_center").at(1).get<double>()};
        cluster.active_center = {c.at("active_center").at(0).get<double>(),
                                 c.at("active_center").at(1).get<double>()};
        cluster.spread = c.value("spread", 0.0);
        spec.clusters.push_back(cluster);
    }
    spec.validate();
    return spec;
}

json cohort_spec_to_json(const rmab::CohortSpec& spec) {
    json clusters = json::array();
    for (const rmab::ClusterSpec& c : spec.clusters) {
        clusters.push_back({{"weight", c.weight},
                            {"passive_center", {c.passive_center[0], c.passive_center[1]}},
                            {"active_center", {c.active_center[0], c.active_center[1]}},
                            {"spread", c.spread}});
    }
    return json{{"n", spec.n},
                {"clusters", clusters},
                {"prediction_noise", spec.prediction_noise},
                {"initial_engaging_fraction", spec.initial_engaging_fraction}};
}

void write_json_atomic(const fs::path& path, const json& j) {
    rmab::write_file_atomic(path, j.dump(2) + "\n");
}

json report_json(const char* metric, std::size_t k, std::size_t n,
                 const rmab::MetricReport& report) {
    return json{{"metric", metric},
                {"k", k},
                {"n", n},
                {"mean", report.mean},
                {"median", report.median},
                {"per_arm", report.per_arm},
                {"histogram", {{"edges", report.histogram.edges},
                               {"counts", report.histogram.counts}}}};
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::size_t n = 1000;
    std::size_t k = 50;
    std::size_t weeks = 8;
    std::string policy = "whittle";
    double beta = 0.5;
    std::optional<std::uint64_t> seed;
    double prediction_noise = 0.1;
    std::string cohort_spec_path;
    bool with_replacement = false;
    std::string output_dir = ".";
};

int cmd_simulate(const SimulateArgs& args) {
    if (!args.seed)
        throw std::invalid_argument("--seed is required: runs must be reproducible");
    if (args.weeks < 1) throw std::invalid_argument("--weeks must be at least 1");

    rmab::CohortSpec spec = args.cohort_spec_path.empty()
                                ? default_cohort_spec(args.n, args.prediction_noise)
                                : load_cohort_spec(args.cohort_spec_path);

    // Independent sub-streams for cohort generation and study execution.
    const std::uint64_t cohort_seed = rmab::derive_seed(*args.seed, 0);
    const std::uint64_t study_seed = rmab::derive_seed(*args.seed, 1);

    std::vector<rmab::Arm> arms = rmab::generate_cohort(spec, cohort_seed);

    rmab::StudyConfig config;
    config.weeks = args.weeks;
    config.budget_k = args.k;
    config.policy = rmab::policy_from_string(args.policy);
    config.beta = rmab::DiscountFactor(args.beta);
    config.seed = study_seed;
    config.random_with_replacement = args.with_replacement;

    const rmab::StudyLog log = rmab::run_study(arms, config);

    const fs::path out_dir(args.output_dir);
    fs::create_directories(out_dir);

    std::ostringstream trajectory;
    rmab::write_trajectory_csv(log, trajectory);
    rmab::write_file_atomic(out_dir / "trajectory.csv", trajectory.str());

    std::vector<std::pair<rmab::ArmId, rmab::TransitionModel>> predicted, truth;
    for (const rmab::Arm& arm : arms) {
        predicted.emplace_back(arm.arm_id, arm.predicted_model);
        truth.emplace_back(arm.arm_id, arm.true_model);
    }
    std::ostringstream predicted_csv, truth_csv;
    rmab::write_model_csv(predicted, predicted_csv);
    rmab::write_model_csv(truth, truth_csv);
    rmab::write_file_atomic(out_dir / "predicted_models.csv", predicted_csv.str());
    rmab::write_file_atomic(out_dir / "true_models.csv", truth_csv.str());

    json weekly = json::array();
    for (const rmab::WeekRecord& week : log.weeks) {
        weekly.push_back({{"week", week.week},
                          {"selected", week.selected},
                          {"engaging_after", week.engaging_after}});
    }
    json sidecar{
        {"tool_version", kToolVersion},
        {"rng_algorithm", log.rng_algorithm},
        {"seed", *args.seed},
        {"derived_seeds", {{"cohort", cohort_seed}, {"study", study_seed}}},
        {"config",
         {{"n", args.n},
          {"budget_k", args.k},
          {"weeks", args.weeks},
          {"policy", args.policy},
          {"beta", args.beta},
          {"random_with_replacement", args.with_replacement}}},
        {"cohort_spec", cohort_spec_to_json(spec)},
        {"weekly", weekly},
        {"totals",
         {{"engaging_weeks", log.total_engaging_weeks()},
          {"service_calls", log.total_service_calls()},
          {"engagement_drops", log.total_engagement_drops()}}},
    };
    write_json_atomic(out_dir / "study.json", sidecar);

    std::cout << "wrote trajectory.csv, predicted_models.csv, true_models.csv, study.json to "
              << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    std::string trajectories;
    std::string predicted;
    std::size_t k = rmab::kDefaultTopK;
    double beta = 0.5;
    std::size_t num_clusters = rmab::kDefaultNumClusters;
    std::optional<std::uint64_t> seed;
    std::uint64_t min_support = 1;
    std::uint64_t min_support_pooled = 1;
    double smoothing = 0.0;
    double epsilon = rmab::kDefaultNormEpsilon;
    std::size_t bins = rmab::kDefaultHistogramBins;
    std::size_t max_weeks = 0;
    std::string output_dir = ".";
};

int cmd_evaluate(const EvaluateArgs& args) {
    if (!args.seed)
        throw std::invalid_argument("--seed is required: clustering must be reproducible");

    std::ifstream traj_in(args.trajectories);
    if (!traj_in) throw std::runtime_error("cannot open " + args.trajectories);
    const auto trajectories = rmab::read_trajectory_csv(traj_in);

    std::ifstream pred_in(args.predicted);
    if (!pred_in) throw std::runtime_error("cannot open " + args.predicted);
    const auto predicted = rmab::read_model_csv(pred_in);

    rmab::EvaluateOptions options;
    options.k = args.k;
    options.beta = rmab::DiscountFactor(args.beta);
    options.num_clusters = args.num_clusters;
    options.cluster_seed = *args.seed;
    options.min_support = args.min_support;
    options.min_support_pooled = args.min_support_pooled;
    options.smoothing = args.smoothing;
    options.norm_epsilon = args.epsilon;
    options.bins = args.bins;
    options.max_weeks = args.max_weeks;

    const rmab::EvaluateResult result = rmab::evaluate_study(trajectories, predicted, options);

    const fs::path out_dir(args.output_dir);
    fs::create_directories(out_dir);

    const json metadata{
        {"tool_version", kToolVersion},
        {"rng_algorithm", rmab::kRngAlgorithm},
        {"seed", *args.seed},
        {"k", result.k},
        {"n", result.n},
        {"beta", args.beta},
        {"num_clusters_requested", result.clusters_requested},
        {"num_clusters_used", result.clusters_used},
        {"min_support", args.min_support},
        {"min_support_pooled", args.min_support_pooled},
        {"smoothing", args.smoothing},
        {"norm_epsilon", args.epsilon},
        {"bins", args.bins},
        {"max_weeks", args.max_weeks},
        {"trajectories", args.trajectories},
        {"predicted", args.predicted},
    };

    // Rank metrics: weekly values plus pooled cumulative reports.
    json spearman_weekly = json::array();
    json kendall_weekly = json::array();
    json abs_weekly = json::array();
    json norm_weekly = json::array();
    for (const rmab::WeekMetrics& wm : result.weekly) {
        spearman_weekly.push_back(
            {{"week", wm.week}, {"value", wm.spearman}, {"per_arm", wm.spearman_per_arm}});
        kendall_weekly.push_back({{"week", wm.week}, {"value", wm.kendall}});
        abs_weekly.push_back(
            {{"week", wm.week}, {"value", wm.abs_wi}, {"per_arm", wm.abs_wi_per_arm}});
        norm_weekly.push_back({{"week", wm.week},
                               {"value", wm.norm_wi},
                               {"per_arm", wm.norm_wi_per_arm},
                               {"clamped_positions", wm.norm_clamped}});
    }

    json spearman_report =
        report_json("spearman_topk", result.k, result.n, result.spearman_cumulative);
    spearman_report["weekly"] = spearman_weekly;
    spearman_report["metadata"] = metadata;
    write_json_atomic(out_dir / "report_spearman.json", spearman_report);

    json kendall_report{{"metric", "kendall_topk"},
                        {"k", result.k},
                        {"n", result.n},
                        {"mean", result.kendall_cumulative},
                        {"weekly", kendall_weekly},
                        {"metadata", metadata}};
    write_json_atomic(out_dir / "report_kendall.json", kendall_report);

    json abs_report = report_json("abs_wi", result.k, result.n, result.abs_cumulative);
    abs_report["weekly"] = abs_weekly;
    abs_report["metadata"] = metadata;
    write_json_atomic(out_dir / "report_abs.json", abs_report);

    json norm_report = report_json("norm_wi", result.k, result.n, result.norm_cumulative);
    norm_report["weekly"] = norm_weekly;
    norm_report["metadata"] = metadata;
    write_json_atomic(out_dir / "report_norm.json", norm_report);

    json rmse_report = report_json("rmse", result.k, result.n, result.rmse_report);
    rmse_report["metadata"] = metadata;
    write_json_atomic(out_dir / "report_rmse.json", rmse_report);

    json mae_report = report_json("mae", result.k, result.n, result.mae_report);
    mae_report["metadata"] = metadata;
    write_json_atomic(out_dir / "report_mae.json", mae_report);

    std::ostringstream observed_csv;
    rmab::write_observed_model_csv(result.observed_models, observed_csv);
    rmab::write_file_atomic(out_dir / "observed_models.csv", observed_csv.str());

    // Weekly table: one row per week plus a cumulative row.
    std::ostringstream table;
    table << "week,e_s_mean,e_s_median,e_kt,e_abs,e_norm\n";
    for (const rmab::WeekMetrics& wm : result.weekly) {
        const rmab::MetricReport week_summary = rmab::summarize(wm.spearman_per_arm, args.bins);
        table << wm.week << ',' << rmab::format_double(wm.spearman) << ','
              << rmab::format_double(week_summary.median) << ','
              << rmab::format_double(wm.kendall) << ',' << rmab::format_double(wm.abs_wi) << ','
              << rmab::format_double(wm.norm_wi) << '\n';
    }
    table << "cumulative," << rmab::format_double(result.spearman_cumulative.mean) << ','
          << rmab::format_double(result.spearman_cumulative.median) << ','
          << rmab::format_double(result.kendall_cumulative) << ','
          << rmab::format_double(result.abs_cumulative.mean) << ','
          << rmab::format_double(result.norm_cumulative.mean) << '\n';
    rmab::write_file_atomic(out_dir / "summary.csv", table.str());

    std::cout << "cumulative E^s mean " << result.spearman_cumulative.mean << ", median "
              << result.spearman_cumulative.median << " over " << result.weekly.size()
              << " week(s); reports written to " << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// baseline

struct BaselineArgs {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> observed;
    std::optional<double> expected_override;
    std::optional<double> bound_override;
    std::size_t monte_carlo = 0;
    std::optional<std::uint64_t> seed;
    std::string output;
};

int cmd_baseline(const BaselineArgs& args) {
    const rmab::BaselineStats stats = rmab::baseline_stats(args.n, args.k);
    const double expected = args.expected_override.value_or(stats.expected_error);
    const double bound = args.bound_override.value_or(stats.std_bound);

    json report{
        {"tool_version", kToolVersion},
        {"n", args.n},
        {"k", args.k},
        {"expected_error", stats.expected_error},
        {"std_bound", stats.std_bound},
        {"bound_valid", stats.bound_valid},
    };
    if (args.expected_override) report["expected_override"] = *args.expected_override;
    if (args.bound_override) report["bound_override"] = *args.bound_override;

    if (!args.observed.empty()) {
        json rows = json::array();
        for (double value : args.observed) {
            rows.push_back({{"observed_error", value},
                            {"sigma_multiples", rmab::sigma_multiples(value, expected, bound)}});
        }
        report["observed"] = rows;
    }

    if (args.monte_carlo > 0) {
        if (!args.seed)
            throw std::invalid_argument("--seed is required with --monte-carlo");
        const rmab::MonteCarloResult mc =
            rmab::monte_carlo_random_error(args.n, args.k, args.monte_carlo, *args.seed);
        report["monte_carlo"] = {{"trials", args.monte_carlo},
                                 {"seed", *args.seed},
                                 {"rng_algorithm", rmab::kRngAlgorithm},
                                 {"mean", mc.mean},
                                 {"std", mc.stddev}};
    }

    const std::string text = report.dump(2) + "\n";
    if (args.output.empty()) {
        std::cout << text;
    } else {
        rmab::write_file_atomic(args.output, text);
        std::cout << "baseline report written to " << args.output << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Restless-bandit intervention studies: simulation, Whittle policies, and "
                 "decision-focused evaluation"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "run a seeded synthetic study");
    simulate->add_option("--n", sim.n, "cohort size")->check(CLI::PositiveNumber);
    simulate->add_option("--k", sim.k, "weekly intervention budget");
    simulate->add_option("--weeks", sim.weeks, "study length in weeks");
    simulate->add_option("--policy", sim.policy, "whittle|random|round_robin|csoc");
    simulate->add_option("--beta", sim.beta, "discount factor in [0,1)");
    simulate->add_option("--seed", sim.seed, "master seed (required)");
    simulate->add_option("--prediction-noise", sim.prediction_noise,
                         "half-width of uniform noise on predicted models");
    simulate->add_option("--cohort-spec", sim.cohort_spec_path,
                         "JSON cohort spec (overrides --n/--prediction-noise)");
    simulate->add_flag("--with-replacement", sim.with_replacement,
                       "random policy draws arms with replacement");
    simulate->add_option("--output-dir", sim.output_dir, "directory for output files");

    EvaluateArgs eval;
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "score predictions against observed behaviour");
    evaluate->add_option("--trajectories", eval.trajectories, "trajectory CSV")->required();
    evaluate->add_option("--predicted", eval.predicted, "predicted-model CSV")->required();
    evaluate->add_option("--k", eval.k, "top-k cut for rank metrics");
    evaluate->add_option("--beta", eval.beta, "discount factor in [0,1)");
    evaluate->add_option("--num-clusters", eval.num_clusters,
                         "clusters for active-probability imputation");
    evaluate->add_option("--seed", eval.seed, "clustering seed (required)");
    evaluate->add_option("--min-support", eval.min_support,
                         "observations needed for a per-arm cell");
    evaluate->add_option("--min-support-pooled", eval.min_support_pooled,
                         "observations needed for a pooled cluster cell");
    evaluate->add_option("--smoothing", eval.smoothing, "pseudo-count for empirical estimates");
    evaluate->add_option("--epsilon", eval.epsilon, "denominator clamp for the normalized error");
    evaluate->add_option("--bins", eval.bins, "histogram bins");
    evaluate->add_option("--max-weeks", eval.max_weeks,
                         "evaluate only the first N weeks (0 = all)");
    evaluate->add_option("--output-dir", eval.output_dir, "directory for output files");

    BaselineArgs base;
    CLI::App* baseline =
        app.add_subcommand("baseline", "closed-form random-policy error baseline");
    baseline->add_option("--n", base.n, "cohort size")->required();
    baseline->add_option("--k", base.k, "weekly intervention budget")->required();
    baseline->add_option("--observed", base.observed,
                         "observed error values to express in sigma multiples");
    baseline->add_option("--expected", base.expected_override,
                         "override the expectation (e.g. a published rounded value)");
    baseline->add_option("--bound", base.bound_override, "override the std bound");
    baseline->add_option("--monte-carlo", base.monte_carlo, "cross-check with N sampled trials");
    baseline->add_option("--seed", base.seed, "Monte Carlo seed");
    baseline->add_option("--output", base.output, "write the JSON report here (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (evaluate->parsed()) return cmd_evaluate(eval);
        if (baseline->parsed()) return cmd_baseline(base);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
