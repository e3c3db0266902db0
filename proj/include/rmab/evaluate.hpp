#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rmab/estimation.hpp"
#include "rmab/metrics.hpp"
#include "rmab/types.hpp"
#include "rmab/whittle.hpp"

namespace rmab {

inline constexpr std::size_t kDefaultTopK = 200;
inline constexpr double kDefaultNormEpsilon = 1e-9;
inline constexpr std::size_t kDefaultHistogramBins = 40;

struct EvaluateOptions {
    std::size_t k = kDefaultTopK;
    DiscountFactor beta{0.5};
    std::size_t num_clusters = kDefaultNumClusters;
    std::uint64_t cluster_seed = 0;
    std::uint64_t min_support = 1;        // per-arm cells
    std::uint64_t min_support_pooled = 1; // cluster-pooled active cells
    double smoothing = 0.0;
    double norm_epsilon = kDefaultNormEpsilon;
    std::size_t bins = kDefaultHistogramBins;
    std::size_t max_weeks = 0; // 0 evaluates every logged week
    double whittle_tol = kDefaultBisectionTol;
};

struct WeekMetrics {
    std::size_t week = 0;
    double spearman = 0.0;
    std::vector<double> spearman_per_arm;
    double kendall = 0.0;
    double abs_wi = 0.0;
    std::vector<double> abs_wi_per_arm;
    double norm_wi = 0.0;
    std::vector<double> norm_wi_per_arm;
    std::vector<std::size_t> norm_clamped; // positions with clamped denominators
};

struct EvaluateResult {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<WeekMetrics> weekly;

    // Cumulative reports pool the per-arm terms of every evaluated week.
    MetricReport spearman_cumulative;
    MetricReport abs_cumulative;
    MetricReport norm_cumulative;
    double kendall_cumulative = 0.0; // mean of weekly values

    // Model-level prediction errors, one value per arm.
    MetricReport rmse_report;
    MetricReport mae_report;

    std::vector<ImputedModel> observed_models;
    std::size_t clusters_requested = 0;
    std::size_t clusters_used = 0;
};

/**
 * The full decision-focused evaluation: estimates observed models from the
 * trajectories (empirical counts, passive clustering, active imputation),
 * computes predicted and observed Whittle indices at each week's realized
 * states, and scores every error metric per week and cumulatively.
 *
 * Requires a rectangular trajectory table (every arm present every week) and
 * a predicted model for every arm.
 */
EvaluateResult evaluate_study(const std::vector<TrajectoryLog>& trajectories,
                              const std::vector<std::pair<ArmId, TransitionModel>>& predicted,
                              const EvaluateOptions& options);

} // namespace rmab
