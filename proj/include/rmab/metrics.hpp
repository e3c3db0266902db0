#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rmab/ranking.hpp"
#include "rmab/types.hpp"

namespace rmab {

/**
 * Root mean-square error over the four self-transition probabilities
 * P(s,a,s) of the two models: sqrt((1/4) * sum (P - O)^2).
 */
double rmse_error(const TransitionModel& predicted, const TransitionModel& observed);

/// Mean absolute error over the four self-transition probabilities.
double mae_error(const TransitionModel& predicted, const TransitionModel& observed);

/**
 * Mean absolute gap between predicted and observed Whittle indices of the
 * top-k arms of the predicted ranking. Both spans are ordered by predicted
 * rank and must have equal length.
 */
double abs_wi_error(std::span<const double> predicted_wi, std::span<const double> observed_wi);

struct NormWiError {
    double value = 0.0;
    /// 0-based positions whose predicted index magnitude fell below epsilon,
    /// i.e. whose denominator was clamped.
    std::vector<std::size_t> clamped;
};

/**
 * Mean relative gap |WI_p - WI_o| / max(|WI_p|, epsilon) over the top-k arms.
 * The epsilon clamp keeps the metric finite when a predicted index is near
 * zero; affected positions are reported in the result.
 */
NormWiError norm_wi_error(std::span<const double> predicted_wi,
                          std::span<const double> observed_wi, double epsilon);

/**
 * Top-k Kendall Tau distance: the number of pairs among the predicted
 * ranking's top k that appear in the opposite relative order in the observed
 * ranking, normalized by n(n-1)/2. Both rankings must cover the same arms.
 */
double kendall_topk(const Ranking& predicted, const Ranking& observed, std::size_t k);

struct SpearmanTopK {
    double overall = 0.0;
    std::vector<double> per_arm; // |i - observed_rank(s_i)| / n, i = 1..k
};

/**
 * Top-k Spearman footrule distance: mean over the predicted ranking's top-k
 * arms of the absolute rank displacement between the two rankings, each
 * displacement normalized by n. The overall value is computed from the exact
 * integer displacement sum, so constructed cases come out exact.
 */
SpearmanTopK spearman_topk(const Ranking& predicted, const Ranking& observed, std::size_t k);

struct Histogram {
    std::vector<double> edges;        // bins + 1 ascending edges over [0, max]
    std::vector<std::size_t> counts;  // per-bin counts; sum equals n
};

struct MetricReport {
    std::vector<double> per_arm;
    double mean = 0.0;
    double median = 0.0;
    Histogram histogram;
};

/**
 * Mean, median, and an equal-width histogram over [0, max(values)].
 * Median follows the lower-middle convention for even counts.
 */
MetricReport summarize(std::vector<double> values, std::size_t bins);

} // namespace rmab
