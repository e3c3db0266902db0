#include "rmab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rmab {

namespace {

// Validates that both rankings cover the same arm set and that 1 <= k <= n.
void require_comparable(const Ranking& predicted, const Ranking& observed, std::size_t k) {
    const std::size_t n = predicted.size();
    if (observed.size() != n)
        throw std::invalid_argument("rankings differ in size: " + std::to_string(n) + " vs " +
                                    std::to_string(observed.size()));
    if (k < 1 || k > n)
        throw std::invalid_argument("k must lie in [1, n], got k=" + std::to_string(k) +
                                    " with n=" + std::to_string(n));
    for (ArmId id : predicted.order()) {
        if (!observed.contains(id))
            throw std::invalid_argument("rankings cover different arms; " + std::to_string(id) +
                                        " is missing from the observed ranking");
    }
}

} // namespace

double rmse_error(const TransitionModel& predicted, const TransitionModel& observed) {
    double sum_sq = 0.0;
    for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) {
            const double diff = predicted.self_prob(s, a) - observed.self_prob(s, a);
            sum_sq += diff * diff;
        }
    }
    return std::sqrt(sum_sq / 4.0);
}

double mae_error(const TransitionModel& predicted, const TransitionModel& observed) {
    double sum_abs = 0.0;
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
            sum_abs += std::abs(predicted.self_prob(s, a) - observed.self_prob(s, a));
    return sum_abs / 4.0;
}

double abs_wi_error(std::span<const double> predicted_wi, std::span<const double> observed_wi) {
    if (predicted_wi.size() != observed_wi.size())
        throw std::invalid_argument("whittle index lists differ in length");
    if (predicted_wi.empty())
        throw std::invalid_argument("whittle index lists are empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted_wi.size(); ++i)
        sum += std::abs(predicted_wi[i] - observed_wi[i]);
    return sum / static_cast<double>(predicted_wi.size());
}

NormWiError norm_wi_error(std::span<const double> predicted_wi,
                          std::span<const double> observed_wi, double epsilon) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    if (predicted_wi.size() != observed_wi.size())
        throw std::invalid_argument("whittle index lists differ in length");
    if (predicted_wi.empty())
        throw std::invalid_argument("whittle index lists are empty");

    NormWiError result;
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted_wi.size(); ++i) {
        double denom = std::abs(predicted_wi[i]);
        if (denom < epsilon) {
            denom = epsilon;
            result.clamped.push_back(i);
        }
        sum += std::abs(predicted_wi[i] - observed_wi[i]) / denom;
    }
    result.value = sum / static_cast<double>(predicted_wi.size());
    return result;
}

double kendall_topk(const Ranking& predicted, const Ranking& observed, std::size_t k) {
    require_comparable(predicted, observed, k);
    const std::size_t n = predicted.size();
    if (n < 2) return 0.0;

    // Observed ranks of the predicted top-k, in predicted order. A discordant
    // pair is an inversion in this sequence.
    std::vector<std::int64_t> ranks(k);
    for (std::size_t i = 0; i < k; ++i) ranks[i] = observed.rank(predicted.order()[i]);

    std::uint64_t discordant = 0;
    for (std::size_t i = 0; i + 1 < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (ranks[i] > ranks[j]) ++discordant;

    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return static_cast<double>(discordant) / pairs;
}

SpearmanTopK spearman_topk(const Ranking& predicted, const Ranking& observed, std::size_t k) {
    require_comparable(predicted, observed, k);
    const std::size_t n = predicted.size();

    SpearmanTopK result;
    result.per_arm.reserve(k);
    std::uint64_t total_shift = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t predicted_rank = static_cast<std::int64_t>(i) + 1;
        const std::int64_t observed_rank = observed.rank(predicted.order()[i]);
        const std::uint64_t shift =
            static_cast<std::uint64_t>(std::abs(predicted_rank - observed_rank));
        total_shift += shift;
        result.per_arm.push_back(static_cast<double>(shift) / static_cast<double>(n));
    }
    // Single division of the exact integer displacement sum.
    result.overall =
        static_cast<double>(total_shift) / (static_cast<double>(k) * static_cast<double>(n));
    return result;
}

MetricReport summarize(std::vector<double> values, std::size_t bins) {
    if (values.empty())
        throw std::invalid_argument("cannot summarize an empty value list");
    if (bins < 1)
        throw std::invalid_argument("need at least one histogram bin");

    MetricReport report;
    report.per_arm = values;

    double sum = 0.0;
    double max_value = values.front();
    for (double v : values) {
        sum += v;
        max_value = std::max(max_value, v);
    }
    report.mean = sum / static_cast<double>(values.size());

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    // Lower-middle convention for even counts.
    report.median = sorted[(sorted.size() - 1) / 2];

    report.histogram.edges.resize(bins + 1);
    report.histogram.counts.assign(bins, 0);
    const double width = max_value / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b)
        report.histogram.edges[b] = width * static_cast<double>(b);
    report.histogram.edges[bins] = max_value;
    for (double v : values) {
        std::size_t bin = 0;
        if (width > 0.0) bin = std::min(bins - 1, static_cast<std::size_t>(v / width));
        ++report.histogram.counts[bin];
    }
    return report;
}

} // namespace rmab
