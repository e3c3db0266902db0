#include "rmab/baseline.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmab/metrics.hpp"
#include "rmab/ranking.hpp"
#include "rmab/rng.hpp"

namespace rmab {

namespace {

void require_n_k(std::size_t n, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (n == 0) throw std::invalid_argument("n must be at least 1");
    if (k > n)
        throw std::invalid_argument("k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
}

} // namespace

double expected_random_error(std::size_t n, std::size_t k) {
    require_n_k(n, k);
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    return 0.5 - kd / (2.0 * nd) + (kd * kd - 1.0) / (3.0 * nd * nd);
}

StdBound random_error_std_bound(std::size_t n, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    StdBound result;
    result.bound = 1.0 / (2.0 * std::sqrt(3.0 * static_cast<double>(k)));
    result.valid = k <= 200 && n >= 3000;
    return result;
}

BaselineStats baseline_stats(std::size_t n, std::size_t k) {
    BaselineStats stats;
    stats.n = n;
    stats.k = k;
    stats.expected_error = expected_random_error(n, k);
    const StdBound bound = random_error_std_bound(n, k);
    stats.std_bound = bound.bound;
    stats.bound_valid = bound.valid;
    return stats;
}

MonteCarloResult monte_carlo_random_error(std::size_t n, std::size_t k, std::size_t trials,
                                          std::uint64_t seed) {
    require_n_k(n, k);
    if (trials < 1) throw std::invalid_argument("need at least one trial");

    std::vector<ArmId> identity(n);
    std::iota(identity.begin(), identity.end(), ArmId{0});
    const Ranking observed(identity);

    Rng rng(seed);
    std::vector<ArmId> order = identity;

    // Welford running moments: order-fixed and numerically stable.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        rng.shuffle(order);
        const double error = spearman_topk(Ranking(order), observed, k).overall;
        const double delta = error - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (error - mean);
    }

    MonteCarloResult result;
    result.mean = mean;
    result.stddev = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1)) : 0.0;
    return result;
}

double sigma_multiples(double observed_error, const BaselineStats& stats) {
    return sigma_multiples(observed_error, stats.expected_error, stats.std_bound);
}

double sigma_multiples(double observed_error, double expected_error, double std_bound) {
    if (!(std_bound > 0.0)) throw std::invalid_argument("std bound must be positive");
    return (expected_error - observed_error) / std_bound;
}

} // namespace rmab
