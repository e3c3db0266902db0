#pragma once

#include <cstddef>
#include <cstdint>

namespace rmab {

/// Closed-form behaviour of the purely random policy, which selects k of n
/// arms each week via a uniformly random permutation.
struct BaselineStats {
    std::size_t n = 0;
    std::size_t k = 0;
    double expected_error = 0.0; // E[top-k footrule error]
    double std_bound = 0.0;      // 1 / (2 sqrt(3k))
    bool bound_valid = false;    // proven only for k <= 200 and n >= 3000
};

/// E[error] = 1/2 - k/(2n) + (k^2 - 1)/(3n^2). Requires 1 <= k <= n.
double expected_random_error(std::size_t n, std::size_t k);

struct StdBound {
    double bound = 0.0;
    bool valid = false;
};

/**
 * Upper bound 1/(2 sqrt(3k)) on the standard deviation of the random
 * policy's top-k footrule error. The bound is proven for k <= 200 and
 * n >= 3000; outside that regime the value is still returned with
 * valid = false so exploratory use never silently overclaims.
 */
StdBound random_error_std_bound(std::size_t n, std::size_t k);

BaselineStats baseline_stats(std::size_t n, std::size_t k);

struct MonteCarloResult {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation
};

/**
 * Simulation oracle for the closed forms: draws `trials` uniformly random
 * permutations, scores each against the identity ranking with the top-k
 * footrule metric, and returns the sample mean and standard deviation.
 * Deterministic given the seed.
 */
MonteCarloResult monte_carlo_random_error(std::size_t n, std::size_t k, std::size_t trials,
                                          std::uint64_t seed);

/**
 * How many bound standard deviations the observed error sits below the
 * random baseline's expectation: (E[error] - observed) / std_bound.
 */
double sigma_multiples(double observed_error, const BaselineStats& stats);

/// Same statistic with the expectation and bound supplied directly (e.g. to
/// reproduce published tables that report rounded values).
double sigma_multiples(double observed_error, double expected_error, double std_bound);

} // namespace rmab
