#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rmab/types.hpp"

namespace rmab {

struct TrajectoryStep {
    std::size_t week = 0;
    int state = 0;
    int action = 0;
    int next_state = 0;
};

/// Observed weekly transitions of one arm, ordered by week.
struct TrajectoryLog {
    ArmId arm_id = 0;
    std::vector<TrajectoryStep> steps;
};

/// Sufficient statistics for one arm's transition probabilities.
struct TransitionCounts {
    std::uint64_t c[2][2][2] = {}; // [state][action][next_state]

    std::uint64_t row_total(int state, int action) const {
        return c[state][action][0] + c[state][action][1];
    }
    TransitionCounts& operator+=(const TransitionCounts& other);
};

/// Exact cell counts of the log's (state, action, next_state) triples.
/// Throws invalid_argument naming the offending step on out-of-range values.
TransitionCounts count_transitions(const TrajectoryLog& log);

/**
 * Empirical transition probabilities with per-cell support. A cell is
 * present only when its observation count reaches min_support.
 */
struct PartialModel {
    ArmId arm_id = 0;
    std::optional<double> p[2][2];    // P(next=1 | s, a), missing under min_support
    std::uint64_t support[2][2] = {}; // observations behind each cell
    TransitionCounts counts;          // retained so cluster pooling stays exact

    bool passive_complete() const { return p[0][0].has_value() && p[1][0].has_value(); }
    bool complete() const {
        return passive_complete() && p[0][1].has_value() && p[1][1].has_value();
    }
};

/**
 * p(s,a) = (c(s,a,1) + smoothing) / (row + 2 * smoothing) wherever the row
 * count reaches min_support. Smoothing defaults to off; a pseudo-count keeps
 * degenerate 0/1 estimates away from the boundary when requested.
 */
PartialModel empirical_model(ArmId arm_id, const TransitionCounts& counts,
                             std::uint64_t min_support, double smoothing = 0.0);

inline constexpr std::size_t kDefaultNumClusters = 20;
inline constexpr std::size_t kDefaultKMeansMaxIters = 200;
inline constexpr double kKMeansMoveTol = 1e-8;

struct ClusterAssignment {
    std::size_t requested_clusters = 0;
    std::size_t num_clusters = 0; // reduced when fewer distinct passive points exist
    std::vector<std::size_t> cluster_of; // parallel to the input model list
    std::vector<std::array<double, 2>> centroids;
    std::vector<TransitionCounts> pooled; // cellwise sum over members
    /// Pooled active estimates per cluster and state, missing when unobserved.
    std::vector<std::array<std::optional<double>, 2>> pooled_active;
    std::vector<double> objective_history; // within-cluster sum of squares per iteration
};

/**
 * Seeded k-means (k-means++ initialization, Lloyd iterations, squared
 * Euclidean distance) on the 2-D passive points (p(0,0), p(1,0)). Requires
 * both passive cells on every model; arms violating that are listed in the
 * thrown invalid_argument. When fewer distinct points than clusters exist
 * the cluster count is reduced and reported in the result.
 */
ClusterAssignment cluster_passive(const std::vector<PartialModel>& models,
                                  std::size_t num_clusters, std::uint64_t seed,
                                  std::size_t max_iters = kDefaultKMeansMaxIters,
                                  double move_tol = kKMeansMoveTol);

struct ImputedModel {
    ArmId arm_id = 0;
    TransitionModel model;
    bool imputed[2][2] = {}; // [state][action], true when filled from the cluster
};

/**
 * Completes every arm's model: present cells are kept verbatim; missing
 * active cells take the pooled estimate of the arm's cluster. Throws
 * UnresolvableCellError when a cluster's pooled support for a needed cell is
 * below min_support (lowering num_clusters pools more data).
 */
std::vector<ImputedModel> impute_active(const ClusterAssignment& assignment,
                                        const std::vector<PartialModel>& models,
                                        std::uint64_t min_support);

} // namespace rmab
