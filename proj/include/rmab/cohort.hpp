#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rmab/types.hpp"

namespace rmab {

/// One mixture component of a synthetic cohort. Centers are points in the
/// (P(0,a -> 1), P(1,a -> 1)) unit square, one pair per action.
struct ClusterSpec {
    double weight = 1.0;
    std::array<double, 2> passive_center = {0.5, 0.5}; // (p00, p10)
    std::array<double, 2> active_center = {0.5, 0.5};  // (p01, p11)
    double spread = 0.0;
};

struct CohortSpec {
    std::size_t n = 0;
    std::vector<ClusterSpec> clusters;
    double prediction_noise = 0.0;          // half-width of uniform noise on predictions
    double initial_engaging_fraction = 0.5; // P(state = 1 at week 0)

    /// Throws invalid_argument when weights do not sum to 1, centers leave
    /// [0,1]^2, or any spread/noise is negative.
    void validate() const;
};

struct Arm {
    ArmId arm_id = 0;
    TransitionModel true_model;
    TransitionModel predicted_model;
    std::size_t registration_rank = 0; // order of enrollment, drives round robin
    int current_state = 0;
    std::size_t true_cluster = 0; // generating component, kept for recovery checks
};

/**
 * Draws n arms: each arm picks a cluster by weight, takes its true transition
 * pairs uniformly within +-spread of the cluster centers (clamped to [0,1]),
 * and a predicted model equal to the true one perturbed by uniform noise of
 * half-width prediction_noise. Initial states are i.i.d. engaging with
 * probability initial_engaging_fraction. Deterministic given (spec, seed).
 */
std::vector<Arm> generate_cohort(const CohortSpec& spec, std::uint64_t seed);

} // namespace rmab
