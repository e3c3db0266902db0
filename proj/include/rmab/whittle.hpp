#pragma once

#include <vector>

#include "rmab/ranking.hpp"
#include "rmab/types.hpp"

namespace rmab {

// The per-step reward of an arm is its current state (engaging pays 1,
// non-engaging pays 0), accrued before the transition.
inline constexpr bool kRewardIsCurrentState = true;

inline constexpr double kDefaultValueIterTol = 1e-6;
inline constexpr int kMaxValueIterSweeps = 100000;
inline constexpr double kDefaultBisectionTol = 1e-4;

/// Q-values of the subsidized single-arm problem at a fixed subsidy.
struct QTable {
    double q[2][2] = {{0.0, 0.0}, {0.0, 0.0}}; // [state][action]
    double subsidy = 0.0;

    double state_value(int s) const { return q[s][0] > q[s][1] ? q[s][0] : q[s][1]; }
    /// Passive-minus-active gap in the given state.
    double action_gap(int s) const { return q[s][0] - q[s][1]; }
};

/**
 * Fixed point of
 *   Q(s,a) = s + subsidy*[a=0] + beta * sum_s' P(s,a,s') * max_a' Q(s',a')
 * computed by value iteration from Q = 0 until successive sweeps differ by
 * less than tol in max norm.
 */
QTable q_values_with_subsidy(const TransitionModel& model, double subsidy, DiscountFactor beta,
                             double tol = kDefaultValueIterTol);

/**
 * Whittle index: the subsidy at which the passive and active actions are
 * equally valuable in the given state. Found by bisection over
 * [-1/(1-beta), +1/(1-beta)]; the returned subsidy satisfies both
 * |Q(s,0) - Q(s,1)| <= tol and a bracket width <= tol.
 *
 * Throws NonIndexableError when the action gap has the same sign at both
 * bracket ends (arm_id is carried into the error for diagnostics).
 */
double whittle_index(const TransitionModel& model, int state, DiscountFactor beta,
                     double tol = kDefaultBisectionTol, ArmId arm_id = -1);

/// whittle_index over an explicit subsidy bracket [lo, hi].
double whittle_index_in_bracket(const TransitionModel& model, int state, DiscountFactor beta,
                                double tol, double lo, double hi, ArmId arm_id = -1);

struct WhittleEntry {
    ArmId arm_id = 0;
    int state = 0;
    double index = 0.0;
};

/**
 * Permutation of the entries' arm ids in strictly decreasing index order;
 * ties are broken by ascending arm id so rankings are reproducible.
 * Throws invalid_argument on duplicate arm ids.
 */
Ranking rank_by_index(std::vector<WhittleEntry> entries);

/// First min(k, n) arms of the ranking.
std::vector<ArmId> select_top_k(const Ranking& ranking, std::size_t k);

} // namespace rmab
