#include "rmab/whittle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rmab {

QTable q_values_with_subsidy(const TransitionModel& model, double subsidy, DiscountFactor beta,
                             double tol) {
    if (!std::isfinite(subsidy))
        throw std::invalid_argument("subsidy must be finite");
    if (!(tol > 0.0))
        throw std::invalid_argument("value-iteration tolerance must be positive");

    const double b = beta.value();
    QTable table;
    table.subsidy = subsidy;

    for (int sweep = 0; sweep < kMaxValueIterSweeps; ++sweep) {
        const double v0 = table.state_value(0);
        const double v1 = table.state_value(1);
        double delta = 0.0;
        for (int s = 0; s < 2; ++s) {
            for (int a = 0; a < 2; ++a) {
                const double p1 = model.prob(s, a);
                const double next = s + (a == 0 ? subsidy : 0.0) + b * (p1 * v1 + (1.0 - p1) * v0);
                delta = std::max(delta, std::abs(next - table.q[s][a]));
                table.q[s][a] = next;
            }
        }
        if (delta < tol) return table;
    }
    throw std::runtime_error("value iteration did not converge within sweep limit");
}

double whittle_index_in_bracket(const TransitionModel& model, int state, DiscountFactor beta,
                                double tol, double lo, double hi, ArmId arm_id) {
    require_state(state);
    if (!(tol > 0.0))
        throw std::invalid_argument("bisection tolerance must be positive");

    // Keep the inner solves well below the bisection resolution.
    const double vi_tol = std::min(kDefaultValueIterTol, tol * 1e-2);
    const auto gap = [&](double subsidy) {
        return q_values_with_subsidy(model, subsidy, beta, vi_tol).action_gap(state);
    };

    const double gap_lo = gap(lo);
    const double gap_hi = gap(hi);
    if (gap_lo == 0.0) return lo;
    if (gap_hi == 0.0) return hi;
    // An indexable arm has a non-decreasing gap, negative at the lower end
    // and positive at the upper one. Anything else is a bracket failure and
    // must surface rather than be clamped.
    if (!(gap_lo < 0.0 && gap_hi > 0.0)) {
        std::ostringstream msg;
        msg << "no indifference subsidy in [" << lo << ", " << hi << "] for state " << state
            << " (gap " << gap_lo << " .. " << gap_hi << ")";
        if (arm_id >= 0) msg << ", arm " << arm_id;
        throw NonIndexableError(arm_id, msg.str());
    }
    constexpr int kMaxBisections = 200;
    for (int iter = 0; iter < kMaxBisections; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            // Bracket exhausted at double precision.
            const double residual = gap(mid);
            if (std::abs(residual) <= tol) return mid;
            std::ostringstream msg;
            msg << "bisection stalled with residual gap " << residual << " in state " << state;
            throw NonIndexableError(arm_id, msg.str());
        }
        const double gap_mid = gap(mid);
        if (gap_mid == 0.0) return mid;
        if (std::abs(gap_mid) <= tol && (hi - lo) <= tol) return mid;
        if (gap_mid > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    throw std::runtime_error("whittle bisection did not converge");
}

double whittle_index(const TransitionModel& model, int state, DiscountFactor beta, double tol,
                     ArmId arm_id) {
    // Rewards lie in [0, 1], so no subsidy of magnitude above 1/(1-beta) can
    // flip the preferred action.
    const double reach = 1.0 / (1.0 - beta.value());
    return whittle_index_in_bracket(model, state, beta, tol, -reach, reach, arm_id);
}

Ranking rank_by_index(std::vector<WhittleEntry> entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const WhittleEntry& a, const WhittleEntry& b) {
                         if (a.index != b.index) return a.index > b.index;
                         return a.arm_id < b.arm_id;
                     });
    std::vector<ArmId> order;
    order.reserve(entries.size());
    for (const auto& entry : entries) order.push_back(entry.arm_id);
    return Ranking(std::move(order)); // rejects duplicate ids
}

std::vector<ArmId> select_top_k(const Ranking& ranking, std::size_t k) {
    const auto& order = ranking.order();
    const std::size_t take = std::min(k, order.size());
    return std::vector<ArmId>(order.begin(), order.begin() + take);
}

} // namespace rmab
