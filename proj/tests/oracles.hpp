// Independent oracles used only by tests. These deliberately avoid the
// library's solver code paths: the value-iteration oracle is a fixed-sweep
// reimplementation, and the grid oracle solves each subsidized MDP exactly
// with policy iteration (2x2 linear solves) instead of iterating values.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "rmab/types.hpp"

namespace oracles {

struct QGrid {
    double q[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

// Straight value iteration with a fixed sweep count, coded independently of
// the library solver.
inline QGrid vi_q(const rmab::TransitionModel& m, double lambda, double beta, int sweeps) {
    QGrid g;
    for (int it = 0; it < sweeps; ++it) {
        const double v0 = g.q[0][0] > g.q[0][1] ? g.q[0][0] : g.q[0][1];
        const double v1 = g.q[1][0] > g.q[1][1] ? g.q[1][0] : g.q[1][1];
        for (int s = 0; s < 2; ++s) {
            for (int a = 0; a < 2; ++a) {
                const double p1 = m.prob(s, a);
                g.q[s][a] = s + (a == 0 ? lambda : 0.0) + beta * (p1 * v1 + (1.0 - p1) * v0);
            }
        }
    }
    return g;
}

// Value iteration until the sweep-to-sweep delta is below tol.
inline QGrid vi_q_tol(const rmab::TransitionModel& m, double lambda, double beta, double tol,
                      const QGrid* warm = nullptr) {
    QGrid g;
    if (warm) g = *warm;
    for (int it = 0; it < 2000000; ++it) {
        const double v0 = g.q[0][0] > g.q[0][1] ? g.q[0][0] : g.q[0][1];
        const double v1 = g.q[1][0] > g.q[1][1] ? g.q[1][0] : g.q[1][1];
        double delta = 0.0;
        for (int s = 0; s < 2; ++s) {
            for (int a = 0; a < 2; ++a) {
                const double p1 = m.prob(s, a);
                const double next = s + (a == 0 ? lambda : 0.0) + beta * (p1 * v1 + (1.0 - p1) * v0);
                const double d = std::abs(next - g.q[s][a]);
                if (d > delta) delta = d;
                g.q[s][a] = next;
            }
        }
        if (delta < tol) break;
    }
    return g;
}

// Exact value of a fixed policy via the 2x2 linear system.
inline std::array<double, 2> eval_policy(const rmab::TransitionModel& m, double lambda,
                                         double beta, const int pi[2]) {
    double reward[2], up[2];
    for (int s = 0; s < 2; ++s) {
        reward[s] = s + (pi[s] == 0 ? lambda : 0.0);
        up[s] = m.prob(s, pi[s]);
    }
    const double a11 = 1.0 - beta * (1.0 - up[0]);
    const double a12 = -beta * up[0];
    const double a21 = -beta * (1.0 - up[1]);
    const double a22 = 1.0 - beta * up[1];
    const double det = a11 * a22 - a12 * a21;
    return {(reward[0] * a22 - a12 * reward[1]) / det,
            (a11 * reward[1] - a21 * reward[0]) / det};
}

// Exact optimal Q via policy iteration; pi carries the warm-start policy in
// and the optimal policy out. Ties keep the incumbent action so the
// iteration cannot cycle.
inline QGrid policy_iteration_q(const rmab::TransitionModel& m, double lambda, double beta,
                                int pi[2]) {
    QGrid g;
    for (int round = 0; round < 32; ++round) {
        const auto v = eval_policy(m, lambda, beta, pi);
        bool stable = true;
        for (int s = 0; s < 2; ++s) {
            for (int a = 0; a < 2; ++a) {
                const double p1 = m.prob(s, a);
                g.q[s][a] = s + (a == 0 ? lambda : 0.0) + beta * (p1 * v[1] + (1.0 - p1) * v[0]);
            }
            int greedy = pi[s];
            if (g.q[s][1] > g.q[s][pi[s]]) greedy = 1;
            if (g.q[s][0] > g.q[s][greedy]) greedy = 0;
            if (g.q[s][greedy] > g.q[s][pi[s]]) {
                pi[s] = greedy;
                stable = false;
            }
        }
        if (stable) return g;
    }
    return g;
}

// Brute-force grid search for the indifference subsidy: scans every grid
// point and returns the subsidy with the smallest |Q(s,0) - Q(s,1)|.
inline double grid_whittle(const rmab::TransitionModel& m, int state, double beta, double lo,
                           double hi, double step = 1e-4) {
    int pi[2] = {0, 0};
    double best_gap = std::numeric_limits<double>::infinity();
    double best_lambda = lo;
    const long points = std::lround((hi - lo) / step);
    for (long i = 0; i <= points; ++i) {
        const double lambda = lo + step * static_cast<double>(i);
        const QGrid g = policy_iteration_q(m, lambda, beta, pi);
        const double gap = std::abs(g.q[state][0] - g.q[state][1]);
        if (gap < best_gap) {
            best_gap = gap;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

// Same scan with converged value iteration at every grid point; used to
// cross-validate the policy-iteration solver on affordable samples.
inline double grid_whittle_vi(const rmab::TransitionModel& m, int state, double beta, double lo,
                              double hi, double step = 1e-4, double tol = 1e-9) {
    double best_gap = std::numeric_limits<double>::infinity();
    double best_lambda = lo;
    QGrid warm;
    const long points = std::lround((hi - lo) / step);
    for (long i = 0; i <= points; ++i) {
        const double lambda = lo + step * static_cast<double>(i);
        warm = vi_q_tol(m, lambda, beta, tol, i == 0 ? nullptr : &warm);
        const double gap = std::abs(warm.q[state][0] - warm.q[state][1]);
        if (gap < best_gap) {
            best_gap = gap;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

// Classical Spearman footrule: total absolute rank displacement between two
// permutations given as rank-by-element arrays.
inline std::uint64_t footrule_classic(const std::vector<int>& rank_a,
                                      const std::vector<int>& rank_b) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < rank_a.size(); ++i)
        total += static_cast<std::uint64_t>(std::abs(rank_a[i] - rank_b[i]));
    return total;
}

// Classical Kendall Tau distance: discordant pairs over all element pairs.
inline std::uint64_t kendall_classic(const std::vector<int>& rank_a,
                                     const std::vector<int>& rank_b) {
    std::uint64_t discordant = 0;
    const std::size_t n = rank_a.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool a_before = rank_a[i] < rank_a[j];
            const bool b_before = rank_b[i] < rank_b[j];
            if (a_before != b_before) ++discordant;
        }
    }
    return discordant;
}

} // namespace oracles
