#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rmab {

using ArmId = std::int64_t;

/// Raised when the bisection bracket does not straddle an indifference
/// subsidy, i.e. the arm is not indexable over the searched range.
class NonIndexableError : public std::runtime_error {
  public:
    NonIndexableError(ArmId arm_id, const std::string& what)
        : std::runtime_error(what), arm_id_(arm_id) {}
    ArmId arm_id() const { return arm_id_; }

  private:
    ArmId arm_id_;
};

/// Raised when a cluster lacks the pooled observations needed to fill a
/// missing transition-probability cell.
class UnresolvableCellError : public std::runtime_error {
  public:
    UnresolvableCellError(std::size_t cluster, int state, const std::string& what)
        : std::runtime_error(what), cluster_(cluster), state_(state) {}
    std::size_t cluster() const { return cluster_; }
    int state() const { return state_; }

  private:
    std::size_t cluster_;
    int state_;
};

/**
 * Two-state Gilbert-Elliot arm. prob(s, a) is the probability of moving to
 * the engaging state (1) from state s under action a; the probability of
 * landing in state 0 is implied as the complement and never stored.
 */
class TransitionModel {
  public:
    TransitionModel() = default;

    /// Arguments follow the pSA naming: P(state=S, action=A -> next=1).
    TransitionModel(double p00, double p10, double p01, double p11) {
        p_[0][0] = p00;
        p_[1][0] = p10;
        p_[0][1] = p01;
        p_[1][1] = p11;
        validate();
    }

    /// P(next = 1 | state, action)
    double prob(int state, int action) const { return p_[state][action]; }

    /// P(next = state | state, action), via the complement identity.
    double self_prob(int state, int action) const {
        return state == 1 ? p_[state][action] : 1.0 - p_[state][action];
    }

    bool operator==(const TransitionModel& other) const = default;

  private:
    void validate() const;

    double p_[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

/// Discount factor beta in [0, 1).
class DiscountFactor {
  public:
    DiscountFactor() = default;
    explicit DiscountFactor(double beta) : beta_(beta) {
        if (!(beta >= 0.0 && beta < 1.0))
            throw std::invalid_argument("discount factor must lie in [0, 1), got " +
                                        std::to_string(beta));
    }
    double value() const { return beta_; }

  private:
    double beta_ = 0.5;
};

inline void require_state(int state) {
    if (state != 0 && state != 1)
        throw std::invalid_argument("state must be 0 or 1, got " + std::to_string(state));
}

inline void require_action(int action) {
    if (action != 0 && action != 1)
        throw std::invalid_argument("action must be 0 or 1, got " + std::to_string(action));
}

} // namespace rmab
