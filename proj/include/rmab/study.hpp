#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rmab/cohort.hpp"
#include "rmab/ranking.hpp"
#include "rmab/rng.hpp"
#include "rmab/types.hpp"
#include "rmab/whittle.hpp"

namespace rmab {

enum class Policy { kWhittle, kRandom, kRoundRobin, kCsoc };

std::string to_string(Policy policy);
Policy policy_from_string(const std::string& name);

struct StudyConfig {
    std::size_t weeks = 1;
    std::size_t budget_k = 0;
    Policy policy = Policy::kWhittle;
    DiscountFactor beta{0.5};
    std::uint64_t seed = 0;
    /// The random policy draws k distinct arms (a uniform permutation prefix)
    /// by default; this switches it to k independent draws for sensitivity
    /// checks, in which case fewer than k distinct arms may be contacted.
    bool random_with_replacement = false;
    double whittle_tol = kDefaultBisectionTol;

    void validate(std::size_t cohort_size) const;
};

struct Transition {
    ArmId arm_id = 0;
    int state = 0;
    int action = 0;
    int next_state = 0;
};

struct WeekRecord {
    std::size_t week = 0;
    std::vector<ArmId> selected;         // arms contacted this week, selection order
    std::vector<Transition> transitions; // one per arm, cohort order
    /// Full priority order the policy used this week: the predicted-index
    /// ranking (whittle), the sampled permutation (random without
    /// replacement), or the rotation (round robin). Empty under csoc and
    /// with-replacement sampling, which have no ranking.
    std::vector<ArmId> policy_order;
    std::size_t engaging_after = 0; // arms in state 1 once transitions landed
};

struct StudyLog {
    std::size_t cohort_size = 0;
    StudyConfig config;
    std::string rng_algorithm = kRngAlgorithm;
    std::vector<WeekRecord> weeks;

    std::size_t total_engaging_weeks() const;
    std::size_t total_service_calls() const;
    /// Engaging -> non-engaging weekly transitions.
    std::size_t total_engagement_drops() const;
};

/**
 * Runs one intervention study week by week. Selection follows the configured
 * policy; every arm then draws its next state from its true model under the
 * action it received. Whittle indices are computed from predicted models at
 * the arms' current states (both states are solved once per arm up front).
 */
class StudyRunner {
  public:
    StudyRunner(std::vector<Arm> arms, const StudyConfig& config);

    /// Advances one week and returns the appended record.
    const WeekRecord& step_week();

    std::size_t weeks_done() const { return log_.weeks.size(); }
    const std::vector<Arm>& arms() const { return arms_; }
    const StudyLog& log() const { return log_; }
    StudyLog take_log() { return std::move(log_); }

  private:
    std::vector<ArmId> select(std::vector<ArmId>& policy_order);

    std::vector<Arm> arms_;
    StudyConfig config_;
    Rng rng_;
    StudyLog log_;
    std::size_t round_robin_cursor_ = 0;
    std::unordered_map<ArmId, std::size_t> arm_index_;
    std::vector<std::size_t> registration_order_; // arm positions by registration rank
    std::vector<std::array<double, 2>> whittle_cache_; // per arm, per state
};

/// Runs config.weeks weeks from scratch. Deterministic given (arms, config).
StudyLog run_study(std::vector<Arm> arms, const StudyConfig& config);

/**
 * Drops prevented relative to the no-intervention control:
 * (drops in csoc log) - (drops in policy log). With per_service_call the
 * difference is divided by the policy log's total service calls.
 */
double engagement_drops_prevented(const StudyLog& policy_log, const StudyLog& csoc_log,
                                  bool per_service_call = false);

} // namespace rmab
