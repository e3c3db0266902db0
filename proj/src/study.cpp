#include "rmab/study.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rmab {

std::string to_string(Policy policy) {
    switch (policy) {
        case Policy::kWhittle: return "whittle";
        case Policy::kRandom: return "random";
        case Policy::kRoundRobin: return "round_robin";
        case Policy::kCsoc: return "csoc";
    }
    throw std::invalid_argument("unknown policy value");
}

Policy policy_from_string(const std::string& name) {
    if (name == "whittle") return Policy::kWhittle;
    if (name == "random") return Policy::kRandom;
    if (name == "round_robin") return Policy::kRoundRobin;
    if (name == "csoc") return Policy::kCsoc;
    throw std::invalid_argument("unknown policy: " + name);
}

void StudyConfig::validate(std::size_t cohort_size) const {
    if (cohort_size == 0) throw std::invalid_argument("cohort is empty");
    if (!(whittle_tol > 0.0)) throw std::invalid_argument("whittle tolerance must be positive");
}

std::size_t StudyLog::total_engaging_weeks() const {
    std::size_t total = 0;
    for (const WeekRecord& week : weeks) total += week.engaging_after;
    return total;
}

std::size_t StudyLog::total_service_calls() const {
    std::size_t total = 0;
    for (const WeekRecord& week : weeks) total += week.selected.size();
    return total;
}

std::size_t StudyLog::total_engagement_drops() const {
    std::size_t total = 0;
    for (const WeekRecord& week : weeks)
        for (const Transition& t : week.transitions)
            if (t.state == 1 && t.next_state == 0) ++total;
    return total;
}

StudyRunner::StudyRunner(std::vector<Arm> arms, const StudyConfig& config)
    : arms_(std::move(arms)), config_(config), rng_(config.seed) {
    config_.validate(arms_.size());
    log_.cohort_size = arms_.size();
    log_.config = config_;

    arm_index_.reserve(arms_.size());
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        if (!arm_index_.emplace(arms_[i].arm_id, i).second)
            throw std::invalid_argument("duplicate arm id in cohort: " +
                                        std::to_string(arms_[i].arm_id));
    }

    registration_order_.resize(arms_.size());
    std::iota(registration_order_.begin(), registration_order_.end(), std::size_t{0});
    std::sort(registration_order_.begin(), registration_order_.end(),
              [this](std::size_t a, std::size_t b) {
                  if (arms_[a].registration_rank != arms_[b].registration_rank)
                      return arms_[a].registration_rank < arms_[b].registration_rank;
                  return arms_[a].arm_id < arms_[b].arm_id;
              });

    if (config_.policy == Policy::kWhittle) {
        // Indices depend only on (model, state), so both states are solved
        // once per arm and reused every week.
        whittle_cache_.reserve(arms_.size());
        for (const Arm& arm : arms_) {
            whittle_cache_.push_back(
                {whittle_index(arm.predicted_model, 0, config_.beta, config_.whittle_tol,
                               arm.arm_id),
                 whittle_index(arm.predicted_model, 1, config_.beta, config_.whittle_tol,
                               arm.arm_id)});
        }
    }
}

std::vector<ArmId> StudyRunner::select(std::vector<ArmId>& policy_order) {
    const std::size_t n = arms_.size();
    const std::size_t budget = std::min(config_.budget_k, n);

    switch (config_.policy) {
        case Policy::kCsoc:
            return {};
        case Policy::kWhittle: {
            std::vector<WhittleEntry> entries;
            entries.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                const Arm& arm = arms_[i];
                entries.push_back(
                    {arm.arm_id, arm.current_state, whittle_cache_[i][arm.current_state]});
            }
            const Ranking ranking = rank_by_index(std::move(entries));
            policy_order = ranking.order();
            return select_top_k(ranking, budget);
        }
        case Policy::kRandom: {
            if (config_.random_with_replacement) {
                // k independent draws; an arm drawn twice is still one call.
                std::vector<ArmId> selected;
                std::vector<char> taken(n, 0);
                for (std::size_t draw = 0; draw < config_.budget_k; ++draw) {
                    const auto idx = static_cast<std::size_t>(rng_.next_below(n));
                    if (!taken[idx]) {
                        taken[idx] = 1;
                        selected.push_back(arms_[idx].arm_id);
                    }
                }
                return selected;
            }
            // Uniform permutation; its prefix is the intervention set.
            std::vector<ArmId> order;
            order.reserve(n);
            for (const Arm& arm : arms_) order.push_back(arm.arm_id);
            rng_.shuffle(order);
            policy_order = order;
            return std::vector<ArmId>(order.begin(), order.begin() + budget);
        }
        case Policy::kRoundRobin: {
            std::vector<ArmId> selected;
            selected.reserve(budget);
            for (std::size_t i = 0; i < budget; ++i) {
                selected.push_back(
                    arms_[registration_order_[(round_robin_cursor_ + i) % n]].arm_id);
            }
            policy_order.reserve(n);
            for (std::size_t i = 0; i < n; ++i)
                policy_order.push_back(arms_[registration_order_[(round_robin_cursor_ + i) % n]].arm_id);
            round_robin_cursor_ = (round_robin_cursor_ + budget) % n;
            return selected;
        }
    }
    throw std::logic_error("unreachable policy branch");
}

const WeekRecord& StudyRunner::step_week() {
    WeekRecord record;
    record.week = log_.weeks.size();
    record.selected = select(record.policy_order);

    std::vector<char> active(arms_.size(), 0);
    for (ArmId id : record.selected) active[arm_index_.at(id)] = 1;

    record.transitions.reserve(arms_.size());
    std::size_t engaging = 0;
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        Arm& arm = arms_[i];
        const int action = active[i] ? 1 : 0;
        const int next_state = rng_.bernoulli(arm.true_model.prob(arm.current_state, action)) ? 1 : 0;
        record.transitions.push_back({arm.arm_id, arm.current_state, action, next_state});
        arm.current_state = next_state;
        engaging += static_cast<std::size_t>(next_state);
    }
    record.engaging_after = engaging;

    log_.weeks.push_back(std::move(record));
    return log_.weeks.back();
}

StudyLog run_study(std::vector<Arm> arms, const StudyConfig& config) {
    StudyRunner runner(std::move(arms), config);
    for (std::size_t week = 0; week < config.weeks; ++week) runner.step_week();
    return runner.take_log();
}

double engagement_drops_prevented(const StudyLog& policy_log, const StudyLog& csoc_log,
                                  bool per_service_call) {
    if (policy_log.weeks.size() != csoc_log.weeks.size() ||
        policy_log.cohort_size != csoc_log.cohort_size)
        throw std::invalid_argument("study logs cover different weeks or cohorts");

    const double prevented = static_cast<double>(csoc_log.total_engagement_drops()) -
                             static_cast<double>(policy_log.total_engagement_drops());
    if (!per_service_call) return prevented;

    const std::size_t calls = policy_log.total_service_calls();
    if (calls == 0)
        throw std::invalid_argument("cannot normalize by service calls: none were made");
    return prevented / static_cast<double>(calls);
}

} // namespace rmab
