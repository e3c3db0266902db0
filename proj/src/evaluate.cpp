#include "rmab/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "rmab/ranking.hpp"

namespace rmab {

EvaluateResult evaluate_study(const std::vector<TrajectoryLog>& trajectories,
                              const std::vector<std::pair<ArmId, TransitionModel>>& predicted,
                              const EvaluateOptions& options) {
    if (trajectories.empty()) throw std::invalid_argument("no trajectories supplied");
    const std::size_t n = trajectories.size();
    if (options.k < 1 || options.k > n)
        throw std::invalid_argument("k must lie in [1, n], got k=" + std::to_string(options.k) +
                                    " with n=" + std::to_string(n));

    std::unordered_map<ArmId, const TransitionModel*> predicted_by_arm;
    predicted_by_arm.reserve(predicted.size());
    for (const auto& [arm_id, model] : predicted) {
        if (!predicted_by_arm.emplace(arm_id, &model).second)
            throw std::invalid_argument("duplicate predicted model for arm " +
                                        std::to_string(arm_id));
    }
    for (const TrajectoryLog& log : trajectories) {
        if (!predicted_by_arm.contains(log.arm_id))
            throw std::invalid_argument("no predicted model for arm " +
                                        std::to_string(log.arm_id));
    }

    // Observed models: empirical counts, then cluster-and-pool imputation of
    // the active cells that single arms rarely observe.
    std::vector<PartialModel> partials;
    partials.reserve(n);
    for (const TrajectoryLog& log : trajectories)
        partials.push_back(empirical_model(log.arm_id, count_transitions(log),
                                           options.min_support, options.smoothing));
    const ClusterAssignment assignment =
        cluster_passive(partials, options.num_clusters, options.cluster_seed);
    std::vector<ImputedModel> observed =
        impute_active(assignment, partials, options.min_support_pooled);

    std::unordered_map<ArmId, const TransitionModel*> observed_by_arm;
    observed_by_arm.reserve(n);
    for (const ImputedModel& m : observed) observed_by_arm.emplace(m.arm_id, &m.model);

    // Whittle indices depend only on (model, state): solve both states once
    // per arm for both model kinds.
    struct IndexPair {
        double by_state[2];
    };
    std::unordered_map<ArmId, IndexPair> predicted_wi, observed_wi;
    predicted_wi.reserve(n);
    observed_wi.reserve(n);
    for (const TrajectoryLog& log : trajectories) {
        const TransitionModel& pred = *predicted_by_arm.at(log.arm_id);
        const TransitionModel& obs = *observed_by_arm.at(log.arm_id);
        IndexPair p{}, o{};
        for (int s = 0; s < 2; ++s) {
            p.by_state[s] =
                whittle_index(pred, s, options.beta, options.whittle_tol, log.arm_id);
            o.by_state[s] = whittle_index(obs, s, options.beta, options.whittle_tol, log.arm_id);
        }
        predicted_wi.emplace(log.arm_id, p);
        observed_wi.emplace(log.arm_id, o);
    }

    // The evaluated weeks: every arm must have a row for every week.
    std::set<std::size_t> week_set;
    for (const TrajectoryLog& log : trajectories)
        for (const TrajectoryStep& step : log.steps) week_set.insert(step.week);
    std::vector<std::size_t> weeks(week_set.begin(), week_set.end());
    if (weeks.empty()) throw std::invalid_argument("trajectories contain no weeks");
    if (options.max_weeks > 0 && weeks.size() > options.max_weeks)
        weeks.resize(options.max_weeks);

    std::unordered_map<ArmId, std::unordered_map<std::size_t, int>> state_at;
    state_at.reserve(n);
    for (const TrajectoryLog& log : trajectories) {
        auto& per_week = state_at[log.arm_id];
        for (const TrajectoryStep& step : log.steps) per_week[step.week] = step.state;
    }
    for (const TrajectoryLog& log : trajectories) {
        const auto& per_week = state_at.at(log.arm_id);
        for (std::size_t week : weeks) {
            if (!per_week.contains(week))
                throw std::invalid_argument("arm " + std::to_string(log.arm_id) +
                                            " has no row for week " + std::to_string(week));
        }
    }

    EvaluateResult result;
    result.n = n;
    result.k = options.k;
    result.clusters_requested = assignment.requested_clusters;
    result.clusters_used = assignment.num_clusters;

    std::vector<double> pooled_spearman, pooled_abs, pooled_norm;
    double kendall_sum = 0.0;

    for (std::size_t week : weeks) {
        std::vector<WhittleEntry> pred_entries, obs_entries;
        pred_entries.reserve(n);
        obs_entries.reserve(n);
        for (const TrajectoryLog& log : trajectories) {
            const int state = state_at.at(log.arm_id).at(week);
            pred_entries.push_back(
                {log.arm_id, state, predicted_wi.at(log.arm_id).by_state[state]});
            obs_entries.push_back({log.arm_id, state, observed_wi.at(log.arm_id).by_state[state]});
        }
        const Ranking pred_ranking = rank_by_index(std::move(pred_entries));
        const Ranking obs_ranking = rank_by_index(std::move(obs_entries));

        WeekMetrics wm;
        wm.week = week;

        SpearmanTopK footrule = spearman_topk(pred_ranking, obs_ranking, options.k);
        wm.spearman = footrule.overall;
        wm.spearman_per_arm = std::move(footrule.per_arm);
        wm.kendall = kendall_topk(pred_ranking, obs_ranking, options.k);

        // Index-magnitude errors over the predicted top-k arms, in rank order.
        std::vector<double> top_pred_wi, top_obs_wi;
        top_pred_wi.reserve(options.k);
        top_obs_wi.reserve(options.k);
        for (std::size_t i = 0; i < options.k; ++i) {
            const ArmId id = pred_ranking.order()[i];
            const int state = state_at.at(id).at(week);
            top_pred_wi.push_back(predicted_wi.at(id).by_state[state]);
            top_obs_wi.push_back(observed_wi.at(id).by_state[state]);
        }
        wm.abs_wi = abs_wi_error(top_pred_wi, top_obs_wi);
        NormWiError norm = norm_wi_error(top_pred_wi, top_obs_wi, options.norm_epsilon);
        wm.norm_wi = norm.value;
        wm.norm_clamped = std::move(norm.clamped);
        for (std::size_t i = 0; i < options.k; ++i) {
            wm.abs_wi_per_arm.push_back(std::abs(top_pred_wi[i] - top_obs_wi[i]));
            const double denom = std::max(std::abs(top_pred_wi[i]), options.norm_epsilon);
            wm.norm_wi_per_arm.push_back(std::abs(top_pred_wi[i] - top_obs_wi[i]) / denom);
        }

        pooled_spearman.insert(pooled_spearman.end(), wm.spearman_per_arm.begin(),
                               wm.spearman_per_arm.end());
        pooled_abs.insert(pooled_abs.end(), wm.abs_wi_per_arm.begin(), wm.abs_wi_per_arm.end());
        pooled_norm.insert(pooled_norm.end(), wm.norm_wi_per_arm.begin(),
                           wm.norm_wi_per_arm.end());
        kendall_sum += wm.kendall;

        result.weekly.push_back(std::move(wm));
    }

    result.spearman_cumulative = summarize(pooled_spearman, options.bins);
    result.abs_cumulative = summarize(pooled_abs, options.bins);
    result.norm_cumulative = summarize(pooled_norm, options.bins);
    result.kendall_cumulative = kendall_sum / static_cast<double>(result.weekly.size());

    std::vector<double> rmse_values, mae_values;
    rmse_values.reserve(n);
    mae_values.reserve(n);
    for (const TrajectoryLog& log : trajectories) {
        const TransitionModel& pred = *predicted_by_arm.at(log.arm_id);
        const TransitionModel& obs = *observed_by_arm.at(log.arm_id);
        rmse_values.push_back(rmse_error(pred, obs));
        mae_values.push_back(mae_error(pred, obs));
    }
    result.rmse_report = summarize(std::move(rmse_values), options.bins);
    result.mae_report = summarize(std::move(mae_values), options.bins);

    result.observed_models = std::move(observed);
    return result;
}

} // namespace rmab
