#include "rmab/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rmab/rng.hpp"

namespace rmab {

namespace {

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

void CohortSpec::validate() const {
    if (n == 0) throw std::invalid_argument("cohort size must be positive");
    if (clusters.empty()) throw std::invalid_argument("cohort needs at least one cluster");
    if (!(prediction_noise >= 0.0))
        throw std::invalid_argument("prediction noise must be non-negative");
    if (!(initial_engaging_fraction >= 0.0 && initial_engaging_fraction <= 1.0))
        throw std::invalid_argument("initial engaging fraction must lie in [0, 1]");

    double weight_sum = 0.0;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const ClusterSpec& cluster = clusters[c];
        if (!(cluster.weight >= 0.0))
            throw std::invalid_argument("cluster " + std::to_string(c) + " has negative weight");
        if (!(cluster.spread >= 0.0))
            throw std::invalid_argument("cluster " + std::to_string(c) + " has negative spread");
        for (double center : {cluster.passive_center[0], cluster.passive_center[1],
                              cluster.active_center[0], cluster.active_center[1]}) {
            if (!(center >= 0.0 && center <= 1.0))
                throw std::invalid_argument("cluster " + std::to_string(c) +
                                            " center outside [0, 1]");
        }
        weight_sum += cluster.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9)
        throw std::invalid_argument("cluster weights must sum to 1, got " +
                                    std::to_string(weight_sum));
}

std::vector<Arm> generate_cohort(const CohortSpec& spec, std::uint64_t seed) {
    spec.validate();

    std::vector<double> cumulative;
    cumulative.reserve(spec.clusters.size());
    double acc = 0.0;
    for (const ClusterSpec& cluster : spec.clusters) {
        acc += cluster.weight;
        cumulative.push_back(acc);
    }
    cumulative.back() = 1.0; // absorb rounding in the final bucket

    Rng rng(seed);
    std::vector<Arm> arms;
    arms.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double u = rng.next_unit();
        const std::size_t cluster_idx = static_cast<std::size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        const ClusterSpec& cluster = spec.clusters[cluster_idx];

        double true_p[2][2]; // [state][action]
        for (int s = 0; s < 2; ++s) {
            true_p[s][0] = clamp_unit(cluster.passive_center[s] +
                                      rng.uniform(-cluster.spread, cluster.spread));
            true_p[s][1] = clamp_unit(cluster.active_center[s] +
                                      rng.uniform(-cluster.spread, cluster.spread));
        }
        double pred_p[2][2];
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a)
                pred_p[s][a] = clamp_unit(
                    true_p[s][a] + rng.uniform(-spec.prediction_noise, spec.prediction_noise));

        Arm arm;
        arm.arm_id = static_cast<ArmId>(i);
        arm.true_model = TransitionModel(true_p[0][0], true_p[1][0], true_p[0][1], true_p[1][1]);
        arm.predicted_model =
            TransitionModel(pred_p[0][0], pred_p[1][0], pred_p[0][1], pred_p[1][1]);
        arm.registration_rank = i;
        arm.current_state = rng.bernoulli(spec.initial_engaging_fraction) ? 1 : 0;
        arm.true_cluster = cluster_idx;
        arms.push_back(arm);
    }
    return arms;
}

} // namespace rmab
