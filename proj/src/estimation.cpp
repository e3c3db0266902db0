#include "rmab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rmab/rng.hpp"

namespace rmab {

TransitionCounts& TransitionCounts::operator+=(const TransitionCounts& other) {
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
            for (int t = 0; t < 2; ++t) c[s][a][t] += other.c[s][a][t];
    return *this;
}

TransitionCounts count_transitions(const TrajectoryLog& log) {
    TransitionCounts counts;
    for (std::size_t i = 0; i < log.steps.size(); ++i) {
        const TrajectoryStep& step = log.steps[i];
        if ((step.state != 0 && step.state != 1) || (step.action != 0 && step.action != 1) ||
            (step.next_state != 0 && step.next_state != 1)) {
            std::ostringstream msg;
            msg << "trajectory of arm " << log.arm_id << ", step " << i
                << ": state/action/next_state must be 0 or 1, got (" << step.state << ", "
                << step.action << ", " << step.next_state << ")";
            throw std::invalid_argument(msg.str());
        }
        ++counts.c[step.state][step.action][step.next_state];
    }
    return counts;
}

PartialModel empirical_model(ArmId arm_id, const TransitionCounts& counts,
                             std::uint64_t min_support, double smoothing) {
    if (min_support < 1) throw std::invalid_argument("min_support must be at least 1");
    if (!(smoothing >= 0.0)) throw std::invalid_argument("smoothing must be non-negative");

    PartialModel model;
    model.arm_id = arm_id;
    model.counts = counts;
    for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) {
            const std::uint64_t row = counts.row_total(s, a);
            model.support[s][a] = row;
            if (row >= min_support) {
                model.p[s][a] = (static_cast<double>(counts.c[s][a][1]) + smoothing) /
                                (static_cast<double>(row) + 2.0 * smoothing);
            }
        }
    }
    return model;
}

namespace {

using Point = std::array<double, 2>;

double squared_distance(const Point& a, const Point& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

// Seeded k-means++: first center uniform, then D^2-weighted draws.
std::vector<Point> seed_centroids(const std::vector<Point>& points, std::size_t k, Rng& rng) {
    std::vector<Point> centroids;
    centroids.reserve(k);
    centroids.push_back(points[rng.next_below(points.size())]);

    std::vector<double> dist2(points.size());
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = squared_distance(points[i], centroids[0]);
            for (std::size_t c = 1; c < centroids.size(); ++c)
                best = std::min(best, squared_distance(points[i], centroids[c]));
            dist2[i] = best;
            total += best;
        }
        // total > 0 is guaranteed: k never exceeds the distinct point count.
        double target = rng.next_unit() * total;
        std::size_t chosen = points.size() - 1;
        for (std::size_t i = 0; i < points.size(); ++i) {
            target -= dist2[i];
            if (target <= 0.0) {
                chosen = i;
                break;
            }
        }
        centroids.push_back(points[chosen]);
    }
    return centroids;
}

} // namespace

ClusterAssignment cluster_passive(const std::vector<PartialModel>& models,
                                  std::size_t num_clusters, std::uint64_t seed,
                                  std::size_t max_iters, double move_tol) {
    if (num_clusters < 1) throw std::invalid_argument("need at least one cluster");
    if (models.empty()) throw std::invalid_argument("no models to cluster");

    std::vector<ArmId> incomplete;
    for (const PartialModel& model : models)
        if (!model.passive_complete()) incomplete.push_back(model.arm_id);
    if (!incomplete.empty()) {
        std::ostringstream msg;
        msg << "passive transition probabilities missing for arms:";
        for (ArmId id : incomplete) msg << ' ' << id;
        throw std::invalid_argument(msg.str());
    }

    std::vector<Point> points;
    points.reserve(models.size());
    for (const PartialModel& model : models) points.push_back({*model.p[0][0], *model.p[1][0]});

    std::vector<Point> distinct = points;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    ClusterAssignment result;
    result.requested_clusters = num_clusters;
    result.num_clusters = std::min(num_clusters, distinct.size());
    const std::size_t k = result.num_clusters;

    Rng rng(seed);
    std::vector<Point> centroids = seed_centroids(points, k, rng);
    result.cluster_of.assign(points.size(), 0);

    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // Assignment step: nearest centroid, ties to the lowest index.
        double wcss = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            std::size_t best = 0;
            double best_d = squared_distance(points[i], centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = squared_distance(points[i], centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            result.cluster_of[i] = best;
            wcss += best_d;
        }
        result.objective_history.push_back(wcss);

        // Update step: an emptied cluster keeps its previous centroid.
        std::vector<Point> sums(k, {0.0, 0.0});
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            sums[result.cluster_of[i]][0] += points[i][0];
            sums[result.cluster_of[i]][1] += points[i][1];
            ++sizes[result.cluster_of[i]];
        }
        double max_move = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] == 0) continue;
            const Point next = {sums[c][0] / static_cast<double>(sizes[c]),
                                sums[c][1] / static_cast<double>(sizes[c])};
            max_move = std::max(max_move, std::sqrt(squared_distance(next, centroids[c])));
            centroids[c] = next;
        }
        if (max_move < move_tol) break;
    }

    result.centroids = centroids;
    result.pooled.assign(k, TransitionCounts{});
    for (std::size_t i = 0; i < models.size(); ++i)
        result.pooled[result.cluster_of[i]] += models[i].counts;

    result.pooled_active.assign(k, {});
    for (std::size_t c = 0; c < k; ++c) {
        for (int s = 0; s < 2; ++s) {
            const std::uint64_t row = result.pooled[c].row_total(s, 1);
            if (row > 0)
                result.pooled_active[c][s] =
                    static_cast<double>(result.pooled[c].c[s][1][1]) / static_cast<double>(row);
        }
    }
    return result;
}

std::vector<ImputedModel> impute_active(const ClusterAssignment& assignment,
                                        const std::vector<PartialModel>& models,
                                        std::uint64_t min_support) {
    if (assignment.cluster_of.size() != models.size())
        throw std::invalid_argument("cluster assignment does not match the model list");
    if (min_support < 1) throw std::invalid_argument("min_support must be at least 1");

    std::vector<ImputedModel> completed;
    completed.reserve(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
        const PartialModel& model = models[i];
        if (!model.passive_complete())
            throw std::invalid_argument("arm " + std::to_string(model.arm_id) +
                                        " lacks passive transition probabilities");
        const std::size_t cluster = assignment.cluster_of[i];

        double p[2][2];
        bool imputed[2][2] = {};
        p[0][0] = *model.p[0][0];
        p[1][0] = *model.p[1][0];
        for (int s = 0; s < 2; ++s) {
            if (model.p[s][1].has_value()) {
                p[s][1] = *model.p[s][1];
                continue;
            }
            const std::uint64_t pooled_row = assignment.pooled[cluster].row_total(s, 1);
            if (pooled_row < min_support || !assignment.pooled_active[cluster][s].has_value()) {
                std::ostringstream msg;
                msg << "cluster " << cluster << " has pooled active support " << pooled_row
                    << " < " << min_support << " for state " << s
                    << "; fewer clusters would pool more data";
                throw UnresolvableCellError(cluster, s, msg.str());
            }
            p[s][1] = *assignment.pooled_active[cluster][s];
            imputed[s][1] = true;
        }

        ImputedModel out;
        out.arm_id = model.arm_id;
        out.model = TransitionModel(p[0][0], p[1][0], p[0][1], p[1][1]);
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a) out.imputed[s][a] = imputed[s][a];
        completed.push_back(out);
    }
    return completed;
}

} // namespace rmab
