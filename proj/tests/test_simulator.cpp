#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "rmab/cohort.hpp"
#include "rmab/study.hpp"

using namespace rmab;

namespace {

CohortSpec two_cluster_spec(std::size_t n, double spread, double noise) {
    CohortSpec spec;
    spec.n = n;
    spec.prediction_noise = noise;
    spec.initial_engaging_fraction = 0.5;
    spec.clusters = {
        {0.5, {0.2, 0.4}, {0.6, 0.8}, spread},
        {0.5, {0.6, 0.7}, {0.7, 0.9}, spread},
    };
    return spec;
}

bool models_equal(const TransitionModel& a, const TransitionModel& b) {
    for (int s = 0; s < 2; ++s)
        for (int x = 0; x < 2; ++x)
            if (a.prob(s, x) != b.prob(s, x)) return false;
    return true;
}

} // namespace

TEST_CASE("cohort spec validation") {
    CohortSpec spec = two_cluster_spec(10, 0.0, 0.0);
    CHECK_NOTHROW(spec.validate());

    CohortSpec no_arms = spec;
    no_arms.n = 0;
    CHECK_THROWS_AS(no_arms.validate(), std::invalid_argument);

    CohortSpec bad_weights = spec;
    bad_weights.clusters[0].weight = 0.8;
    CHECK_THROWS_AS(bad_weights.validate(), std::invalid_argument);

    CohortSpec bad_center = spec;
    bad_center.clusters[0].passive_center[0] = 1.5;
    CHECK_THROWS_AS(bad_center.validate(), std::invalid_argument);

    CohortSpec bad_noise = spec;
    bad_noise.prediction_noise = -0.1;
    CHECK_THROWS_AS(bad_noise.validate(), std::invalid_argument);

    CHECK_THROWS_AS(generate_cohort(bad_weights, 1), std::invalid_argument);
}

TEST_CASE("zero spread and zero noise reproduce the cluster centers exactly") {
    CohortSpec spec;
    spec.n = 50;
    spec.prediction_noise = 0.0;
    spec.initial_engaging_fraction = 1.0;
    spec.clusters = {{1.0, {0.3, 0.6}, {0.5, 0.9}, 0.0}};

    for (const Arm& arm : generate_cohort(spec, 42)) {
        CHECK(arm.true_model.prob(0, 0) == 0.3);
        CHECK(arm.true_model.prob(1, 0) == 0.6);
        CHECK(arm.true_model.prob(0, 1) == 0.5);
        CHECK(arm.true_model.prob(1, 1) == 0.9);
        CHECK(models_equal(arm.true_model, arm.predicted_model));
        CHECK(arm.current_state == 1);
    }
}

TEST_CASE("equal-weight clusters split the cohort within binomial bounds") {
    const std::size_t n = 10000;
    const CohortSpec spec = two_cluster_spec(n, 0.02, 0.0);
    const auto arms = generate_cohort(spec, 7);

    std::size_t first = 0;
    for (const Arm& arm : arms)
        if (arm.true_cluster == 0) ++first;
    const double half = static_cast<double>(n) / 2.0;
    const double slack = 3.0 * std::sqrt(static_cast<double>(n) * 0.25);
    CHECK(std::abs(static_cast<double>(first) - half) <= slack);
}

TEST_CASE("cohort generation is deterministic per seed") {
    const CohortSpec spec = two_cluster_spec(200, 0.05, 0.1);
    const auto a = generate_cohort(spec, 11);
    const auto b = generate_cohort(spec, 11);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].arm_id == b[i].arm_id);
        CHECK(models_equal(a[i].true_model, b[i].true_model));
        CHECK(models_equal(a[i].predicted_model, b[i].predicted_model));
        CHECK(a[i].current_state == b[i].current_state);
    }

    const auto c = generate_cohort(spec, 12);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        any_difference = any_difference || !models_equal(a[i].true_model, c[i].true_model);
    CHECK(any_difference);
}

TEST_CASE("csoc never selects and never acts") {
    const auto arms = generate_cohort(two_cluster_spec(40, 0.02, 0.0), 3);
    StudyConfig config;
    config.weeks = 4;
    config.budget_k = 10;
    config.policy = Policy::kCsoc;
    config.seed = 5;

    const StudyLog log = run_study(arms, config);
    CHECK(log.total_service_calls() == 0);
    for (const WeekRecord& week : log.weeks) {
        CHECK(week.selected.empty());
        for (const Transition& t : week.transitions) CHECK(t.action == 0);
    }
}

TEST_CASE("budget at least n activates every arm") {
    const auto arms = generate_cohort(two_cluster_spec(25, 0.02, 0.0), 3);
    for (Policy policy : {Policy::kWhittle, Policy::kRandom, Policy::kRoundRobin}) {
        StudyConfig config;
        config.weeks = 2;
        config.budget_k = 40; // exceeds n
        config.policy = policy;
        config.seed = 9;
        const StudyLog log = run_study(arms, config);
        for (const WeekRecord& week : log.weeks) {
            CHECK(week.selected.size() == arms.size());
            for (const Transition& t : week.transitions) CHECK(t.action == 1);
        }
    }
}

TEST_CASE("deterministic dynamics follow the transition image regardless of seed") {
    // All-or-nothing probabilities: passive pins the state at 0, active at 1.
    std::vector<Arm> arms;
    for (int i = 0; i < 6; ++i) {
        Arm arm;
        arm.arm_id = i;
        arm.true_model = TransitionModel(0.0, 0.0, 1.0, 1.0);
        arm.predicted_model = arm.true_model;
        arm.registration_rank = static_cast<std::size_t>(i);
        arm.current_state = i % 2;
        arms.push_back(arm);
    }
    for (std::uint64_t seed : {1ull, 99ull}) {
        StudyConfig config;
        config.weeks = 1;
        config.budget_k = 3;
        config.policy = Policy::kRoundRobin;
        config.seed = seed;
        const StudyLog log = run_study(arms, config);
        for (const Transition& t : log.weeks[0].transitions)
            CHECK(t.next_state == (t.action == 1 ? 1 : 0));
    }
}

TEST_CASE("round robin cycles by registration rank") {
    std::vector<Arm> arms;
    for (int i = 0; i < 5; ++i) {
        Arm arm;
        arm.arm_id = 10 + i;
        arm.true_model = TransitionModel(0.5, 0.5, 0.5, 0.5);
        arm.predicted_model = arm.true_model;
        arm.registration_rank = static_cast<std::size_t>(4 - i); // reverse of id order
        arm.current_state = 0;
        arms.push_back(arm);
    }
    StudyConfig config;
    config.weeks = 3;
    config.budget_k = 2;
    config.policy = Policy::kRoundRobin;
    config.seed = 1;

    const StudyLog log = run_study(arms, config);
    // Registration order is ids 14, 13, 12, 11, 10; the budget walks it
    // cyclically: (14,13), (12,11), (10,14).
    CHECK(log.weeks[0].selected == std::vector<ArmId>{14, 13});
    CHECK(log.weeks[1].selected == std::vector<ArmId>{12, 11});
    CHECK(log.weeks[2].selected == std::vector<ArmId>{10, 14});
}

TEST_CASE("random policy selects k distinct arms and logs its permutation") {
    const auto arms = generate_cohort(two_cluster_spec(30, 0.02, 0.0), 3);
    StudyConfig config;
    config.weeks = 5;
    config.budget_k = 12;
    config.policy = Policy::kRandom;
    config.seed = 17;

    const StudyLog log = run_study(arms, config);
    for (const WeekRecord& week : log.weeks) {
        const std::set<ArmId> unique(week.selected.begin(), week.selected.end());
        CHECK(unique.size() == 12);
        REQUIRE(week.policy_order.size() == arms.size());
        CHECK(std::equal(week.selected.begin(), week.selected.end(),
                         week.policy_order.begin()));
        const std::set<ArmId> all(week.policy_order.begin(), week.policy_order.end());
        CHECK(all.size() == arms.size());
    }
}

TEST_CASE("with-replacement sampling can repeat draws but never repeats calls") {
    const auto arms = generate_cohort(two_cluster_spec(10, 0.02, 0.0), 3);
    StudyConfig config;
    config.weeks = 50;
    config.budget_k = 8;
    config.policy = Policy::kRandom;
    config.random_with_replacement = true;
    config.seed = 23;

    const StudyLog log = run_study(arms, config);
    bool saw_collision = false;
    for (const WeekRecord& week : log.weeks) {
        const std::set<ArmId> unique(week.selected.begin(), week.selected.end());
        CHECK(unique.size() == week.selected.size());
        CHECK(week.selected.size() <= 8);
        saw_collision = saw_collision || week.selected.size() < 8;
    }
    // With n = 10 and 8 draws per week over 50 weeks, collisions are certain.
    CHECK(saw_collision);
}

TEST_CASE("study execution is deterministic and budget-feasible") {
    const auto arms = generate_cohort(two_cluster_spec(60, 0.03, 0.05), 21);
    for (Policy policy : {Policy::kWhittle, Policy::kRandom, Policy::kRoundRobin}) {
        StudyConfig config;
        config.weeks = 6;
        config.budget_k = 7;
        config.policy = policy;
        config.seed = 31;

        const StudyLog first = run_study(arms, config);
        const StudyLog second = run_study(arms, config);
        REQUIRE(first.weeks.size() == second.weeks.size());
        for (std::size_t w = 0; w < first.weeks.size(); ++w) {
            CHECK(first.weeks[w].selected == second.weeks[w].selected);
            for (std::size_t i = 0; i < first.weeks[w].transitions.size(); ++i)
                CHECK(first.weeks[w].transitions[i].next_state ==
                      second.weeks[w].transitions[i].next_state);

            // Budget feasibility and action consistency.
            CHECK(first.weeks[w].selected.size() <= config.budget_k);
            const std::set<ArmId> selected(first.weeks[w].selected.begin(),
                                           first.weeks[w].selected.end());
            for (const Transition& t : first.weeks[w].transitions)
                CHECK(t.action == (selected.count(t.arm_id) ? 1 : 0));
        }
    }
}

TEST_CASE("weekly engaging counts match the landed states") {
    const auto arms = generate_cohort(two_cluster_spec(80, 0.05, 0.0), 5);
    StudyConfig config;
    config.weeks = 5;
    config.budget_k = 10;
    config.policy = Policy::kWhittle;
    config.seed = 13;

    const StudyLog log = run_study(arms, config);
    for (const WeekRecord& week : log.weeks) {
        std::size_t engaged = 0;
        for (const Transition& t : week.transitions) engaged += t.next_state;
        CHECK(week.engaging_after == engaged);
    }
}

TEST_CASE("states chain across weeks") {
    const auto arms = generate_cohort(two_cluster_spec(15, 0.05, 0.0), 5);
    StudyConfig config;
    config.weeks = 8;
    config.budget_k = 4;
    config.policy = Policy::kRandom;
    config.seed = 77;

    const StudyLog log = run_study(arms, config);
    for (std::size_t w = 0; w + 1 < log.weeks.size(); ++w)
        for (std::size_t i = 0; i < arms.size(); ++i)
            CHECK(log.weeks[w].transitions[i].next_state ==
                  log.weeks[w + 1].transitions[i].state);
}

TEST_CASE("zero-week study yields an empty log") {
    const auto arms = generate_cohort(two_cluster_spec(5, 0.0, 0.0), 2);
    StudyConfig config;
    config.weeks = 0;
    config.budget_k = 2;
    config.policy = Policy::kRandom;
    config.seed = 4;
    const StudyLog log = run_study(arms, config);
    CHECK(log.weeks.empty());
    CHECK(log.total_engaging_weeks() == 0);
}

TEST_CASE("engagement drops prevented") {
    const auto arms = generate_cohort(two_cluster_spec(30, 0.02, 0.0), 19);
    StudyConfig config;
    config.weeks = 4;
    config.budget_k = 6;
    config.policy = Policy::kWhittle;
    config.seed = 3;
    const StudyLog policy_log = run_study(arms, config);

    CHECK(engagement_drops_prevented(policy_log, policy_log) == 0.0);

    StudyConfig csoc_config = config;
    csoc_config.policy = Policy::kCsoc;
    const StudyLog csoc_log = run_study(arms, csoc_config);
    const double prevented = engagement_drops_prevented(policy_log, csoc_log);
    CHECK(prevented == static_cast<double>(csoc_log.total_engagement_drops()) -
                           static_cast<double>(policy_log.total_engagement_drops()));

    StudyConfig longer = csoc_config;
    longer.weeks = 5;
    const StudyLog mismatched = run_study(arms, longer);
    CHECK_THROWS_AS(engagement_drops_prevented(policy_log, mismatched), std::invalid_argument);
}

TEST_CASE("engagement drops prevented on hand-built logs") {
    // Three arms, two weeks. Policy log has one drop, csoc log has three.
    const auto make_log = [](std::vector<std::vector<int>> states_by_week) {
        StudyLog log;
        log.cohort_size = 3;
        for (std::size_t w = 0; w < states_by_week.size(); ++w) {
            WeekRecord week;
            week.week = w;
            for (int i = 0; i < 3; ++i) {
                const int s = states_by_week[w][static_cast<std::size_t>(i)];
                const int next = states_by_week[w][static_cast<std::size_t>(i) + 3];
                week.transitions.push_back({i, s, 0, next});
            }
            log.weeks.push_back(week);
        }
        return log;
    };
    // Each row holds (state arm0..arm2, next_state arm0..arm2).
    const StudyLog policy_log = make_log({{1, 1, 0, 1, 0, 0}, {1, 0, 0, 1, 0, 1}});
    const StudyLog csoc_log = make_log({{1, 1, 1, 0, 0, 1}, {0, 0, 1, 0, 0, 0}});
    CHECK(policy_log.total_engagement_drops() == 1);
    CHECK(csoc_log.total_engagement_drops() == 3);
    CHECK(engagement_drops_prevented(policy_log, csoc_log) == 2.0);
}

TEST_CASE("per-call normalization divides by the policy log's service calls") {
    const auto arms = generate_cohort(two_cluster_spec(20, 0.02, 0.0), 19);
    StudyConfig config;
    config.weeks = 4;
    config.budget_k = 5;
    config.policy = Policy::kRandom;
    config.seed = 3;
    const StudyLog policy_log = run_study(arms, config);

    StudyConfig csoc_config = config;
    csoc_config.policy = Policy::kCsoc;
    const StudyLog csoc_log = run_study(arms, csoc_config);

    const double raw = engagement_drops_prevented(policy_log, csoc_log);
    const double per_call = engagement_drops_prevented(policy_log, csoc_log, true);
    CHECK(per_call == doctest::Approx(raw / 20.0)); // 4 weeks * 5 calls
    CHECK_THROWS_AS(engagement_drops_prevented(csoc_log, csoc_log, true),
                    std::invalid_argument);
}

TEST_CASE("whittle policy prefers the treatable arms") {
    // One cluster has a strong active effect, the other none; with accurate
    // predictions the whittle policy should focus calls on the treatable
    // cluster.
    CohortSpec spec;
    spec.n = 60;
    spec.prediction_noise = 0.0;
    spec.initial_engaging_fraction = 0.0;
    spec.clusters = {
        {0.5, {0.3, 0.3}, {0.95, 0.95}, 0.0}, // strong treatment effect
        {0.5, {0.3, 0.3}, {0.3, 0.3}, 0.0},   // no effect at all
    };
    const auto arms = generate_cohort(spec, 8);

    StudyConfig config;
    config.weeks = 6;
    config.budget_k = 10;
    config.policy = Policy::kWhittle;
    config.seed = 44;
    const StudyLog log = run_study(arms, config);

    std::size_t treatable_calls = 0, total_calls = 0;
    for (const WeekRecord& week : log.weeks) {
        for (ArmId id : week.selected) {
            ++total_calls;
            if (arms[static_cast<std::size_t>(id)].true_cluster == 0) ++treatable_calls;
        }
    }
    CHECK(total_calls == 60);
    CHECK(treatable_calls == total_calls);
}
