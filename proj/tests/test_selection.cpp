#include <doctest.h>

#include "battery.hpp"
#include "divsel/selection.hpp"
#include "fixtures.hpp"

using namespace divsel;
using namespace fixtures;

TEST_CASE("binomial_capped counts exactly and respects the cap") {
    CHECK(binomial_capped(3, 2, 1000) == 3);
    CHECK(binomial_capped(12, 4, 1000) == 495);
    CHECK(binomial_capped(5, 0, 1000) == 1);
    CHECK(binomial_capped(2, 5, 1000) == 0);
    CHECK(binomial_capped(40, 20, kDefaultEnumerationCap) == std::nullopt);
    CHECK(binomial_capped(3, 2, 2) == std::nullopt);
}

TEST_CASE("resolve_subset rejects unknown and duplicate ids") {
    const Catalog catalog = scientist_catalog();
    CHECK_THROWS_AS(resolve_subset(catalog, {"x1", "x9"}), UnknownIdError);
    CHECK_THROWS_AS(resolve_subset(catalog, {"x1", "x1"}), UnknownIdError);
    const InstanceSet xs = resolve_subset(catalog, {"x3", "x1"});
    REQUIRE(xs.size() == 2);
    CHECK(xs.front()->id == "x1");   // sorted
}

TEST_CASE("score_subset evaluates the objective modes") {
    const AttributeSchema schema = scientist_schema();
    const Catalog catalog = scientist_catalog();
    const Profile profile = scientist_profile();
    const ScoringConfigs configs = scientist_configs();
    Objective objective;
    const std::vector<std::string> pair{"x1", "x3"};

    SUBCASE("inclusion-only tracks the set cumulant") {
        objective.mode = SelectionMode::inclusion_only;
        objective.mechanism = Mechanism::utilitarian;
        const SubsetScore s = score_subset(schema, catalog, pair, profile, objective, configs);
        CHECK(*s.objective_value == doctest::Approx(kPair13Util).epsilon(1e-12));
        CHECK(*s.inclusion == *s.objective_value);
        CHECK(s.diversity == 0.0);
        CHECK(s.feasible);
    }
    SUBCASE("the objective mechanism overrides the configured cumulators") {
        objective.mode = SelectionMode::inclusion_only;
        objective.mechanism = Mechanism::nash;
        ScoringConfigs skewed = configs;
        skewed.inclusion.attribute_cumulator = Mechanism::egalitarian;
        skewed.inclusion.set_cumulator = Mechanism::utilitarian;
        const SubsetScore s = score_subset(schema, catalog, pair, profile, objective, skewed);
        CHECK(*s.objective_value == doctest::Approx(kPair13Nash).epsilon(1e-12));
    }
    SUBCASE("diversity-only ignores inclusion") {
        objective.mode = SelectionMode::diversity_only;
        const SubsetScore s = score_subset(schema, catalog, pair, profile, objective, configs);
        CHECK(*s.objective_value == 0.0);
    }
    SUBCASE("constrained marks infeasibility without hiding the score") {
        objective.mode = SelectionMode::constrained;
        objective.diversity_floor = 0.5;
        const SubsetScore s = score_subset(schema, catalog, pair, profile, objective, configs);
        CHECK(!s.feasible);
        CHECK(*s.objective_value == doctest::Approx(kPair13Util).epsilon(1e-12));
        objective.diversity_floor = 0.0;
        CHECK(score_subset(schema, catalog, pair, profile, objective, configs).feasible);
    }
    SUBCASE("weighted blends the two scores") {
        objective.mode = SelectionMode::weighted;
        objective.diversity_weight = 0.25;
        objective.inclusion_weight = 0.75;
        const SubsetScore s = score_subset(schema, catalog, pair, profile, objective, configs);
        CHECK(*s.objective_value ==
              doctest::Approx(0.25 * 0.0 + 0.75 * kPair13Util).epsilon(1e-12));
    }
    SUBCASE("weighted with zero diversity weight equals inclusion-only exactly") {
        objective.mode = SelectionMode::weighted;
        objective.diversity_weight = 0.0;
        objective.inclusion_weight = 0.6;
        const SubsetScore weighted =
            score_subset(schema, catalog, pair, profile, objective, configs);
        objective.mode = SelectionMode::inclusion_only;
        const SubsetScore plain = score_subset(schema, catalog, pair, profile, objective, configs);
        CHECK(*weighted.objective_value == *plain.objective_value);   // bitwise, not approximate
    }
    SUBCASE("per-instance trace covers every member") {
        objective.mode = SelectionMode::inclusion_only;
        const SubsetScore s = score_subset(schema, catalog, pair, profile, objective, configs);
        CHECK(s.instance_inclusion.size() == 2);
        CHECK(s.attribute_inclusion.at("x1").size() == 3);
        CHECK(s.instance_diversity.at("x3") == 0.0);
    }
}

TEST_CASE("select_exhaustive finds the optimum per mechanism") {
    const AttributeSchema schema = scientist_schema();
    const Catalog catalog = scientist_catalog();
    const Profile profile = scientist_profile();
    const ScoringConfigs configs = scientist_configs();
    Objective objective;
    objective.mode = SelectionMode::inclusion_only;

    SUBCASE("egalitarian avoids the weakest pair member") {
        objective.mechanism = Mechanism::egalitarian;
        const SelectionResult r =
            select_exhaustive(schema, catalog, profile, 2, objective, configs);
        REQUIRE(r.best);
        CHECK(r.best->ids == std::vector<std::string>{"x1", "x2"});
        CHECK(*r.best->objective_value == doctest::Approx(0.53).epsilon(1e-12));
        CHECK(r.evaluated == 3);
        CHECK(r.co_optima == std::vector<std::vector<std::string>>{{"x1", "x2"}});
    }
    SUBCASE("utilitarian keeps the best average") {
        objective.mechanism = Mechanism::utilitarian;
        const SelectionResult r =
            select_exhaustive(schema, catalog, profile, 2, objective, configs);
        REQUIRE(r.best);
        CHECK(r.best->ids == std::vector<std::string>{"x1", "x3"});
        CHECK(*r.best->objective_value == doctest::Approx(kPair13Util).epsilon(1e-12));
    }
    SUBCASE("nash lands between the two") {
        objective.mechanism = Mechanism::nash;
        const SelectionResult r =
            select_exhaustive(schema, catalog, profile, 2, objective, configs);
        REQUIRE(r.best);
        CHECK(r.best->ids == std::vector<std::string>{"x1", "x3"});
        CHECK(*r.best->objective_value == doctest::Approx(kPair13Nash).epsilon(1e-12));
    }
    SUBCASE("candidate trace records every evaluated subset") {
        objective.mechanism = Mechanism::utilitarian;
        const SelectionResult r =
            select_exhaustive(schema, catalog, profile, 2, objective, configs);
        CHECK(r.candidates.size() == 3);
        CHECK(!r.trace_truncated);
    }
}

TEST_CASE("select_exhaustive reports exact ties as co-optima") {
    AttributeSchema schema = scientist_schema();
    Catalog catalog = scientist_catalog();
    // duplicate x2's annotations under a new id: {x1,x2} and {x1,x4} tie
    Instance clone = *catalog.find_instance("x2");
    clone.id = "x4";
    catalog.instances.push_back(clone);
    Objective objective;
    objective.mode = SelectionMode::inclusion_only;
    objective.mechanism = Mechanism::utilitarian;

    const SelectionResult r = select_exhaustive(schema, catalog, scientist_profile(), 2, objective,
                                                scientist_configs());
    REQUIRE(r.best);
    CHECK(r.best->ids == std::vector<std::string>{"x1", "x3"});

    objective.mechanism = Mechanism::egalitarian;
    const SelectionResult tie = select_exhaustive(schema, catalog, scientist_profile(), 2,
                                                  objective, scientist_configs());
    REQUIRE(tie.best);
    CHECK(tie.best->ids == std::vector<std::string>{"x1", "x2"});
    CHECK(tie.co_optima ==
          std::vector<std::vector<std::string>>{{"x1", "x2"}, {"x1", "x4"}});
}

TEST_CASE("select_exhaustive guards its inputs") {
    const AttributeSchema schema = scientist_schema();
    const Catalog catalog = scientist_catalog();
    const Profile profile = scientist_profile();
    const ScoringConfigs configs = scientist_configs();
    const Objective objective;

    CHECK_THROWS_AS(select_exhaustive(schema, catalog, profile, 0, objective, configs),
                    std::invalid_argument);
    CHECK_THROWS_AS(select_exhaustive(schema, catalog, profile, 4, objective, configs),
                    std::invalid_argument);
    CHECK_THROWS_AS(select_exhaustive(schema, catalog, profile, 2, objective, configs, /*cap=*/2),
                    CapExceededError);
}

TEST_CASE("constrained selection reports infeasibility instead of a subset") {
    const AttributeSchema schema = scientist_schema();
    const Catalog catalog = scientist_catalog();
    Objective objective;
    objective.mode = SelectionMode::constrained;
    objective.diversity_floor = 0.5;   // unreachable: every portrait shows one gender

    const SelectionResult r = select_exhaustive(schema, catalog, scientist_profile(), 2, objective,
                                                scientist_configs());
    CHECK(!r.best);
    CHECK(r.co_optima.empty());
    CHECK(r.best_diversity_seen == 0.0);

    const SelectionResult g = select_greedy(schema, catalog, scientist_profile(), 2, objective,
                                            scientist_configs());
    CHECK(!g.best);
}

TEST_CASE("select_greedy matches the exhaustive optimum on the worked catalog") {
    const AttributeSchema schema = scientist_schema();
    const Catalog catalog = scientist_catalog();
    const Profile profile = scientist_profile();
    const ScoringConfigs configs = scientist_configs();
    Objective objective;
    objective.mode = SelectionMode::inclusion_only;

    for (Mechanism m : kMechanisms) {
        objective.mechanism = m;
        const SelectionResult exhaustive =
            select_exhaustive(schema, catalog, profile, 2, objective, configs);
        const SelectionResult greedy =
            select_greedy(schema, catalog, profile, 2, objective, configs);
        REQUIRE(exhaustive.best);
        REQUIRE(greedy.best);
        CHECK(greedy.best->ids == exhaustive.best->ids);
        CHECK(greedy.best->objective_value == exhaustive.best->objective_value);
    }
}

TEST_CASE("select_greedy logs forward adds before swaps and stays deterministic") {
    const AttributeSchema schema = scientist_schema();
    const Catalog catalog = scientist_catalog();
    const Profile profile = scientist_profile();
    const ScoringConfigs configs = scientist_configs();
    Objective objective;
    objective.mode = SelectionMode::inclusion_only;
    objective.mechanism = Mechanism::utilitarian;

    const SelectionResult a = select_greedy(schema, catalog, profile, 2, objective, configs, 7);
    const SelectionResult b = select_greedy(schema, catalog, profile, 2, objective, configs, 7);
    REQUIRE(a.best);
    REQUIRE(b.best);
    CHECK(a.best->ids == b.best->ids);
    CHECK(a.swap_log.size() == b.swap_log.size());
    CHECK(a.seed == 7);

    REQUIRE(a.swap_log.size() >= 2);
    CHECK(a.swap_log[0].removed.empty());
    CHECK(a.swap_log[1].removed.empty());

    const SelectionResult whole = select_greedy(schema, catalog, profile, 3, objective, configs);
    REQUIRE(whole.best);
    CHECK(whole.best->ids == std::vector<std::string>{"x1", "x2", "x3"});
}

TEST_CASE("selectors and scorer agree with the brute-force oracle on random scenarios") {
    const battery::BatteryResult r = battery::run_battery(60, /*seed=*/20260816);
    INFO(r.first_failure);
    CHECK(r.failures == 0);
    CHECK(r.scenarios == 60);
}
