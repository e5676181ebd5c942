#pragma once

// The three-portrait scientist catalog used across the test files, built in
// code so unit tests do not depend on the data directory. Mirrors
// data/scientist.{config.json,catalog.jsonl}.

#include "divsel/io.hpp"
#include "divsel/selection.hpp"

namespace fixtures {

using namespace divsel;

inline AttributeSchema scientist_schema() {
    AttributeSchema schema;
    schema.group_types.push_back({"gender", GroupKind::categorical, std::nullopt, {}});
    schema.group_types.push_back({"skin", GroupKind::ordinal, 6.0, {}});
    schema.group_types.push_back({"age", GroupKind::numeric, 100.0, {}});
    schema.measured_attributes.emplace_back("gender", "woman");
    schema.measured_attributes.emplace_back("gender", "man");
    schema.measured_attributes.emplace_back("gender", "nonbinary");
    return schema;
}

inline Catalog scientist_catalog() {
    Catalog catalog;
    catalog.query = {"scientist", 1.0, 1.0};
    // attributes in group-name order, matching the parsed form of the data files
    auto portrait = [](std::string xid, std::string iid, std::int64_t skin, double age) {
        Item item;
        item.id = std::move(iid);
        item.relevance = 1.0;
        item.attributes.emplace_back("age", age);
        item.attributes.emplace_back("gender", "woman");
        item.attributes.emplace_back("skin", skin);
        return Instance{std::move(xid), {std::move(item)}};
    };
    catalog.instances.push_back(portrait("x1", "i1", 5, 31.0));
    catalog.instances.push_back(portrait("x2", "i2", 4, 23.0));
    catalog.instances.push_back(portrait("x3", "i3", 3, 47.0));
    return catalog;
}

inline Profile scientist_profile() {
    Profile profile;
    profile.attributes.emplace_back("age", 70.0);
    profile.attributes.emplace_back("gender", "woman");
    profile.attributes.emplace_back("skin", std::int64_t{6});
    return profile;
}

inline ScoringConfigs scientist_configs() {
    ScoringConfigs configs;
    for (const AttributeRef& a : scientist_schema().measured_attributes)
        configs.presence.targets.push_back({a, 1.0 / 3.0, 1.0});
    return configs;
}

// per-instance inclusion cumulants, frozen from an independent high-precision
// evaluation of {gender 1, skin (6-|s-6|)/6, age 1-|a-70|/100}
inline constexpr double kX1Util = 0.8144444444444444;
inline constexpr double kX2Util = 0.7322222222222221;
inline constexpr double kX3Util = 0.7566666666666667;
inline constexpr double kX1Egal = 0.61;
inline constexpr double kX2Egal = 0.53;
inline constexpr double kX3Egal = 0.50;
inline constexpr double kX1Nash = 0.7980857007544369;
inline constexpr double kX2Nash = 0.7069600458989154;
inline constexpr double kX3Nash = 0.7274786348791457;

// pair set-inclusion cumulants over instance cumulants
inline constexpr double kPair12Util = 0.7733333333333332;
inline constexpr double kPair13Util = 0.7855555555555556;
inline constexpr double kPair23Util = 0.7444444444444445;
inline constexpr double kPair12Nash = 0.7511422659101435;
inline constexpr double kPair13Nash = 0.7619647604065454;
inline constexpr double kPair23Nash = 0.7171459608089842;

}  // namespace fixtures
