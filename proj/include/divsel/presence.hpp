#pragma once

#include <vector>

#include "divsel/schema.hpp"
#include "divsel/social_choice.hpp"

namespace divsel {

/// How an attribute's presence in an instance or set is measured.
/// item_proportion: matching items over all items. instance_proportion:
/// matching instances over all instances; over a single instance this
/// degenerates to the indicator of any item matching.
enum class PresenceMeasurement { item_proportion, instance_proportion };

/// How a measured presence is scored against its target bounds.
/// indicator: 1 inside [lower, upper], else 0. trapezoid: 1 inside the
/// bounds, falling linearly to 0 at measured 0 on the left and measured 1 on
/// the right.
enum class PresenceFunction { indicator, trapezoid };

/// How per-attribute presence scores aggregate into one diversity score.
enum class PresenceAggregator { min, max, mean };

/// How a set's diversity is assembled: pooled scores the union of all items
/// as one virtual instance; per_instance cumulates instance diversity scores
/// with a social-choice mechanism.
enum class SetDiversityMode { pooled, per_instance };

const char* to_string(PresenceMeasurement m);
const char* to_string(PresenceFunction f);
const char* to_string(PresenceAggregator g);
const char* to_string(SetDiversityMode m);
std::optional<PresenceMeasurement> presence_measurement_from_string(std::string_view name);
std::optional<PresenceFunction> presence_function_from_string(std::string_view name);
std::optional<PresenceAggregator> presence_aggregator_from_string(std::string_view name);
std::optional<SetDiversityMode> set_diversity_mode_from_string(std::string_view name);

/// Target presence band [lower, upper] for one measured attribute.
struct PresenceTarget {
    AttributeRef attribute;
    double lower = 0.0;
    double upper = 1.0;

    bool operator==(const PresenceTarget&) const = default;
};

struct PresenceConfig {
    std::vector<PresenceTarget> targets;   // exactly one per measured attribute
    PresenceMeasurement measurement = PresenceMeasurement::item_proportion;
    PresenceFunction function = PresenceFunction::indicator;
    PresenceAggregator aggregator = PresenceAggregator::min;
    SetDiversityMode set_mode = SetDiversityMode::pooled;

    const PresenceTarget* target_for(const AttributeRef& attribute) const;

    bool operator==(const PresenceConfig&) const = default;
};

/// Validates targets against the schema: bounds ordered within [0,1], every
/// measured attribute covered exactly once, no target for an unmeasured
/// attribute.
ValidationResult validate_presence_config(const AttributeSchema& schema,
                                          const PresenceConfig& config);

/// Measured presence of `a` in one instance, in [0,1].
double measure_presence(const AttributeSchema& schema, const AttributeRef& a, const Instance& x,
                        PresenceMeasurement measurement);

/// Measured presence of `a` across a nonempty set of instances: pooled item
/// proportion, or the fraction of instances containing a matching item.
double measure_presence(const AttributeSchema& schema, const AttributeRef& a,
                        const InstanceSet& instances, PresenceMeasurement measurement);

/// Scores a measured presence against its target band.
double presence_score(double measured, const PresenceTarget& target, PresenceFunction function);

double presence_score(const AttributeSchema& schema, const AttributeRef& a, const Instance& x,
                      const PresenceTarget& target, const PresenceConfig& config);

/// Aggregate presence score over every measured attribute, in [0,1].
/// The min aggregator realizes maximin: the lowest-scoring attribute decides.
double diversity_score(const AttributeSchema& schema, const Instance& x,
                       const PresenceConfig& config);

/// Set diversity per config.set_mode; `cumulation` applies in per-instance
/// mode only. Throws std::invalid_argument on an empty set.
double set_diversity(const AttributeSchema& schema, const InstanceSet& instances,
                     const PresenceConfig& config, Mechanism cumulation);

/// Per-instance diversity scores, the vector per-instance mode cumulates.
std::vector<double> instance_diversities(const AttributeSchema& schema,
                                         const InstanceSet& instances,
                                         const PresenceConfig& config);

}  // namespace divsel
