#include "divsel/presence.hpp"

#include <algorithm>
#include <stdexcept>

namespace divsel {

const char* to_string(PresenceMeasurement m) {
    return m == PresenceMeasurement::item_proportion ? "item-proportion" : "instance-proportion";
}

const char* to_string(PresenceFunction f) {
    return f == PresenceFunction::indicator ? "indicator" : "trapezoid";
}

const char* to_string(PresenceAggregator g) {
    switch (g) {
        case PresenceAggregator::min: return "min";
        case PresenceAggregator::max: return "max";
        case PresenceAggregator::mean: return "mean";
    }
    return "?";
}

const char* to_string(SetDiversityMode m) {
    return m == SetDiversityMode::pooled ? "pooled" : "per-instance";
}

std::optional<PresenceMeasurement> presence_measurement_from_string(std::string_view name) {
    if (name == "item-proportion") return PresenceMeasurement::item_proportion;
    if (name == "instance-proportion") return PresenceMeasurement::instance_proportion;
    return std::nullopt;
}

std::optional<PresenceFunction> presence_function_from_string(std::string_view name) {
    if (name == "indicator") return PresenceFunction::indicator;
    if (name == "trapezoid") return PresenceFunction::trapezoid;
    return std::nullopt;
}

std::optional<PresenceAggregator> presence_aggregator_from_string(std::string_view name) {
    if (name == "min") return PresenceAggregator::min;
    if (name == "max") return PresenceAggregator::max;
    if (name == "mean") return PresenceAggregator::mean;
    return std::nullopt;
}

std::optional<SetDiversityMode> set_diversity_mode_from_string(std::string_view name) {
    if (name == "pooled") return SetDiversityMode::pooled;
    if (name == "per-instance") return SetDiversityMode::per_instance;
    return std::nullopt;
}

const PresenceTarget* PresenceConfig::target_for(const AttributeRef& attribute) const {
    for (const auto& t : targets)
        if (t.attribute == attribute) return &t;
    return nullptr;
}

ValidationResult validate_presence_config(const AttributeSchema& schema,
                                          const PresenceConfig& config) {
    ValidationResult result;
    if (schema.measured_attributes.empty())
        result.add("presence", "no measured attributes: diversity is undefined");
    for (const auto& target : config.targets) {
        const std::string where = "target " + attribute_label(target.attribute);
        if (!(target.lower >= 0.0 && target.lower <= target.upper && target.upper <= 1.0))
            result.add(where, "bounds must satisfy 0 <= lower <= upper <= 1");
        if (std::find(schema.measured_attributes.begin(), schema.measured_attributes.end(),
                      target.attribute) == schema.measured_attributes.end())
            result.add(where, "target for an attribute that is not measured");
    }
    for (const auto& ref : schema.measured_attributes) {
        std::size_t count = 0;
        for (const auto& target : config.targets)
            if (target.attribute == ref) ++count;
        if (count == 0)
            result.add("presence", "no target for measured attribute " + attribute_label(ref));
        else if (count > 1)
            result.add("presence", "multiple targets for " + attribute_label(ref));
    }
    return result;
}

double measure_presence(const AttributeSchema& schema, const AttributeRef& a, const Instance& x,
                        PresenceMeasurement measurement) {
    if (x.items.empty()) throw std::invalid_argument("measure_presence: instance has no items");
    std::size_t matching = 0;
    for (const auto& item : x.items) matching += attribute_indicator(schema, a, item);
    if (measurement == PresenceMeasurement::instance_proportion) return matching > 0 ? 1.0 : 0.0;
    return static_cast<double>(matching) / static_cast<double>(x.items.size());
}

double measure_presence(const AttributeSchema& schema, const AttributeRef& a,
                        const InstanceSet& instances, PresenceMeasurement measurement) {
    if (instances.empty()) throw std::invalid_argument("measure_presence: empty instance set");
    if (measurement == PresenceMeasurement::instance_proportion) {
        std::size_t containing = 0;
        for (const Instance* x : instances) {
            for (const auto& item : x->items) {
                if (attribute_indicator(schema, a, item) == 1) {
                    ++containing;
                    break;
                }
            }
        }
        return static_cast<double>(containing) / static_cast<double>(instances.size());
    }
    std::size_t matching = 0;
    std::size_t total = 0;
    for (const Instance* x : instances) {
        total += x->items.size();
        for (const auto& item : x->items) matching += attribute_indicator(schema, a, item);
    }
    if (total == 0) throw std::invalid_argument("measure_presence: set has no items");
    return static_cast<double>(matching) / static_cast<double>(total);
}

double presence_score(double measured, const PresenceTarget& target, PresenceFunction function) {
    if (measured >= target.lower && measured <= target.upper) return 1.0;
    if (function == PresenceFunction::indicator) return 0.0;
    if (measured < target.lower) {
        // left ramp from (0, 0) up to (lower, 1)
        if (target.lower <= 0.0) return 0.0;
        return std::max(0.0, measured / target.lower);
    }
    // right ramp from (upper, 1) down to (1, 0)
    const double width = 1.0 - target.upper;
    if (width <= 0.0) return 0.0;
    return std::max(0.0, 1.0 - (measured - target.upper) / width);
}

namespace {

const PresenceTarget& require_target(const PresenceConfig& config, const AttributeRef& a) {
    const PresenceTarget* target = config.target_for(a);
    if (target == nullptr)
        throw std::invalid_argument("no presence target for " + attribute_label(a));
    return *target;
}

double aggregate(const std::vector<double>& scores, PresenceAggregator aggregator) {
    if (scores.empty())
        throw std::invalid_argument("diversity_score: schema has no measured attributes");
    switch (aggregator) {
        case PresenceAggregator::min: return *std::min_element(scores.begin(), scores.end());
        case PresenceAggregator::max: return *std::max_element(scores.begin(), scores.end());
        case PresenceAggregator::mean: {
            double sum = 0.0;
            for (double s : scores) sum += s;
            return sum / static_cast<double>(scores.size());
        }
    }
    throw std::invalid_argument("unknown aggregator");
}

}  // namespace

double presence_score(const AttributeSchema& schema, const AttributeRef& a, const Instance& x,
                      const PresenceTarget& target, const PresenceConfig& config) {
    return presence_score(measure_presence(schema, a, x, config.measurement), target,
                          config.function);
}

double diversity_score(const AttributeSchema& schema, const Instance& x,
                       const PresenceConfig& config) {
    std::vector<double> scores;
    scores.reserve(schema.measured_attributes.size());
    for (const auto& a : schema.measured_attributes)
        scores.push_back(presence_score(schema, a, x, require_target(config, a), config));
    return aggregate(scores, config.aggregator);
}

std::vector<double> instance_diversities(const AttributeSchema& schema,
                                         const InstanceSet& instances,
                                         const PresenceConfig& config) {
    std::vector<double> scores;
    scores.reserve(instances.size());
    for (const Instance* x : instances) scores.push_back(diversity_score(schema, *x, config));
    return scores;
}

double set_diversity(const AttributeSchema& schema, const InstanceSet& instances,
                     const PresenceConfig& config, Mechanism cumulation) {
    if (instances.empty()) throw std::invalid_argument("set_diversity: empty instance set");
    if (config.set_mode == SetDiversityMode::per_instance)
        return cumulate(instance_diversities(schema, instances, config), cumulation);
    std::vector<double> scores;
    scores.reserve(schema.measured_attributes.size());
    for (const auto& a : schema.measured_attributes) {
        const double measured = measure_presence(schema, a, instances, config.measurement);
        scores.push_back(presence_score(measured, require_target(config, a), config.function));
    }
    return aggregate(scores, config.aggregator);
}

}  // namespace divsel
