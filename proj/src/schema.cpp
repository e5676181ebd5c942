#include "divsel/schema.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace divsel {

const char* to_string(GroupKind kind) {
    switch (kind) {
        case GroupKind::categorical: return "categorical";
        case GroupKind::ordinal: return "ordinal";
        case GroupKind::numeric: return "numeric";
        case GroupKind::composite: return "composite";
    }
    return "?";
}

std::optional<GroupKind> group_kind_from_string(std::string_view name) {
    if (name == "categorical") return GroupKind::categorical;
    if (name == "ordinal") return GroupKind::ordinal;
    if (name == "numeric") return GroupKind::numeric;
    if (name == "composite") return GroupKind::composite;
    return std::nullopt;
}

AttributeRef::AttributeRef(std::string group, AttributeValue value) {
    components.emplace_back(std::move(group), std::move(value));
}

const std::string& AttributeRef::group() const {
    if (components.size() != 1)
        throw std::logic_error("group() called on a non-unitary attribute");
    return components.front().first;
}

const AttributeValue& AttributeRef::value() const {
    if (components.size() != 1)
        throw std::logic_error("value() called on a non-unitary attribute");
    return components.front().second;
}

std::string value_label(const AttributeValue& value) {
    struct Labeler {
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(std::int64_t level) const { return std::to_string(level); }
        std::string operator()(double v) const {
            char buf[32];
            if (std::floor(v) == v && std::abs(v) < 1e15) {
                std::snprintf(buf, sizeof(buf), "%.0f", v);
                return buf;
            }
            // shortest representation that round-trips, stable across runs
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            double back = std::strtod(buf, nullptr);
            for (int prec = 1; prec < 17; ++prec) {
                char shorter[32];
                std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
                if (std::strtod(shorter, nullptr) == back) return shorter;
            }
            return buf;
        }
        std::string operator()(const CompositeValue& m) const {
            std::string out = "{";
            bool first = true;
            for (const auto& [k, v] : m) {
                if (!first) out += ",";
                out += k + "=" + v;
                first = false;
            }
            return out + "}";
        }
    };
    return std::visit(Labeler{}, value);
}

std::string attribute_label(const AttributeRef& ref) {
    std::string out;
    for (const auto& [group, value] : ref.components) {
        if (!out.empty()) out += "&";
        out += group + ":" + value_label(value);
    }
    return out;
}

const GroupType* AttributeSchema::find_group(std::string_view name) const {
    for (const auto& g : group_types)
        if (g.name == name) return &g;
    return nullptr;
}

const AttributeRef* Item::attribute_for(std::string_view group) const {
    for (const auto& a : attributes)
        if (a.components.size() == 1 && a.components.front().first == group) return &a;
    return nullptr;
}

const AttributeRef* Profile::attribute_for(std::string_view group) const {
    for (const auto& a : attributes)
        if (a.components.size() == 1 && a.components.front().first == group) return &a;
    return nullptr;
}

const Instance* Catalog::find_instance(std::string_view id) const {
    for (const auto& x : instances)
        if (x.id == id) return &x;
    return nullptr;
}

void ValidationResult::add(std::string where, std::string message) {
    violations.push_back({std::move(where), std::move(message)});
}

void ValidationResult::merge(ValidationResult other) {
    for (auto& v : other.violations) violations.push_back(std::move(v));
}

namespace {

// Shape check of one (group, value) component against its group type.
// Returns an error message, or empty when the value fits.
std::string check_value_shape(const GroupType& group, const AttributeValue& value) {
    switch (group.kind) {
        case GroupKind::categorical:
            if (!std::holds_alternative<std::string>(value))
                return "categorical group expects a label";
            break;
        case GroupKind::ordinal: {
            if (!std::holds_alternative<std::int64_t>(value))
                return "ordinal group expects an integer level";
            const auto level = std::get<std::int64_t>(value);
            const double max = group.scale_max.value_or(0.0);
            if (level < 1 || static_cast<double>(level) > max)
                return "ordinal level " + std::to_string(level) + " outside [1, " +
                       value_label(AttributeValue{max}) + "]";
            break;
        }
        case GroupKind::numeric: {
            if (!std::holds_alternative<double>(value))
                return "numeric group expects a number";
            const double v = std::get<double>(value);
            const double max = group.scale_max.value_or(0.0);
            if (!(v >= 0.0) || v > max)
                return "numeric value " + value_label(value) + " outside [0, " +
                       value_label(AttributeValue{max}) + "]";
            break;
        }
        case GroupKind::composite: {
            if (!std::holds_alternative<CompositeValue>(value))
                return "composite group expects a subfield map";
            const auto& m = std::get<CompositeValue>(value);
            if (m.empty()) return "composite value has no subfields";
            for (const auto& [sub, _] : m) {
                if (std::find(group.subfields.begin(), group.subfields.end(), sub) ==
                    group.subfields.end())
                    return "unknown subfield \"" + sub + "\"";
            }
            break;
        }
    }
    return {};
}

ValidationResult check_attribute_ref(const AttributeSchema& schema, const AttributeRef& ref,
                                     const std::string& where) {
    ValidationResult result;
    if (ref.components.empty()) {
        result.add(where, "attribute has no components");
        return result;
    }
    std::set<std::string> seen_groups;
    for (const auto& [group_name, value] : ref.components) {
        if (!seen_groups.insert(group_name).second)
            result.add(where, "attribute repeats group type \"" + group_name + "\"");
        const GroupType* group = schema.find_group(group_name);
        if (group == nullptr) {
            result.add(where, "attribute references undefined group \"" + group_name + "\"");
            continue;
        }
        if (std::string err = check_value_shape(*group, value); !err.empty())
            result.add(where, attribute_label(ref) + ": " + err);
    }
    return result;
}

// Single-component match with kind-aware composite semantics: every subfield
// present in `a` must agree on the bearer.
bool component_matches(const AttributeValue& a, const AttributeValue& borne) {
    if (std::holds_alternative<CompositeValue>(a) && std::holds_alternative<CompositeValue>(borne)) {
        const auto& want = std::get<CompositeValue>(a);
        const auto& have = std::get<CompositeValue>(borne);
        for (const auto& [sub, v] : want) {
            auto it = have.find(sub);
            if (it == have.end() || it->second != v) return false;
        }
        return true;
    }
    return a == borne;
}

int indicator_on_attributes(const AttributeSchema& schema, const AttributeRef& a,
                            const std::vector<AttributeRef>& borne) {
    for (const auto& [group_name, value] : a.components) {
        if (schema.find_group(group_name) == nullptr)
            throw UnknownIdError("unknown group type \"" + group_name + "\"");
        bool matched = false;
        for (const auto& b : borne) {
            if (b.components.size() == 1 && b.components.front().first == group_name &&
                component_matches(value, b.components.front().second)) {
                matched = true;
                break;
            }
        }
        if (!matched) return 0;
    }
    return 1;
}

ValidationResult check_bearer_attributes(const AttributeSchema& schema,
                                         const std::vector<AttributeRef>& attributes,
                                         const std::string& where) {
    ValidationResult result;
    std::set<std::string> groups;
    for (const auto& ref : attributes) {
        result.merge(check_attribute_ref(schema, ref, where));
        if (ref.is_product()) {
            result.add(where, "bearer annotation " + attribute_label(ref) +
                                  " must reference a single group type");
            continue;
        }
        if (!ref.components.empty() && !groups.insert(ref.components.front().first).second)
            result.add(where, "more than one value for group \"" +
                                  ref.components.front().first + "\"");
    }
    return result;
}

}  // namespace

ValidationResult validate_schema(const AttributeSchema& schema) {
    ValidationResult result;
    std::set<std::string> names;
    for (const auto& group : schema.group_types) {
        const std::string where = "group \"" + group.name + "\"";
        if (group.name.empty()) result.add(where, "group type name is empty");
        if (!names.insert(group.name).second)
            result.add(where, "duplicate group type \"" + group.name + "\"");
        const bool scaled = group.kind == GroupKind::ordinal || group.kind == GroupKind::numeric;
        if (scaled) {
            if (!group.scale_max.has_value())
                result.add(where, std::string(to_string(group.kind)) + " group requires scale_max");
            else if (!(*group.scale_max > 0.0))
                result.add(where, "scale_max must be positive, got " +
                                      value_label(AttributeValue{*group.scale_max}));
        } else if (group.scale_max.has_value()) {
            result.add(where, std::string(to_string(group.kind)) + " group must not set scale_max");
        }
        if (group.kind == GroupKind::composite) {
            if (group.subfields.empty()) result.add(where, "composite group requires subfields");
        } else if (!group.subfields.empty()) {
            result.add(where, std::string(to_string(group.kind)) + " group must not set subfields");
        }
    }
    std::set<AttributeRef> seen;
    for (const auto& ref : schema.measured_attributes) {
        const std::string where = "measured attribute " + attribute_label(ref);
        result.merge(check_attribute_ref(schema, ref, where));
        if (!seen.insert(ref).second) result.add(where, "duplicate measured attribute");
    }
    return result;
}

ValidationResult validate_catalog(const AttributeSchema& schema, const Catalog& catalog) {
    ValidationResult result = validate_query(catalog.query);
    std::set<std::string> instance_ids;
    for (const auto& instance : catalog.instances) {
        const std::string where = "instance \"" + instance.id + "\"";
        if (!instance_ids.insert(instance.id).second)
            result.add(where, "duplicate instance id");
        if (instance.items.empty()) result.add(where, "instance has no items");
        std::set<std::string> item_ids;
        for (const auto& item : instance.items) {
            const std::string item_where = where + ", item \"" + item.id + "\"";
            if (!item_ids.insert(item.id).second) result.add(item_where, "duplicate item id");
            if (!(item.relevance >= 0.0 && item.relevance <= 1.0))
                result.add(item_where, "relevance " + value_label(AttributeValue{item.relevance}) +
                                           " outside [0,1]");
            result.merge(check_bearer_attributes(schema, item.attributes, item_where));
        }
    }
    return result;
}

ValidationResult validate_profile(const AttributeSchema& schema, const Profile& profile) {
    return check_bearer_attributes(schema, profile.attributes, "profile");
}

ValidationResult validate_query(const Query& query) {
    ValidationResult result;
    if (!(query.polarity >= -1.0 && query.polarity <= 1.0))
        result.add("query", "polarity " + value_label(AttributeValue{query.polarity}) +
                                " outside [-1,1]");
    if (!(query.polarity_weight >= 0.0))
        result.add("query", "polarity_weight must be nonnegative");
    return result;
}

int attribute_indicator(const AttributeSchema& schema, const AttributeRef& a, const Item& bearer) {
    return indicator_on_attributes(schema, a, bearer.attributes);
}

int attribute_indicator(const AttributeSchema& schema, const AttributeRef& a, const Profile& bearer) {
    return indicator_on_attributes(schema, a, bearer.attributes);
}

AttributeSchema cross_group_types(const AttributeSchema& schema,
                                  const std::vector<std::string>& groups) {
    if (groups.size() < 2)
        throw std::invalid_argument("crossing requires at least two group types");
    std::vector<std::vector<AttributeValue>> observed;
    for (const auto& name : groups) {
        const GroupType* group = schema.find_group(name);
        if (group == nullptr) throw UnknownIdError("unknown group type \"" + name + "\"");
        if (group->kind != GroupKind::categorical && group->kind != GroupKind::ordinal)
            throw std::invalid_argument("cannot cross " + std::string(to_string(group->kind)) +
                                        " group \"" + name + "\"");
        std::vector<AttributeValue> values;
        for (const auto& ref : schema.measured_attributes) {
            if (ref.components.size() != 1 || ref.components.front().first != name) continue;
            const auto& v = ref.components.front().second;
            if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
        }
        if (values.empty())
            throw std::invalid_argument("group \"" + name + "\" has no measured values to cross");
        observed.push_back(std::move(values));
    }

    AttributeSchema crossed = schema;
    std::vector<std::size_t> index(groups.size(), 0);
    while (true) {
        AttributeRef product;
        for (std::size_t g = 0; g < groups.size(); ++g)
            product.components.emplace_back(groups[g], observed[g][index[g]]);
        crossed.measured_attributes.push_back(std::move(product));
        std::size_t g = groups.size();
        while (g > 0) {
            --g;
            if (++index[g] < observed[g].size()) break;
            index[g] = 0;
            if (g == 0) return crossed;
        }
    }
}

}  // namespace divsel
