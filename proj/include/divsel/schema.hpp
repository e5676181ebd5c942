#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace divsel {

enum class GroupKind { categorical, ordinal, numeric, composite };

const char* to_string(GroupKind kind);
std::optional<GroupKind> group_kind_from_string(std::string_view name);

/// A group type names one socially relevant dimension (gender, skin, age, ...)
/// and fixes the shape its attribute values take.
struct GroupType {
    std::string name;
    GroupKind kind = GroupKind::categorical;
    std::optional<double> scale_max;      // ordinal and numeric kinds only
    std::vector<std::string> subfields;   // composite kind only

    bool operator==(const GroupType&) const = default;
};

/// Value of an attribute, shaped by the owning group's kind:
/// categorical label, ordinal level, numeric value, or composite subfield map.
using CompositeValue = std::map<std::string, std::string>;
using AttributeValue = std::variant<std::string, std::int64_t, double, CompositeValue>;

/// One attribute a person or item can carry. Bearer annotations reference a
/// single group; intersectional measured attributes carry several components
/// and match only when every component matches.
struct AttributeRef {
    std::vector<std::pair<std::string, AttributeValue>> components;

    AttributeRef() = default;
    AttributeRef(std::string group, AttributeValue value);

    const std::string& group() const;       // single-component refs only
    const AttributeValue& value() const;     // single-component refs only
    bool is_product() const { return components.size() > 1; }

    bool operator==(const AttributeRef&) const = default;
    bool operator<(const AttributeRef& other) const { return components < other.components; }
};

/// Human-readable label, e.g. "gender:woman", "skin:5", "gender:woman&skin:6",
/// "hair:{color=grey,length=short}". Stable across runs.
std::string attribute_label(const AttributeRef& ref);
std::string value_label(const AttributeValue& value);

/// The attribute universe: group types plus the ordered list of attributes
/// every presence/diversity computation ranges over.
struct AttributeSchema {
    std::vector<GroupType> group_types;
    std::vector<AttributeRef> measured_attributes;

    const GroupType* find_group(std::string_view name) const;

    bool operator==(const AttributeSchema&) const = default;
};

struct Item {
    std::string id;
    std::vector<AttributeRef> attributes;   // at most one per group type
    double relevance = 1.0;                 // exogenous, in [0,1]

    const AttributeRef* attribute_for(std::string_view group) const;

    bool operator==(const Item&) const = default;
};

struct Instance {
    std::string id;
    std::vector<Item> items;   // nonempty, ids unique

    bool operator==(const Instance&) const = default;
};

/// A set of instances under evaluation, borrowed from some catalog.
using InstanceSet = std::vector<const Instance*>;

struct Query {
    std::string text;
    double polarity = 1.0;          // in [-1,1]
    double polarity_weight = 1.0;   // lambda, >= 0

    bool operator==(const Query&) const = default;
};

struct Catalog {
    Query query;
    std::vector<Instance> instances;   // ids unique

    const Instance* find_instance(std::string_view id) const;

    bool operator==(const Catalog&) const = default;
};

/// The attribute set inclusion is measured against. Need not describe a real
/// person; it is whoever (or whatever policy) the system should include.
struct Profile {
    std::vector<AttributeRef> attributes;   // at most one per group type

    const AttributeRef* attribute_for(std::string_view group) const;

    bool operator==(const Profile&) const = default;
};

struct Violation {
    std::string where;
    std::string message;
};

/// Violations are data, not faults: every invariant breach is collected and
/// returned, never thrown.
struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string where, std::string message);
    void merge(ValidationResult other);
};

ValidationResult validate_schema(const AttributeSchema& schema);
ValidationResult validate_catalog(const AttributeSchema& schema, const Catalog& catalog);
ValidationResult validate_profile(const AttributeSchema& schema, const Profile& profile);
ValidationResult validate_query(const Query& query);

/// Thrown when an identifier (instance id, group type name) does not resolve.
struct UnknownIdError : std::runtime_error {
    explicit UnknownIdError(const std::string& what) : std::runtime_error(what) {}
};

/// 1 iff the bearer carries an attribute equal to `a`; for composite values,
/// equal on every subfield present in `a`; for product attributes, the
/// conjunction over components. Throws UnknownIdError if a component's group
/// type does not resolve in the schema.
int attribute_indicator(const AttributeSchema& schema, const AttributeRef& a, const Item& bearer);
int attribute_indicator(const AttributeSchema& schema, const AttributeRef& a, const Profile& bearer);

/// Crosses two or more categorical/ordinal groups into intersectional
/// attributes: the Cartesian product of each named group's values observed in
/// measured_attributes, appended after the originals. Throws
/// std::invalid_argument for fewer than two groups, for numeric or composite
/// groups, and for groups with no measured values; UnknownIdError for unknown
/// group names.
AttributeSchema cross_group_types(const AttributeSchema& schema, const std::vector<std::string>& groups);

}  // namespace divsel
