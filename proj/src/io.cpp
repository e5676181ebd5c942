#include "divsel/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace divsel {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

struct Cursor {
    const std::string& file;
    std::size_t line = 0;   // 0 while parsing the config tree

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(file, line, message); }
};

void require_keys(const Cursor& at, const Json& object, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (const char* name : allowed)
            if (key == name) known = true;
        if (!known) at.fail(where + ": unknown key '" + key + "'");
    }
}

const Json* find(const Json& object, const char* key) {
    auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
}

const Json& require(const Cursor& at, const Json& object, const std::string& where,
                    const char* key) {
    const Json* value = find(object, key);
    if (!value) at.fail(where + ": missing key '" + std::string(key) + "'");
    return *value;
}

std::string as_string(const Cursor& at, const Json& value, const std::string& where) {
    if (!value.is_string()) at.fail(where + ": expected a string");
    return value.get<std::string>();
}

double as_number(const Cursor& at, const Json& value, const std::string& where) {
    if (!value.is_number()) at.fail(where + ": expected a number");
    return value.get<double>();
}

bool as_bool(const Cursor& at, const Json& value, const std::string& where) {
    if (!value.is_boolean()) at.fail(where + ": expected a boolean");
    return value.get<bool>();
}

std::uint64_t as_count(const Cursor& at, const Json& value, const std::string& where) {
    if (!value.is_number_integer()) at.fail(where + ": expected a nonnegative integer");
    if (!value.is_number_unsigned() && value.get<std::int64_t>() < 0)
        at.fail(where + ": expected a nonnegative integer");
    return value.get<std::uint64_t>();
}

const Json& as_object(const Cursor& at, const Json& value, const std::string& where) {
    if (!value.is_object()) at.fail(where + ": expected an object");
    return value;
}

const Json& as_array(const Cursor& at, const Json& value, const std::string& where) {
    if (!value.is_array()) at.fail(where + ": expected an array");
    return value;
}

template <typename Enum>
Enum as_enum(const Cursor& at, const Json& value, const std::string& where,
             std::optional<Enum> (*from_string)(std::string_view)) {
    const std::string name = as_string(at, value, where);
    std::optional<Enum> parsed = from_string(name);
    if (!parsed) at.fail(where + ": unknown name '" + name + "'");
    return *parsed;
}

/// JSON token -> attribute value, typed by the owning group when it is known:
/// integers under a numeric group become reals. Shape errors beyond that are
/// validation's business.
AttributeValue parse_value(const Cursor& at, const Json& token, const GroupType* group,
                           const std::string& where) {
    if (token.is_string()) return token.get<std::string>();
    if (token.is_number_integer()) {
        if (token.is_number_unsigned() &&
            token.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
            at.fail(where + ": integer out of range");
        const std::int64_t v = token.get<std::int64_t>();
        if (group && group->kind == GroupKind::numeric) return static_cast<double>(v);
        return v;
    }
    if (token.is_number_float()) return token.get<double>();
    if (token.is_object()) {
        CompositeValue composite;
        for (const auto& [field, sub] : token.items())
            composite[field] = as_string(at, sub, where + "." + field);
        return composite;
    }
    at.fail(where + ": expected a string, number, or object");
}

AttributeRef parse_attribute_ref(const Cursor& at, const Json& token,
                                 const AttributeSchema& schema, const std::string& where) {
    const Json& object = as_object(at, token, where);
    if (const Json* components = find(object, "components")) {
        require_keys(at, object, where, {"components"});
        AttributeRef ref;
        for (const Json& entry : as_array(at, *components, where + ".components")) {
            const Json& component = as_object(at, entry, where + ".components[]");
            require_keys(at, component, where + ".components[]", {"group", "value"});
            const std::string group =
                as_string(at, require(at, component, where, "group"), where + ".group");
            ref.components.emplace_back(
                group, parse_value(at, require(at, component, where, "value"),
                                   schema.find_group(group), where + ".value"));
        }
        if (ref.components.empty()) at.fail(where + ".components: must be nonempty");
        return ref;
    }
    require_keys(at, object, where, {"group", "value"});
    const std::string group = as_string(at, require(at, object, where, "group"), where + ".group");
    return AttributeRef(group, parse_value(at, require(at, object, where, "value"),
                                           schema.find_group(group), where + ".value"));
}

/// Attribute map ({group: value}) -> refs in group-name order.
std::vector<AttributeRef> parse_attribute_map(const Cursor& at, const Json& object,
                                              const AttributeSchema& schema,
                                              const std::string& where) {
    std::vector<AttributeRef> attributes;
    for (const auto& [group, token] : as_object(at, object, where).items())
        attributes.emplace_back(group,
                                parse_value(at, token, schema.find_group(group), where + "." + group));
    return attributes;
}

AttributeSchema parse_schema(const Cursor& at, const Json& section) {
    AttributeSchema schema;
    require_keys(at, section, "schema", {"group_types", "measured_attributes", "cross_groups"});

    for (const Json& entry : as_array(at, require(at, section, "schema", "group_types"),
                                      "schema.group_types")) {
        const Json& object = as_object(at, entry, "schema.group_types[]");
        require_keys(at, object, "schema.group_types[]", {"name", "kind", "scale_max", "subfields"});
        GroupType group;
        group.name = as_string(at, require(at, object, "schema.group_types[]", "name"),
                               "schema.group_types[].name");
        const std::string where = "schema.group_types['" + group.name + "']";
        group.kind = as_enum(at, require(at, object, where, "kind"), where + ".kind",
                             &group_kind_from_string);
        if (const Json* scale_max = find(object, "scale_max"))
            group.scale_max = as_number(at, *scale_max, where + ".scale_max");
        if (const Json* subfields = find(object, "subfields"))
            for (const Json& field : as_array(at, *subfields, where + ".subfields"))
                group.subfields.push_back(as_string(at, field, where + ".subfields[]"));
        schema.group_types.push_back(std::move(group));
    }

    if (const Json* measured = find(section, "measured_attributes"))
        for (const Json& entry : as_array(at, *measured, "schema.measured_attributes"))
            schema.measured_attributes.push_back(
                parse_attribute_ref(at, entry, schema, "schema.measured_attributes[]"));

    if (const Json* crosses = find(section, "cross_groups")) {
        for (const Json& entry : as_array(at, *crosses, "schema.cross_groups")) {
            std::vector<std::string> names;
            for (const Json& name : as_array(at, entry, "schema.cross_groups[]"))
                names.push_back(as_string(at, name, "schema.cross_groups[][]"));
            try {
                schema = cross_group_types(schema, names);
            } catch (const std::exception& e) {
                at.fail("schema.cross_groups: " + std::string(e.what()));
            }
        }
    }
    return schema;
}

void parse_presence(const Cursor& at, const Json& section, const AttributeSchema& schema,
                    PresenceConfig& presence) {
    require_keys(at, section, "presence",
                 {"measurement", "function", "aggregator", "set_mode", "targets", "default_target"});
    if (const Json* v = find(section, "measurement"))
        presence.measurement =
            as_enum(at, *v, "presence.measurement", &presence_measurement_from_string);
    if (const Json* v = find(section, "function"))
        presence.function = as_enum(at, *v, "presence.function", &presence_function_from_string);
    if (const Json* v = find(section, "aggregator"))
        presence.aggregator =
            as_enum(at, *v, "presence.aggregator", &presence_aggregator_from_string);
    if (const Json* v = find(section, "set_mode"))
        presence.set_mode = as_enum(at, *v, "presence.set_mode", &set_diversity_mode_from_string);

    if (const Json* targets = find(section, "targets")) {
        for (const Json& entry : as_array(at, *targets, "presence.targets")) {
            const Json& object = as_object(at, entry, "presence.targets[]");
            PresenceTarget target;
            Json ref = object;
            ref.erase("lower");
            ref.erase("upper");
            target.attribute = parse_attribute_ref(at, ref, schema, "presence.targets[]");
            if (const Json* lower = find(object, "lower"))
                target.lower = as_number(at, *lower, "presence.targets[].lower");
            if (const Json* upper = find(object, "upper"))
                target.upper = as_number(at, *upper, "presence.targets[].upper");
            presence.targets.push_back(std::move(target));
        }
    }

    if (const Json* fallback = find(section, "default_target")) {
        const Json& object = as_object(at, *fallback, "presence.default_target");
        require_keys(at, object, "presence.default_target", {"lower", "upper"});
        double lower = 0.0, upper = 1.0;
        if (const Json* v = find(object, "lower"))
            lower = as_number(at, *v, "presence.default_target.lower");
        if (const Json* v = find(object, "upper"))
            upper = as_number(at, *v, "presence.default_target.upper");
        for (const AttributeRef& attribute : schema.measured_attributes)
            if (!presence.target_for(attribute))
                presence.targets.push_back({attribute, lower, upper});
    }
}

void parse_inclusion(const Cursor& at, const Json& section, InclusionConfig& inclusion) {
    require_keys(at, section, "inclusion",
                 {"kernels", "combiner", "relevance_threshold", "attribute_cumulator",
                  "set_cumulator", "set_basis", "apply_polarity", "nash_rescale"});
    if (const Json* kernels = find(section, "kernels"))
        for (const auto& [group, name] : as_object(at, *kernels, "inclusion.kernels").items())
            inclusion.kernels[group] = as_enum(at, name, "inclusion.kernels['" + group + "']",
                                               &rep_form_from_string);
    if (const Json* v = find(section, "combiner"))
        inclusion.combiner = as_enum(at, *v, "inclusion.combiner", &instance_combiner_from_string);
    if (const Json* v = find(section, "relevance_threshold"))
        inclusion.relevance_threshold = as_number(at, *v, "inclusion.relevance_threshold");
    if (const Json* v = find(section, "attribute_cumulator"))
        inclusion.attribute_cumulator =
            as_enum(at, *v, "inclusion.attribute_cumulator", &mechanism_from_string);
    if (const Json* v = find(section, "set_cumulator"))
        inclusion.set_cumulator = as_enum(at, *v, "inclusion.set_cumulator", &mechanism_from_string);
    if (const Json* v = find(section, "set_basis"))
        inclusion.set_basis = as_enum(at, *v, "inclusion.set_basis", &set_basis_from_string);
    if (const Json* v = find(section, "apply_polarity"))
        inclusion.apply_polarity = as_bool(at, *v, "inclusion.apply_polarity");
    if (const Json* v = find(section, "nash_rescale"))
        inclusion.nash_rescale = as_bool(at, *v, "inclusion.nash_rescale");
}

void parse_selection(const Cursor& at, const Json& section, LoadedConfig& config) {
    require_keys(at, section, "selection",
                 {"mode", "mechanism", "diversity_floor", "diversity_weight", "inclusion_weight",
                  "enumeration_cap", "seed"});
    if (const Json* v = find(section, "mode"))
        config.objective.mode = as_enum(at, *v, "selection.mode", &selection_mode_from_string);
    if (const Json* v = find(section, "mechanism"))
        config.objective.mechanism = as_enum(at, *v, "selection.mechanism", &mechanism_from_string);
    if (const Json* v = find(section, "diversity_floor"))
        config.objective.diversity_floor = as_number(at, *v, "selection.diversity_floor");
    if (const Json* v = find(section, "diversity_weight"))
        config.objective.diversity_weight = as_number(at, *v, "selection.diversity_weight");
    if (const Json* v = find(section, "inclusion_weight"))
        config.objective.inclusion_weight = as_number(at, *v, "selection.inclusion_weight");
    if (const Json* v = find(section, "enumeration_cap"))
        config.enumeration_cap = as_count(at, *v, "selection.enumeration_cap");
    if (const Json* v = find(section, "seed")) config.seed = as_count(at, *v, "selection.seed");
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read file '" + path + "'");
    return std::move(buffer).str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file '" + path + "'");
    out << content;
    if (!out) throw IoError("cannot write file '" + path + "'");
}

LoadedConfig parse_config(const std::string& text, const std::string& filename) {
    const Cursor at{filename};
    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::parse_error& e) {
        at.fail(e.what());
    }
    as_object(at, root, "config");
    require_keys(at, root, "config", {"schema", "presence", "inclusion", "selection", "profile"});

    LoadedConfig config;
    config.schema = parse_schema(at, as_object(at, require(at, root, "config", "schema"), "schema"));
    if (const Json* section = find(root, "presence"))
        parse_presence(at, as_object(at, *section, "presence"), config.schema, config.presence);
    if (const Json* section = find(root, "inclusion"))
        parse_inclusion(at, as_object(at, *section, "inclusion"), config.inclusion);
    if (const Json* section = find(root, "selection"))
        parse_selection(at, as_object(at, *section, "selection"), config);
    if (const Json* section = find(root, "profile"))
        config.profile.attributes = parse_attribute_map(at, *section, config.schema, "profile");
    return config;
}

Catalog parse_catalog(const std::string& text, const AttributeSchema& schema,
                      const std::string& filename) {
    Catalog catalog;
    bool saw_header = false;
    std::istringstream lines(text);
    std::string line;
    for (std::size_t number = 1; std::getline(lines, line); ++number) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const Cursor at{filename, number};
        Json record;
        try {
            record = Json::parse(line);
        } catch (const Json::parse_error& e) {
            at.fail(e.what());
        }
        as_object(at, record, "record");

        if (!saw_header) {
            saw_header = true;
            require_keys(at, record, "header", {"query_text", "polarity", "polarity_weight"});
            catalog.query.text =
                as_string(at, require(at, record, "header", "query_text"), "header.query_text");
            if (const Json* v = find(record, "polarity"))
                catalog.query.polarity = as_number(at, *v, "header.polarity");
            if (const Json* v = find(record, "polarity_weight"))
                catalog.query.polarity_weight = as_number(at, *v, "header.polarity_weight");
            continue;
        }

        require_keys(at, record, "instance", {"id", "items"});
        Instance instance;
        instance.id = as_string(at, require(at, record, "instance", "id"), "instance.id");
        for (const Json& entry :
             as_array(at, require(at, record, "instance", "items"), "instance.items")) {
            const Json& object = as_object(at, entry, "item");
            require_keys(at, object, "item", {"id", "attributes", "relevance"});
            Item item;
            item.id = as_string(at, require(at, object, "item", "id"), "item.id");
            item.relevance =
                as_number(at, require(at, object, "item", "relevance"), "item.relevance");
            if (const Json* attributes = find(object, "attributes"))
                item.attributes = parse_attribute_map(at, *attributes, schema,
                                                      "item['" + item.id + "'].attributes");
            instance.items.push_back(std::move(item));
        }
        catalog.instances.push_back(std::move(instance));
    }
    if (!saw_header) throw ParseError(filename, 0, "empty catalog: missing header record");
    return catalog;
}

namespace {

OrderedJson value_to_json(const AttributeValue& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
    if (const auto* d = std::get_if<double>(&value)) return *d;
    OrderedJson object = OrderedJson::object();
    for (const auto& [field, sub] : std::get<CompositeValue>(value)) object[field] = sub;
    return object;
}

OrderedJson attributes_to_json(const std::vector<AttributeRef>& attributes) {
    std::map<std::string, const AttributeValue*> by_group;
    for (const AttributeRef& attribute : attributes) {
        if (attribute.is_product())
            throw std::invalid_argument("cannot serialize a product attribute on a bearer");
        by_group[attribute.group()] = &attribute.value();
    }
    OrderedJson object = OrderedJson::object();
    for (const auto& [group, value] : by_group) object[group] = value_to_json(*value);
    return object;
}

}  // namespace

std::string serialize_catalog(const Catalog& catalog) {
    std::string out;
    OrderedJson header = OrderedJson::object();
    header["query_text"] = catalog.query.text;
    header["polarity"] = catalog.query.polarity;
    header["polarity_weight"] = catalog.query.polarity_weight;
    out += header.dump();
    out += '\n';
    for (const Instance& instance : catalog.instances) {
        OrderedJson record = OrderedJson::object();
        record["id"] = instance.id;
        record["items"] = OrderedJson::array();
        for (const Item& item : instance.items) {
            OrderedJson entry = OrderedJson::object();
            entry["id"] = item.id;
            entry["attributes"] = attributes_to_json(item.attributes);
            entry["relevance"] = item.relevance;
            record["items"].push_back(std::move(entry));
        }
        out += record.dump();
        out += '\n';
    }
    return out;
}

ValidationResult validate_all(const LoadedConfig& config, const Catalog& catalog) {
    ValidationResult result;
    result.merge(validate_schema(config.schema));
    result.merge(validate_query(catalog.query));
    result.merge(validate_catalog(config.schema, catalog));
    result.merge(validate_profile(config.schema, config.profile));
    result.merge(validate_presence_config(config.schema, config.presence));
    result.merge(validate_inclusion_config(config.schema, config.inclusion));
    result.merge(validate_objective(config.objective));
    return result;
}

}  // namespace divsel
