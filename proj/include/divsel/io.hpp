#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "divsel/inclusion.hpp"
#include "divsel/presence.hpp"
#include "divsel/schema.hpp"
#include "divsel/selection.hpp"

namespace divsel {

/// A file that could not be read or written.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text. `line` is 1-based; 0 means the whole file.
struct ParseError : std::runtime_error {
    std::string file;
    std::size_t line;

    ParseError(std::string file_, std::size_t line_, const std::string& message)
        : std::runtime_error(file_ + (line_ ? ":" + std::to_string(line_) : "") + ": " + message),
          file(std::move(file_)),
          line(line_) {}
};

/// Everything a config file configures. Field semantics live with the owning
/// modules; this is the parsed bundle.
struct LoadedConfig {
    AttributeSchema schema;
    PresenceConfig presence;
    InclusionConfig inclusion;
    Objective objective;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
    std::uint64_t seed = 0;
    Profile profile;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Parses a JSON config with sections `schema`, `presence`, `inclusion`,
/// `selection`, `profile`. Missing sections and fields take defaults;
/// unknown keys, wrong types, and unknown enum names are ParseErrors.
/// `schema.cross_groups` expands intersectional product attributes;
/// `presence.default_target` covers every measured attribute without an
/// explicit target. Semantic problems (bad ranges, unknown groups) are left
/// for validation.
LoadedConfig parse_config(const std::string& text, const std::string& filename = "config");

/// Parses a newline-delimited catalog: a header record carrying
/// {query_text, polarity, polarity_weight}, then one instance per line as
/// {id, items: [{id, attributes, relevance}]}. Relevance is required on every
/// item. Integer tokens under a numeric group parse as reals; everything else
/// keeps its JSON shape for validation to judge.
Catalog parse_catalog(const std::string& text, const AttributeSchema& schema,
                      const std::string& filename = "catalog");

/// Inverse of parse_catalog up to formatting: parsing the output yields an
/// identical Catalog.
std::string serialize_catalog(const Catalog& catalog);

/// Every validation the engine defines, merged: schema, query, catalog,
/// profile, presence config, inclusion config, objective.
ValidationResult validate_all(const LoadedConfig& config, const Catalog& catalog);

}  // namespace divsel
