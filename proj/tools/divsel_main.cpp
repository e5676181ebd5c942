#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "divsel/io.hpp"
#include "divsel/report.hpp"
#include "divsel/selection.hpp"

namespace {

using namespace divsel;

// Exit codes (also in --help): 0 success, 2 unreadable file, 3 parse error,
// 4 validation failure or invalid request, 5 unknown id or group,
// 6 infeasible selection, 7 undefined result. CLI11 usage errors keep its
// own codes.
constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitParse = 3;
constexpr int kExitValidation = 4;
constexpr int kExitUnknownId = 5;
constexpr int kExitInfeasible = 6;
constexpr int kExitUndefined = 7;

struct CommonArgs {
    std::string config_path;
    std::string catalog_path;
    std::string format = "text";
};

void add_common(CLI::App& cmd, CommonArgs& args) {
    cmd.add_option("--config", args.config_path, "config file (JSON)")->required();
    cmd.add_option("--catalog", args.catalog_path, "catalog file (JSON lines)")->required();
    cmd.add_option("--format", args.format, "report format")
        ->check(CLI::IsMember({"text", "machine"}))
        ->capture_default_str();
}

struct Loaded {
    LoadedConfig config;
    Catalog catalog;
};

Loaded load(const CommonArgs& args) {
    Loaded loaded;
    loaded.config = parse_config(read_file(args.config_path), args.config_path);
    loaded.catalog =
        parse_catalog(read_file(args.catalog_path), loaded.config.schema, args.catalog_path);
    return loaded;
}

/// Validation gate for every command except `validate` itself: violations go
/// to stderr, the command does not run.
bool validated(const Loaded& loaded) {
    const ValidationResult validation = validate_all(loaded.config, loaded.catalog);
    if (validation.ok()) return true;
    std::cerr << render_validate_report(validation, ReportFormat::text);
    return false;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = text.find(sep, start);
        parts.push_back(text.substr(start, end - start));
        if (end == std::string::npos) return parts;
        start = end + 1;
    }
}

/// Types a command-line token by the group's kind, so `--restrict skin:5`
/// matches an ordinal level and `--restrict gender:woman` a label.
AttributeValue parse_cli_value(const AttributeSchema& schema, const std::string& group,
                               const std::string& token) {
    const GroupType* type = schema.find_group(group);
    if (!type) throw UnknownIdError("unknown group type '" + group + "'");
    switch (type->kind) {
        case GroupKind::categorical:
            return token;
        case GroupKind::ordinal: {
            char* end = nullptr;
            const long long v = std::strtoll(token.c_str(), &end, 10);
            if (end == token.c_str() || *end != '\0')
                throw std::invalid_argument("group '" + group + "': '" + token +
                                            "' is not an integer level");
            return static_cast<std::int64_t>(v);
        }
        case GroupKind::numeric: {
            char* end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (end == token.c_str() || *end != '\0')
                throw std::invalid_argument("group '" + group + "': '" + token +
                                            "' is not a number");
            return v;
        }
        case GroupKind::composite:
            throw std::invalid_argument("group '" + group +
                                        "': composite values are not addressable here");
    }
    throw std::invalid_argument("bad GroupKind");
}

int run_validate(const CommonArgs& args) {
    const Loaded loaded = load(args);
    const ValidationResult validation = validate_all(loaded.config, loaded.catalog);
    const auto format = *report_format_from_string(args.format);
    std::cout << render_validate_report(validation, format);
    return validation.ok() ? kExitOk : kExitValidation;
}

int run_score(const CommonArgs& args, const std::string& target,
              const std::optional<std::string>& mechanism) {
    Loaded loaded = load(args);
    if (!validated(loaded)) return kExitValidation;
    if (mechanism)
        loaded.config.objective.mechanism = *mechanism_from_string(*mechanism);

    std::vector<std::string> ids;
    bool as_set = false;
    std::string label;
    if (target == "each") {
        for (const Instance& x : loaded.catalog.instances) ids.push_back(x.id);
        if (ids.empty()) throw UnknownIdError("catalog has no instances");
        label = "each";
    } else {
        ids = split(target, ',');
        as_set = ids.size() > 1;
        if (as_set) {
            std::vector<std::string> sorted = ids;
            std::sort(sorted.begin(), sorted.end());
            label = "set {";
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                if (i) label += ", ";
                label += sorted[i];
            }
            label += "}";
        } else {
            label = ids.front();
        }
    }

    const auto format = *report_format_from_string(args.format);
    const ScoreReport report =
        render_score_report(loaded.config, loaded.catalog, ids, as_set, label, format);
    std::cout << report.body;
    return report.any_defined ? kExitOk : kExitUndefined;
}

int run_select(const CommonArgs& args, std::size_t k, const std::optional<std::string>& mechanism,
               const std::optional<std::uint64_t>& seed) {
    Loaded loaded = load(args);
    if (!validated(loaded)) return kExitValidation;
    if (mechanism)
        loaded.config.objective.mechanism = *mechanism_from_string(*mechanism);
    if (seed) loaded.config.seed = *seed;

    const ScoringConfigs configs{loaded.config.presence, loaded.config.inclusion};
    const std::size_t n = loaded.catalog.instances.size();
    const bool under_cap = binomial_capped(n, k, loaded.config.enumeration_cap).has_value();
    const SelectionResult result =
        under_cap ? select_exhaustive(loaded.config.schema, loaded.catalog, loaded.config.profile,
                                      k, loaded.config.objective, configs,
                                      loaded.config.enumeration_cap)
                  : select_greedy(loaded.config.schema, loaded.catalog, loaded.config.profile, k,
                                  loaded.config.objective, configs, loaded.config.seed);

    const auto format = *report_format_from_string(args.format);
    std::cout << render_select_report(loaded.config, loaded.catalog, k, result, format);
    return result.best ? kExitOk : kExitInfeasible;
}

int run_homogeneity(const CommonArgs& args, const std::string& group,
                    const std::optional<std::string>& restrict_arg) {
    const Loaded loaded = load(args);
    if (!validated(loaded)) return kExitValidation;

    std::optional<AttributeRef> restrict_to;
    if (restrict_arg) {
        const std::size_t colon = restrict_arg->find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("--restrict expects GROUP:VALUE");
        const std::string rgroup = restrict_arg->substr(0, colon);
        const std::string rvalue = restrict_arg->substr(colon + 1);
        restrict_to = AttributeRef(rgroup, parse_cli_value(loaded.config.schema, rgroup, rvalue));
    }

    const auto format = *report_format_from_string(args.format);
    std::cout << render_homogeneity_report(loaded.config, loaded.catalog, group, restrict_to,
                                           format);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scores catalogs of annotated instances for diversity (attribute presence vs "
                 "targets) and inclusion (alignment with a profile), and selects k-subsets."};
    app.require_subcommand(1);
    app.footer("exit codes:\n"
               "  0  success\n"
               "  2  unreadable file\n"
               "  3  parse error\n"
               "  4  validation failure or invalid request\n"
               "  5  unknown id or group\n"
               "  6  infeasible selection\n"
               "  7  undefined result (total exclusion or empty restriction)");

    CommonArgs validate_args;
    CLI::App* validate_cmd = app.add_subcommand("validate", "parse and validate config + catalog");
    add_common(*validate_cmd, validate_args);

    CommonArgs score_args;
    std::string target = "each";
    std::string score_mechanism;
    CLI::App* score_cmd = app.add_subcommand("score", "score instances or a set");
    add_common(*score_cmd, score_args);
    score_cmd->add_option("--target", target, "instance id, id list (a,b,...), or 'each'")
        ->capture_default_str();
    score_cmd->add_option("--mechanism", score_mechanism, "cumulation mechanism override")
        ->check(CLI::IsMember({"egalitarian", "utilitarian", "nash"}));

    CommonArgs select_args;
    std::size_t k = 0;
    std::string select_mechanism;
    std::uint64_t seed = 0;
    CLI::App* select_cmd = app.add_subcommand("select", "choose the best k-subset");
    add_common(*select_cmd, select_args);
    select_cmd->add_option("--k", k, "subset size")->required()->check(CLI::PositiveNumber);
    select_cmd->add_option("--mechanism", select_mechanism, "cumulation mechanism override")
        ->check(CLI::IsMember({"egalitarian", "utilitarian", "nash"}));
    CLI::Option* seed_option = select_cmd->add_option("--seed", seed, "greedy seed override");

    CommonArgs homogeneity_args;
    std::string group;
    std::string restrict_arg;
    CLI::App* homogeneity_cmd =
        app.add_subcommand("homogeneity", "value-share concentration of one group");
    add_common(*homogeneity_cmd, homogeneity_args);
    homogeneity_cmd->add_option("--group", group, "group type to profile")->required();
    CLI::Option* restrict_option = homogeneity_cmd->add_option(
        "--restrict", restrict_arg, "count only items matching GROUP:VALUE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (validate_cmd->parsed()) return run_validate(validate_args);
        if (score_cmd->parsed())
            return run_score(score_args, target,
                             score_mechanism.empty() ? std::nullopt
                                                     : std::make_optional(score_mechanism));
        if (select_cmd->parsed())
            return run_select(select_args, k,
                              select_mechanism.empty() ? std::nullopt
                                                       : std::make_optional(select_mechanism),
                              seed_option->count() ? std::make_optional(seed) : std::nullopt);
        if (homogeneity_cmd->parsed())
            return run_homogeneity(homogeneity_args, group,
                                   restrict_option->count() ? std::make_optional(restrict_arg)
                                                            : std::nullopt);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const UnknownIdError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnknownId;
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        // unpopulated homogeneity scope; everything else domain-flavored maps
        // to the undefined-result code too
        std::cerr << "error: " << e.what() << "\n";
        return kExitUndefined;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
