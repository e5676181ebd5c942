#include "divsel/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include <json.hpp>

namespace divsel {

namespace {

using OrderedJson = nlohmann::ordered_json;

constexpr const char* kNashUndefinedNote =
    "nash cumulant undefined on negative scores; enable inclusion.nash_rescale";

void note_once(std::vector<std::string>& notes, const std::string& note) {
    if (std::find(notes.begin(), notes.end(), note) == notes.end()) notes.push_back(note);
}

OrderedJson opt_json(const std::optional<double>& value) {
    return value ? OrderedJson(*value) : OrderedJson(nullptr);
}

/// Column-aligned text: first column left-aligned, the rest right-aligned,
/// two spaces between columns, no trailing blanks.
struct TextTable {
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }

    std::string str() const {
        std::vector<std::size_t> width;
        for (const auto& row : rows) {
            if (row.size() > width.size()) width.resize(row.size(), 0);
            for (std::size_t i = 0; i < row.size(); ++i)
                width[i] = std::max(width[i], row[i].size());
        }
        std::string out;
        for (const auto& row : rows) {
            std::string line;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i == 0) {
                    line += row[0];
                    line.append(width[0] - row[0].size(), ' ');
                } else {
                    line += "  ";
                    line.append(width[i] - row[i].size(), ' ');
                    line += row[i];
                }
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            out += line;
            out += '\n';
        }
        return out;
    }
};

std::string profile_line(const Profile& profile) {
    std::vector<std::string> labels;
    for (const AttributeRef& attribute : profile.attributes)
        labels.push_back(attribute_label(attribute));
    std::sort(labels.begin(), labels.end());
    if (labels.empty()) return "(none)";
    std::string out;
    for (const std::string& label : labels) {
        if (!out.empty()) out += ' ';
        out += label;
    }
    return out;
}

std::string id_set_label(const std::vector<std::string>& ids) {
    std::string out = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += ids[i];
    }
    return out + "}";
}

OrderedJson profile_json(const Profile& profile) {
    std::map<std::string, const AttributeValue*> by_group;
    for (const AttributeRef& attribute : profile.attributes)
        by_group[attribute.group()] = &attribute.value();
    OrderedJson object = OrderedJson::object();
    for (const auto& [group, value] : by_group) {
        if (const auto* s = std::get_if<std::string>(value))
            object[group] = *s;
        else if (const auto* i = std::get_if<std::int64_t>(value))
            object[group] = *i;
        else if (const auto* d = std::get_if<double>(value))
            object[group] = *d;
        else {
            OrderedJson composite = OrderedJson::object();
            for (const auto& [field, sub] : std::get<CompositeValue>(*value))
                composite[field] = sub;
            object[group] = std::move(composite);
        }
    }
    return object;
}

OrderedJson query_json(const Query& query) {
    OrderedJson object = OrderedJson::object();
    object["text"] = query.text;
    object["polarity"] = query.polarity;
    object["polarity_weight"] = query.polarity_weight;
    return object;
}

struct PresenceCell {
    double measured = 0.0;
    double score = 0.0;
};

struct InstanceScores {
    std::string id;
    std::map<std::string, std::optional<double>> attribute;
    std::map<Mechanism, std::optional<double>> cumulant;
    double diversity = 0.0;
    std::map<std::string, PresenceCell> presence;   // attribute label -> cell
};

struct ScoreData {
    std::vector<std::string> groups;
    std::vector<InstanceScores> instances;
    bool as_set = false;
    std::map<Mechanism, std::optional<double>> set_inclusion;
    std::map<std::string, PresenceCell> set_presence;
    std::optional<double> set_diversity_pooled;
    std::map<Mechanism, double> set_diversity_per_instance;
    std::vector<std::pair<std::string, PresenceTarget>> targets;   // sorted by label
    std::vector<Exclusion> exclusions;
    std::vector<std::string> notes;
    bool any_defined = false;
};

ScoreData compute_score_data(const LoadedConfig& config, const Catalog& catalog,
                             const std::vector<std::string>& ids, bool as_set) {
    const AttributeSchema& schema = config.schema;
    const InstanceSet instances = resolve_subset(catalog, ids);

    ScoreData data;
    data.as_set = as_set;
    for (const AttributeRef& attribute : config.profile.attributes)
        data.groups.push_back(attribute.group());
    std::sort(data.groups.begin(), data.groups.end());

    for (const AttributeRef& attribute : schema.measured_attributes) {
        const PresenceTarget* target = config.presence.target_for(attribute);
        data.targets.emplace_back(attribute_label(attribute),
                                  target ? *target : PresenceTarget{attribute, 0.0, 1.0});
    }
    std::sort(data.targets.begin(), data.targets.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    for (const Instance* x : instances) {
        InstanceScores row;
        row.id = x->id;
        for (Mechanism mechanism : kMechanisms) {
            InclusionConfig inclusion = config.inclusion;
            inclusion.attribute_cumulator = mechanism;
            const bool first = mechanism == kMechanisms[0];
            try {
                row.cumulant[mechanism] = multi_attribute_inclusion(
                    schema, *x, config.profile, catalog.query, inclusion,
                    first ? &row.attribute : nullptr, first ? &data.exclusions : nullptr);
            } catch (const std::domain_error&) {
                row.cumulant[mechanism] = std::nullopt;
                note_once(data.notes, kNashUndefinedNote);
            }
            if (row.cumulant[mechanism]) data.any_defined = true;
        }
        row.diversity = diversity_score(schema, *x, config.presence);
        for (const auto& [label, target] : data.targets) {
            const double measured =
                measure_presence(schema, target.attribute, *x, config.presence.measurement);
            row.presence[label] = {measured,
                                   presence_score(measured, target, config.presence.function)};
        }
        data.instances.push_back(std::move(row));
    }

    if (as_set) {
        for (Mechanism mechanism : kMechanisms) {
            std::vector<double> pool;
            for (const InstanceScores& row : data.instances) {
                if (config.inclusion.set_basis == SetBasis::instance_cumulants) {
                    if (row.cumulant.at(mechanism)) pool.push_back(*row.cumulant.at(mechanism));
                } else {
                    for (const auto& [group, score] : row.attribute)
                        if (score) pool.push_back(*score);
                }
            }
            if (pool.empty()) {
                data.set_inclusion[mechanism] = std::nullopt;
                continue;
            }
            if (mechanism == Mechanism::nash && config.inclusion.nash_rescale)
                for (double& v : pool) v = (v + 1.0) / 2.0;
            try {
                data.set_inclusion[mechanism] = cumulate(pool, mechanism);
                data.any_defined = true;
            } catch (const std::domain_error&) {
                data.set_inclusion[mechanism] = std::nullopt;
                note_once(data.notes, kNashUndefinedNote);
            }
        }
        for (const auto& [label, target] : data.targets) {
            const double measured =
                measure_presence(schema, target.attribute, instances, config.presence.measurement);
            data.set_presence[label] = {measured,
                                        presence_score(measured, target, config.presence.function)};
        }
        if (config.presence.set_mode == SetDiversityMode::pooled)
            data.set_diversity_pooled =
                set_diversity(schema, instances, config.presence, Mechanism::utilitarian);
        else
            for (Mechanism mechanism : kMechanisms)
                data.set_diversity_per_instance[mechanism] =
                    set_diversity(schema, instances, config.presence, mechanism);
    }
    return data;
}

std::string target_band(const PresenceTarget& target) {
    return "[" + format_real(target.lower) + ", " + format_real(target.upper) + "]";
}

std::string score_header_text(const LoadedConfig& config, const Catalog& catalog,
                              const std::string& target_label) {
    std::string out;
    out += "query: " + catalog.query.text + "\n";
    out += "polarity: " + format_real(catalog.query.polarity) + " (weight " +
           format_real(catalog.query.polarity_weight) + ")\n";
    out += "profile: " + profile_line(config.profile) + "\n";
    out += "target: " + target_label + "\n";
    return out;
}

std::string score_body_text(const ScoreData& data) {
    std::string out;

    out += "inclusion\n";
    TextTable inclusion;
    std::vector<std::string> header{"attribute"};
    for (const InstanceScores& row : data.instances) header.push_back(row.id);
    inclusion.add(header);
    for (const std::string& group : data.groups) {
        std::vector<std::string> cells{group};
        for (const InstanceScores& row : data.instances)
            cells.push_back(format_real(row.attribute.at(group)));
        inclusion.add(std::move(cells));
    }
    for (Mechanism mechanism : kMechanisms) {
        std::vector<std::string> cells{to_string(mechanism)};
        for (const InstanceScores& row : data.instances)
            cells.push_back(format_real(row.cumulant.at(mechanism)));
        inclusion.add(std::move(cells));
    }
    out += inclusion.str();

    if (data.as_set) {
        out += "\nset inclusion\n";
        TextTable set_table;
        for (Mechanism mechanism : kMechanisms)
            set_table.add({to_string(mechanism), format_real(data.set_inclusion.at(mechanism))});
        out += set_table.str();
    }

    out += "\ndiversity\n";
    TextTable diversity;
    std::vector<std::string> dheader{"attribute", "target"};
    for (const InstanceScores& row : data.instances) dheader.push_back(row.id);
    if (data.as_set) dheader.push_back("set");
    diversity.add(dheader);
    for (const auto& [label, target] : data.targets) {
        std::vector<std::string> cells{label, target_band(target)};
        for (const InstanceScores& row : data.instances)
            cells.push_back(format_real(row.presence.at(label).score));
        if (data.as_set) cells.push_back(format_real(data.set_presence.at(label).score));
        diversity.add(std::move(cells));
    }
    {
        std::vector<std::string> cells{"diversity", ""};
        for (const InstanceScores& row : data.instances) cells.push_back(format_real(row.diversity));
        if (data.as_set) cells.push_back("");
        diversity.add(std::move(cells));
    }
    out += diversity.str();

    if (data.as_set) {
        if (data.set_diversity_pooled) {
            out += "\nset diversity (pooled): " + format_real(*data.set_diversity_pooled) + "\n";
        } else {
            out += "\nset diversity (per-instance)\n";
            TextTable set_table;
            for (Mechanism mechanism : kMechanisms)
                set_table.add({to_string(mechanism),
                               format_real(data.set_diversity_per_instance.at(mechanism))});
            out += set_table.str();
        }
    }

    if (!data.exclusions.empty()) {
        out += "\nexclusions\n";
        for (const Exclusion& e : data.exclusions) {
            out += "- instance " + e.instance_id + ", group " + e.group;
            if (!e.item_id.empty()) out += ", item " + e.item_id;
            out += ": " + e.reason + "\n";
        }
    }
    if (!data.notes.empty()) {
        out += "\nnotes\n";
        for (const std::string& note : data.notes) out += "- " + note + "\n";
    }
    return out;
}

OrderedJson score_object(const ScoreData& data, const LoadedConfig& config,
                         const Catalog& catalog, bool as_set) {
    OrderedJson j = OrderedJson::object();
    j["query"] = query_json(catalog.query);
    j["profile"] = profile_json(config.profile);
    OrderedJson target = OrderedJson::array();
    for (const InstanceScores& row : data.instances) target.push_back(row.id);
    j["target"] = std::move(target);
    j["as_set"] = as_set;
    j["groups"] = data.groups;

    OrderedJson instances = OrderedJson::array();
    for (const InstanceScores& row : data.instances) {
        OrderedJson entry = OrderedJson::object();
        entry["id"] = row.id;
        OrderedJson attribute = OrderedJson::object();
        for (const auto& [group, score] : row.attribute) attribute[group] = opt_json(score);
        entry["attribute_inclusion"] = std::move(attribute);
        OrderedJson cumulants = OrderedJson::object();
        for (Mechanism mechanism : kMechanisms)
            cumulants[to_string(mechanism)] = opt_json(row.cumulant.at(mechanism));
        entry["cumulants"] = std::move(cumulants);
        entry["diversity"] = row.diversity;
        OrderedJson presence = OrderedJson::object();
        for (const auto& [label, cell] : row.presence) {
            OrderedJson c = OrderedJson::object();
            c["measured"] = cell.measured;
            c["score"] = cell.score;
            presence[label] = std::move(c);
        }
        entry["presence"] = std::move(presence);
        instances.push_back(std::move(entry));
    }
    j["instances"] = std::move(instances);

    OrderedJson targets = OrderedJson::object();
    for (const auto& [label, target_entry] : data.targets) {
        OrderedJson t = OrderedJson::object();
        t["lower"] = target_entry.lower;
        t["upper"] = target_entry.upper;
        targets[label] = std::move(t);
    }
    j["targets"] = std::move(targets);

    if (as_set) {
        OrderedJson set = OrderedJson::object();
        OrderedJson inclusion = OrderedJson::object();
        for (Mechanism mechanism : kMechanisms)
            inclusion[to_string(mechanism)] = opt_json(data.set_inclusion.at(mechanism));
        set["inclusion"] = std::move(inclusion);
        OrderedJson presence = OrderedJson::object();
        for (const auto& [label, cell] : data.set_presence) {
            OrderedJson c = OrderedJson::object();
            c["measured"] = cell.measured;
            c["score"] = cell.score;
            presence[label] = std::move(c);
        }
        set["presence"] = std::move(presence);
        OrderedJson diversity = OrderedJson::object();
        if (data.set_diversity_pooled) {
            diversity["mode"] = "pooled";
            diversity["score"] = *data.set_diversity_pooled;
        } else {
            diversity["mode"] = "per-instance";
            OrderedJson scores = OrderedJson::object();
            for (Mechanism mechanism : kMechanisms)
                scores[to_string(mechanism)] = data.set_diversity_per_instance.at(mechanism);
            diversity["scores"] = std::move(scores);
        }
        set["diversity"] = std::move(diversity);
        j["set"] = std::move(set);
    }

    OrderedJson exclusions = OrderedJson::array();
    for (const Exclusion& e : data.exclusions) {
        OrderedJson entry = OrderedJson::object();
        entry["instance"] = e.instance_id;
        entry["group"] = e.group;
        entry["item"] = e.item_id;
        entry["reason"] = e.reason;
        exclusions.push_back(std::move(entry));
    }
    j["exclusions"] = std::move(exclusions);
    j["notes"] = data.notes;
    return j;
}

std::string dump_machine(OrderedJson j) { return j.dump(2) + "\n"; }

}  // namespace

const char* to_string(ReportFormat format) {
    switch (format) {
        case ReportFormat::text: return "text";
        case ReportFormat::machine: return "machine";
    }
    throw std::invalid_argument("bad ReportFormat");
}

std::optional<ReportFormat> report_format_from_string(std::string_view name) {
    if (name == "text") return ReportFormat::text;
    if (name == "machine") return ReportFormat::machine;
    return std::nullopt;
}

std::string format_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.4f", value);
    std::string out = buffer;
    if (out.size() > 1 && out[0] == '-' &&
        out.find_first_not_of("-0.") == std::string::npos)
        out.erase(0, 1);   // -0.0000 is just 0
    return out;
}

std::string format_real(const std::optional<double>& value) {
    return value ? format_real(*value) : "n/a";
}

std::string render_validate_report(const ValidationResult& validation, ReportFormat format) {
    if (format == ReportFormat::machine) {
        OrderedJson j = OrderedJson::object();
        j["command"] = "validate";
        j["ok"] = validation.ok();
        OrderedJson violations = OrderedJson::array();
        for (const Violation& v : validation.violations) {
            OrderedJson entry = OrderedJson::object();
            entry["where"] = v.where;
            entry["message"] = v.message;
            violations.push_back(std::move(entry));
        }
        j["violations"] = std::move(violations);
        return dump_machine(std::move(j));
    }
    if (validation.ok()) return "ok\n";
    std::string out;
    for (const Violation& v : validation.violations) out += "- " + v.where + ": " + v.message + "\n";
    out += std::to_string(validation.violations.size()) +
           (validation.violations.size() == 1 ? " violation\n" : " violations\n");
    return out;
}

ScoreReport render_score_report(const LoadedConfig& config, const Catalog& catalog,
                                const std::vector<std::string>& ids, bool as_set,
                                const std::string& target_label, ReportFormat format) {
    const ScoreData data = compute_score_data(config, catalog, ids, as_set);
    ScoreReport report;
    report.any_defined = data.any_defined;
    if (format == ReportFormat::machine) {
        OrderedJson body = score_object(data, config, catalog, as_set);
        OrderedJson j = OrderedJson::object();
        j["command"] = "score";
        for (auto& [key, value] : body.items()) j[key] = std::move(value);
        report.body = dump_machine(std::move(j));
    } else {
        report.body = score_header_text(config, catalog, target_label) + "\n" +
                      score_body_text(data);
    }
    return report;
}

std::string render_select_report(const LoadedConfig& config, const Catalog& catalog, std::size_t k,
                                 const SelectionResult& result, ReportFormat format) {
    const Objective& objective = config.objective;

    std::string objective_label = to_string(objective.mode);
    objective_label += " (";
    objective_label += to_string(objective.mechanism);
    objective_label += ")";
    if (objective.mode == SelectionMode::constrained)
        objective_label += ", diversity floor " + format_real(objective.diversity_floor);
    if (objective.mode == SelectionMode::weighted)
        objective_label += ", weights diversity " + format_real(objective.diversity_weight) +
                           " inclusion " + format_real(objective.inclusion_weight);

    if (format == ReportFormat::machine) {
        OrderedJson j = OrderedJson::object();
        j["command"] = "select";
        j["k"] = k;
        OrderedJson obj = OrderedJson::object();
        obj["mode"] = to_string(objective.mode);
        obj["mechanism"] = to_string(objective.mechanism);
        obj["diversity_floor"] = objective.diversity_floor;
        obj["diversity_weight"] = objective.diversity_weight;
        obj["inclusion_weight"] = objective.inclusion_weight;
        j["objective"] = std::move(obj);
        j["method"] = to_string(result.method);
        j["seed"] = result.seed;
        j["evaluated"] = result.evaluated;
        j["feasible"] = result.best.has_value();
        if (result.best) {
            j["chosen"] = result.best->ids;
            j["objective_value"] = opt_json(result.best->objective_value);
            j["diversity"] = result.best->diversity;
            j["inclusion"] = opt_json(result.best->inclusion);
        } else {
            j["chosen"] = OrderedJson::array();
            j["objective_value"] = nullptr;
            j["diversity"] = nullptr;
            j["inclusion"] = nullptr;
            j["best_diversity_seen"] = result.best_diversity_seen;
        }
        OrderedJson co_optima = OrderedJson::array();
        for (const auto& ids : result.co_optima) co_optima.push_back(ids);
        j["co_optima"] = std::move(co_optima);
        if (result.method == SelectionMethod::exhaustive) {
            OrderedJson candidates = OrderedJson::array();
            for (const CandidateTrace& c : result.candidates) {
                OrderedJson entry = OrderedJson::object();
                entry["ids"] = c.ids;
                entry["diversity"] = c.diversity;
                entry["inclusion"] = opt_json(c.inclusion);
                entry["objective_value"] = opt_json(c.objective_value);
                entry["feasible"] = c.feasible;
                candidates.push_back(std::move(entry));
            }
            j["candidates"] = std::move(candidates);
            j["trace_truncated"] = result.trace_truncated;
        } else {
            OrderedJson swaps = OrderedJson::array();
            for (const SwapLogEntry& s : result.swap_log) {
                OrderedJson entry = OrderedJson::object();
                entry["added"] = s.added;
                entry["removed"] = s.removed;
                entry["objective_value"] = opt_json(s.objective_value);
                swaps.push_back(std::move(entry));
            }
            j["swap_log"] = std::move(swaps);
        }
        if (result.best) {
            const ScoreData data = compute_score_data(config, catalog, result.best->ids, true);
            j["score"] = score_object(data, config, catalog, true);
        }
        return dump_machine(std::move(j));
    }

    std::string out;
    out += "query: " + catalog.query.text + "\n";
    out += "profile: " + profile_line(config.profile) + "\n";
    out += "objective: " + objective_label + "\n";
    out += "k: " + std::to_string(k) + "\n";
    out += "method: " + std::string(to_string(result.method)) + "\n";
    out += "evaluated: " + std::to_string(result.evaluated) + " subsets\n";

    if (!result.best) {
        out += "\nno feasible subset: best diversity " + format_real(result.best_diversity_seen) +
               " is below the floor " + format_real(objective.diversity_floor) + "\n";
        return out;
    }

    out += "\nchosen: " + id_set_label(result.best->ids) + "\n";
    out += "objective value: " + format_real(result.best->objective_value) + "\n";
    out += "diversity: " + format_real(result.best->diversity) + "\n";
    out += "inclusion: " + format_real(result.best->inclusion) + "\n";
    if (result.co_optima.size() > 1) {
        out += "co-optima:\n";
        for (const auto& ids : result.co_optima) out += "- " + id_set_label(ids) + "\n";
    }
    if (result.trace_truncated) out += "(candidate trace truncated)\n";

    if (result.method == SelectionMethod::greedy_swap && !result.swap_log.empty()) {
        out += "\nsteps\n";
        TextTable steps;
        for (const SwapLogEntry& s : result.swap_log) {
            const std::string action =
                s.removed.empty() ? "add " + s.added : "swap " + s.removed + " -> " + s.added;
            steps.add({action, format_real(s.objective_value)});
        }
        out += steps.str();
    }

    const ScoreData data = compute_score_data(config, catalog, result.best->ids, true);
    out += "\n" + score_body_text(data);
    return out;
}

std::string render_homogeneity_report(const LoadedConfig& config, const Catalog& catalog,
                                      const std::string& group,
                                      const std::optional<AttributeRef>& restrict_to,
                                      ReportFormat format) {
    InstanceSet instances;
    instances.reserve(catalog.instances.size());
    for (const Instance& x : catalog.instances) instances.push_back(&x);

    const auto shares = homogeneity_shares(config.schema, group, instances, restrict_to);
    double value = 0.0;
    for (const auto& [label, share] : shares) value = std::max(value, share);

    if (format == ReportFormat::machine) {
        OrderedJson j = OrderedJson::object();
        j["command"] = "homogeneity";
        j["group"] = group;
        j["restrict"] = restrict_to ? OrderedJson(attribute_label(*restrict_to))
                                    : OrderedJson(nullptr);
        OrderedJson share_object = OrderedJson::object();
        for (const auto& [label, share] : shares) share_object[label] = share;
        j["shares"] = std::move(share_object);
        j["homogeneity"] = value;
        return dump_machine(std::move(j));
    }

    std::string out;
    out += "homogeneity of " + group + "\n";
    if (restrict_to) out += "restriction: " + attribute_label(*restrict_to) + "\n";
    out += "\n";
    TextTable table;
    table.add({"value", "share"});
    for (const auto& [label, share] : shares) table.add({label, format_real(share)});
    out += table.str();
    out += "\nhomogeneity: " + format_real(value) + "\n";
    return out;
}

}  // namespace divsel
