#include "divsel/inclusion.hpp"

#include <algorithm>
#include <cmath>

namespace divsel {

namespace {

double clamp_signed(double v) { return std::clamp(v, -1.0, 1.0); }

double as_double(const AttributeValue& value, const std::string& group) {
    if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&value)) return *d;
    throw std::invalid_argument("group '" + group + "': value is not numeric");
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::vector<double> rescaled_for_nash(std::vector<double> values, Mechanism mechanism,
                                      const InclusionConfig& config) {
    if (mechanism == Mechanism::nash && config.nash_rescale) {
        for (double& v : values) v = (v + 1.0) / 2.0;
    }
    return values;
}

void note_exclusion(std::vector<Exclusion>* out, std::string instance_id, std::string group,
                    std::string item_id, std::string reason) {
    if (out)
        out->push_back({std::move(instance_id), std::move(group), std::move(item_id),
                        std::move(reason)});
}

}  // namespace

const char* to_string(RepForm form) {
    switch (form) {
        case RepForm::categorical_equality: return "categorical-equality";
        case RepForm::ordinal_similarity: return "ordinal-similarity";
        case RepForm::numeric_similarity: return "numeric-similarity";
        case RepForm::composite_any_match: return "composite-any-match";
    }
    throw std::invalid_argument("bad RepForm");
}

std::optional<RepForm> rep_form_from_string(std::string_view name) {
    if (name == "categorical-equality") return RepForm::categorical_equality;
    if (name == "ordinal-similarity") return RepForm::ordinal_similarity;
    if (name == "numeric-similarity") return RepForm::numeric_similarity;
    if (name == "composite-any-match") return RepForm::composite_any_match;
    return std::nullopt;
}

RepForm default_rep_form(GroupKind kind) {
    switch (kind) {
        case GroupKind::categorical: return RepForm::categorical_equality;
        case GroupKind::ordinal: return RepForm::ordinal_similarity;
        case GroupKind::numeric: return RepForm::numeric_similarity;
        case GroupKind::composite: return RepForm::composite_any_match;
    }
    throw std::invalid_argument("bad GroupKind");
}

const char* to_string(InstanceCombiner combiner) {
    switch (combiner) {
        case InstanceCombiner::single_item: return "single-item";
        case InstanceCombiner::relevance_weighted_mean: return "relevance-weighted-mean";
        case InstanceCombiner::median_above_threshold: return "median-above-threshold";
        case InstanceCombiner::max: return "max";
    }
    throw std::invalid_argument("bad InstanceCombiner");
}

const char* to_string(SetBasis basis) {
    switch (basis) {
        case SetBasis::instance_cumulants: return "instance-cumulants";
        case SetBasis::pooled_attributes: return "pooled-attributes";
    }
    throw std::invalid_argument("bad SetBasis");
}

std::optional<InstanceCombiner> instance_combiner_from_string(std::string_view name) {
    if (name == "single-item") return InstanceCombiner::single_item;
    if (name == "relevance-weighted-mean") return InstanceCombiner::relevance_weighted_mean;
    if (name == "median-above-threshold") return InstanceCombiner::median_above_threshold;
    if (name == "max") return InstanceCombiner::max;
    return std::nullopt;
}

std::optional<SetBasis> set_basis_from_string(std::string_view name) {
    if (name == "instance-cumulants") return SetBasis::instance_cumulants;
    if (name == "pooled-attributes") return SetBasis::pooled_attributes;
    return std::nullopt;
}

RepForm InclusionConfig::kernel_for(const GroupType& group) const {
    auto it = kernels.find(group.name);
    if (it != kernels.end()) return it->second;
    return default_rep_form(group.kind);
}

ValidationResult validate_inclusion_config(const AttributeSchema& schema,
                                           const InclusionConfig& config) {
    ValidationResult result;
    for (const auto& [name, form] : config.kernels) {
        const GroupType* group = schema.find_group(name);
        if (!group) {
            result.add("inclusion.kernels", "unknown group type '" + name + "'");
            continue;
        }
        const bool compatible = [&] {
            switch (form) {
                case RepForm::categorical_equality: return true;   // equality fits any kind
                case RepForm::ordinal_similarity: return group->kind == GroupKind::ordinal;
                case RepForm::numeric_similarity:
                    return group->kind == GroupKind::numeric || group->kind == GroupKind::ordinal;
                case RepForm::composite_any_match: return group->kind == GroupKind::composite;
            }
            return false;
        }();
        if (!compatible)
            result.add("inclusion.kernels",
                       "kernel " + std::string(to_string(form)) + " does not fit " +
                           to_string(group->kind) + " group '" + name + "'");
    }
    if (config.relevance_threshold < 0.0 || config.relevance_threshold > 1.0)
        result.add("inclusion.relevance_threshold", "must lie in [0,1]");
    return result;
}

std::optional<double> representativeness(const AttributeSchema& schema, const RepKernel& kernel,
                                         const Item& item, const Profile& profile,
                                         const Query& query, const InclusionConfig& config) {
    const GroupType* group = schema.find_group(kernel.group);
    if (!group) throw UnknownIdError("unknown group type '" + kernel.group + "'");

    const AttributeRef* item_attr = item.attribute_for(kernel.group);
    const AttributeRef* profile_attr = profile.attribute_for(kernel.group);
    if (!item_attr || !profile_attr) return std::nullopt;

    const AttributeValue& iv = item_attr->value();
    const AttributeValue& pv = profile_attr->value();

    double score = 0.0;
    switch (kernel.form) {
        case RepForm::categorical_equality:
            score = (iv == pv) ? 1.0 : 0.0;
            break;
        case RepForm::ordinal_similarity: {
            if (!group->scale_max)
                throw std::invalid_argument("group '" + kernel.group + "' has no scale_max");
            const double delta = std::abs(as_double(iv, kernel.group) - as_double(pv, kernel.group));
            score = (*group->scale_max - delta) / *group->scale_max;
            break;
        }
        case RepForm::numeric_similarity: {
            if (!group->scale_max)
                throw std::invalid_argument("group '" + kernel.group + "' has no scale_max");
            const double delta = std::abs(as_double(iv, kernel.group) - as_double(pv, kernel.group));
            score = std::max(0.0, 1.0 - delta / *group->scale_max);
            break;
        }
        case RepForm::composite_any_match: {
            const auto* ic = std::get_if<CompositeValue>(&iv);
            const auto* pc = std::get_if<CompositeValue>(&pv);
            if (!ic || !pc)
                throw std::invalid_argument("group '" + kernel.group + "': value is not composite");
            score = 0.0;
            for (const auto& [field, value] : *ic) {
                auto it = pc->find(field);
                if (it != pc->end() && it->second == value) {
                    score = 1.0;
                    break;
                }
            }
            break;
        }
    }

    if (config.apply_polarity) score = clamp_signed(score * query.polarity_weight * query.polarity);
    return score;
}

std::optional<double> instance_inclusion(const AttributeSchema& schema, const std::string& group,
                                         const Instance& x, const Profile& profile,
                                         const Query& query, const InclusionConfig& config,
                                         std::vector<ItemScore>* items_out,
                                         std::vector<Exclusion>* exclusions_out) {
    const GroupType* group_type = schema.find_group(group);
    if (!group_type) throw UnknownIdError("unknown group type '" + group + "'");

    if (!profile.attribute_for(group)) {
        note_exclusion(exclusions_out, x.id, group, "",
                       "profile carries no " + group + " attribute");
        return std::nullopt;
    }

    const RepKernel kernel{group, config.kernel_for(*group_type)};
    std::vector<ItemScore> scored;
    for (const Item& item : x.items) {
        std::optional<double> rep = representativeness(schema, kernel, item, profile, query, config);
        if (!rep) {
            note_exclusion(exclusions_out, x.id, group, item.id,
                           "item carries no " + group + " attribute");
            continue;
        }
        scored.push_back({item.id, item.relevance, *rep});
    }
    if (items_out) *items_out = scored;
    if (scored.empty()) return std::nullopt;

    switch (config.combiner) {
        case InstanceCombiner::single_item: {
            const ItemScore* pick = &scored.front();
            for (const ItemScore& s : scored) {
                if (s.relevance > pick->relevance ||
                    (s.relevance == pick->relevance && s.item_id < pick->item_id))
                    pick = &s;
            }
            return pick->representativeness;
        }
        case InstanceCombiner::relevance_weighted_mean: {
            double weighted = 0.0, total = 0.0;
            for (const ItemScore& s : scored) {
                weighted += s.relevance * s.representativeness;
                total += s.relevance;
            }
            if (total == 0.0) {
                note_exclusion(exclusions_out, x.id, group, "", "total item relevance is zero");
                return std::nullopt;
            }
            return weighted / total;
        }
        case InstanceCombiner::median_above_threshold: {
            std::vector<double> eligible;
            for (const ItemScore& s : scored)
                if (s.relevance >= config.relevance_threshold)
                    eligible.push_back(s.representativeness);
            if (eligible.empty()) {
                note_exclusion(exclusions_out, x.id, group, "",
                               "no item reaches the relevance threshold");
                return std::nullopt;
            }
            return median_of(std::move(eligible));
        }
        case InstanceCombiner::max: {
            double best = scored.front().representativeness;
            for (const ItemScore& s : scored) best = std::max(best, s.representativeness);
            return best;
        }
    }
    throw std::invalid_argument("bad InstanceCombiner");
}

namespace {

/// Profile groups in deterministic (name) order; every report and cumulation
/// walks attributes in this order.
std::vector<std::string> profile_groups_sorted(const Profile& profile) {
    std::vector<std::string> groups;
    for (const AttributeRef& attr : profile.attributes) groups.push_back(attr.group());
    std::sort(groups.begin(), groups.end());
    return groups;
}

}  // namespace

std::optional<double> multi_attribute_inclusion(
    const AttributeSchema& schema, const Instance& x, const Profile& profile, const Query& query,
    const InclusionConfig& config, std::map<std::string, std::optional<double>>* per_attribute_out,
    std::vector<Exclusion>* exclusions_out) {
    std::vector<double> defined;
    std::map<std::string, std::optional<double>> per_attribute;
    for (const std::string& group : profile_groups_sorted(profile)) {
        std::optional<double> score =
            instance_inclusion(schema, group, x, profile, query, config, nullptr, exclusions_out);
        per_attribute[group] = score;
        if (score) defined.push_back(*score);
    }
    if (per_attribute_out) *per_attribute_out = std::move(per_attribute);
    if (defined.empty()) return std::nullopt;
    defined = rescaled_for_nash(std::move(defined), config.attribute_cumulator, config);
    return cumulate(defined, config.attribute_cumulator);
}

std::optional<double> set_inclusion(const AttributeSchema& schema,
                                    const std::optional<std::string>& group,
                                    const InstanceSet& instances, const Profile& profile,
                                    const Query& query, const InclusionConfig& config,
                                    std::vector<Exclusion>* exclusions_out) {
    if (instances.empty()) throw std::invalid_argument("set_inclusion: empty instance set");

    std::vector<double> pool;
    for (const Instance* x : instances) {
        std::optional<double> score;
        if (config.set_basis == SetBasis::pooled_attributes && !group) {
            for (const std::string& g : profile_groups_sorted(profile)) {
                std::optional<double> s =
                    instance_inclusion(schema, g, *x, profile, query, config, nullptr,
                                       exclusions_out);
                if (s) pool.push_back(*s);
            }
            continue;
        }
        if (group)
            score = instance_inclusion(schema, *group, *x, profile, query, config, nullptr,
                                       exclusions_out);
        else
            score = multi_attribute_inclusion(schema, *x, profile, query, config, nullptr,
                                              exclusions_out);
        if (score) pool.push_back(*score);
    }
    if (pool.empty()) return std::nullopt;
    pool = rescaled_for_nash(std::move(pool), config.set_cumulator, config);
    return cumulate(pool, config.set_cumulator);
}

std::vector<std::pair<std::string, double>> homogeneity_shares(
    const AttributeSchema& schema, const std::string& group, const InstanceSet& instances,
    const std::optional<AttributeRef>& restrict_to) {
    if (!schema.find_group(group)) throw UnknownIdError("unknown group type '" + group + "'");

    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    for (const Instance* x : instances) {
        for (const Item& item : x->items) {
            if (restrict_to && attribute_indicator(schema, *restrict_to, item) == 0) continue;
            const AttributeRef* attr = item.attribute_for(group);
            if (!attr) continue;
            ++counts[value_label(attr->value())];
            ++total;
        }
    }
    if (total == 0)
        throw std::domain_error("no item carries group '" + group + "'" +
                                (restrict_to ? " under the given restriction" : ""));

    std::vector<std::pair<std::string, double>> shares;
    shares.reserve(counts.size());
    for (const auto& [label, count] : counts)
        shares.emplace_back(label, static_cast<double>(count) / static_cast<double>(total));
    return shares;
}

double homogeneity(const AttributeSchema& schema, const std::string& group,
                   const InstanceSet& instances, const std::optional<AttributeRef>& restrict_to) {
    double max_share = 0.0;
    for (const auto& [label, share] : homogeneity_shares(schema, group, instances, restrict_to))
        max_share = std::max(max_share, share);
    return max_share;
}

}  // namespace divsel
