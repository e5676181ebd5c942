#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "divsel/schema.hpp"
#include "divsel/social_choice.hpp"

namespace divsel {

/// Representativeness kernels, one per group kind:
///   categorical_equality   1 iff the labels are equal
///   ordinal_similarity     (scale_max - |level_i - level_p|) / scale_max
///   numeric_similarity     1 - |value_i - value_p| / scale_max, floored at 0
///   composite_any_match    1 iff any subfield present on both sides matches
enum class RepForm {
    categorical_equality,
    ordinal_similarity,
    numeric_similarity,
    composite_any_match
};

const char* to_string(RepForm form);
std::optional<RepForm> rep_form_from_string(std::string_view name);

/// Default kernel for a group kind; the natural pairing above.
RepForm default_rep_form(GroupKind kind);

struct RepKernel {
    std::string group;
    RepForm form = RepForm::categorical_equality;
};

/// How item-level representativeness values combine into one instance score.
enum class InstanceCombiner { single_item, relevance_weighted_mean, median_above_threshold, max };

/// Which score multiset a set-level cumulation ranges over: per-instance
/// cumulants (default), or every per-attribute score pooled across instances.
enum class SetBasis { instance_cumulants, pooled_attributes };

const char* to_string(InstanceCombiner combiner);
const char* to_string(SetBasis basis);
std::optional<InstanceCombiner> instance_combiner_from_string(std::string_view name);
std::optional<SetBasis> set_basis_from_string(std::string_view name);

struct InclusionConfig {
    std::map<std::string, RepForm> kernels;   // per group; absent -> default by kind
    InstanceCombiner combiner = InstanceCombiner::relevance_weighted_mean;
    double relevance_threshold = 0.5;         // theta, median_above_threshold only
    Mechanism attribute_cumulator = Mechanism::utilitarian;
    Mechanism set_cumulator = Mechanism::utilitarian;
    SetBasis set_basis = SetBasis::instance_cumulants;
    bool apply_polarity = false;
    bool nash_rescale = false;                // opt-in (s+1)/2 before nash cumulation

    RepForm kernel_for(const GroupType& group) const;

    bool operator==(const InclusionConfig&) const = default;
};

ValidationResult validate_inclusion_config(const AttributeSchema& schema,
                                           const InclusionConfig& config);

/// One item's contribution to an instance score.
struct ItemScore {
    std::string item_id;
    double relevance = 0.0;
    double representativeness = 0.0;   // in [-1,1]
};

/// A score that could not be computed, and why; surfaces in report traces.
struct Exclusion {
    std::string instance_id;
    std::string group;
    std::string item_id;   // empty for instance- or attribute-level exclusions
    std::string reason;
};

/// Representativeness of one item for the profile along one group type, or
/// nullopt when either side lacks the attribute (callers exclude and trace).
/// When config.apply_polarity is set, the score is multiplied by
/// polarity_weight * polarity and clamped to [-1,1].
std::optional<double> representativeness(const AttributeSchema& schema, const RepKernel& kernel,
                                         const Item& item, const Profile& profile,
                                         const Query& query, const InclusionConfig& config);

/// Instance inclusion along one group type: the configured combiner over the
/// defined item scores. nullopt when no item yields a defined score (also
/// when the profile lacks the group, or relevance-weighted-mean meets total
/// relevance zero). `items_out`/`exclusions_out`, when given, receive the
/// per-item trace.
std::optional<double> instance_inclusion(const AttributeSchema& schema, const std::string& group,
                                         const Instance& x, const Profile& profile,
                                         const Query& query, const InclusionConfig& config,
                                         std::vector<ItemScore>* items_out = nullptr,
                                         std::vector<Exclusion>* exclusions_out = nullptr);

/// Holistic inclusion over every group type the profile carries, cumulated
/// with config.attribute_cumulator. nullopt when every attribute is
/// undefined. `per_attribute_out`, when given, maps group -> instance score.
std::optional<double> multi_attribute_inclusion(
    const AttributeSchema& schema, const Instance& x, const Profile& profile, const Query& query,
    const InclusionConfig& config,
    std::map<std::string, std::optional<double>>* per_attribute_out = nullptr,
    std::vector<Exclusion>* exclusions_out = nullptr);

/// Cumulative inclusion of a set: per-instance scores (multi-attribute, or
/// along `group` when given) cumulated with config.set_cumulator; with
/// SetBasis::pooled_attributes the cumulation ranges over the pooled
/// per-attribute scores instead. nullopt when every instance is undefined.
std::optional<double> set_inclusion(const AttributeSchema& schema,
                                    const std::optional<std::string>& group,
                                    const InstanceSet& instances, const Profile& profile,
                                    const Query& query, const InclusionConfig& config,
                                    std::vector<Exclusion>* exclusions_out = nullptr);

/// Share of the most common value of `group` among carrying items: 1 means
/// fully homogeneous (a stereotyping signal), 1/k uniform over k values.
/// Items not matching `restrict_to` (when given) are ignored. Throws
/// std::domain_error when no item carries the group.
double homogeneity(const AttributeSchema& schema, const std::string& group,
                   const InstanceSet& instances,
                   const std::optional<AttributeRef>& restrict_to = std::nullopt);

/// The per-value shares behind homogeneity(), sorted by value label.
std::vector<std::pair<std::string, double>> homogeneity_shares(
    const AttributeSchema& schema, const std::string& group, const InstanceSet& instances,
    const std::optional<AttributeRef>& restrict_to = std::nullopt);

}  // namespace divsel
