#pragma once

// Brute-force reference scorer for the tests. Everything here is coded
// directly from the score definitions with naive loops and deliberately
// different numerics (pow instead of log-space, lerp for ramps); the library
// must agree with it to tight tolerance. Types are shared with the library,
// the math is not.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "divsel/io.hpp"
#include "divsel/selection.hpp"

namespace oracle {

using namespace divsel;

inline double o_min(const std::vector<double>& v) {
    double m = v.front();
    for (double x : v) m = std::min(m, x);
    return m;
}

inline double o_mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double o_geomean(const std::vector<double>& v) {
    double p = 1;
    for (double x : v) p *= x;
    return std::pow(p, 1.0 / static_cast<double>(v.size()));
}

inline double o_cumulate(const std::vector<double>& v, Mechanism m) {
    switch (m) {
        case Mechanism::egalitarian: return o_min(v);
        case Mechanism::utilitarian: return o_mean(v);
        case Mechanism::nash: return o_geomean(v);
    }
    assert(false);
    return 0;
}

inline double o_trapezoid(double measured, double lower, double upper) {
    if (measured >= lower && measured <= upper) return 1.0;
    if (measured < lower) return lower <= 0.0 ? 0.0 : std::lerp(0.0, 1.0, measured / lower);
    return upper >= 1.0 ? 0.0 : std::lerp(1.0, 0.0, (measured - upper) / (1.0 - upper));
}

inline double o_presence_score(double measured, const PresenceTarget& t, PresenceFunction f) {
    if (f == PresenceFunction::indicator)
        return (measured >= t.lower && measured <= t.upper) ? 1.0 : 0.0;
    return o_trapezoid(measured, t.lower, t.upper);
}

// single-component equality match (the generators only measure such refs)
inline bool o_matches(const Item& item, const AttributeRef& a) {
    assert(!a.is_product());
    for (const AttributeRef& carried : item.attributes) {
        if (carried.group() != a.group()) continue;
        if (const auto* want = std::get_if<CompositeValue>(&a.value())) {
            const auto* have = std::get_if<CompositeValue>(&carried.value());
            if (!have) return false;
            bool all = true;
            for (const auto& [field, value] : *want) {
                auto it = have->find(field);
                if (it == have->end() || it->second != value) all = false;
            }
            return all;
        }
        return carried.value() == a.value();
    }
    return false;
}

inline double o_measured_presence(const AttributeRef& a, const std::vector<const Instance*>& xs,
                                  PresenceMeasurement mode) {
    if (mode == PresenceMeasurement::instance_proportion) {
        std::size_t containing = 0;
        for (const Instance* x : xs) {
            bool any = false;
            for (const Item& item : x->items)
                if (o_matches(item, a)) any = true;
            if (any) ++containing;
        }
        return static_cast<double>(containing) / static_cast<double>(xs.size());
    }
    std::size_t matching = 0, total = 0;
    for (const Instance* x : xs) {
        for (const Item& item : x->items) {
            ++total;
            if (o_matches(item, a)) ++matching;
        }
    }
    return static_cast<double>(matching) / static_cast<double>(total);
}

inline double o_aggregate(const std::vector<double>& v, PresenceAggregator g) {
    if (g == PresenceAggregator::min) return o_min(v);
    if (g == PresenceAggregator::max) {
        double m = v.front();
        for (double x : v) m = std::max(m, x);
        return m;
    }
    return o_mean(v);
}

inline double o_instance_diversity(const AttributeSchema& schema, const Instance& x,
                                   const PresenceConfig& cfg) {
    std::vector<double> scores;
    for (const AttributeRef& a : schema.measured_attributes) {
        const PresenceTarget* t = cfg.target_for(a);
        assert(t);
        std::vector<const Instance*> one{&x};
        scores.push_back(
            o_presence_score(o_measured_presence(a, one, cfg.measurement), *t, cfg.function));
    }
    return o_aggregate(scores, cfg.aggregator);
}

inline double o_set_diversity(const AttributeSchema& schema,
                              const std::vector<const Instance*>& xs, const PresenceConfig& cfg,
                              Mechanism mechanism) {
    if (cfg.set_mode == SetDiversityMode::per_instance) {
        std::vector<double> per;
        for (const Instance* x : xs) per.push_back(o_instance_diversity(schema, *x, cfg));
        return o_cumulate(per, mechanism);
    }
    std::vector<double> scores;
    for (const AttributeRef& a : schema.measured_attributes) {
        const PresenceTarget* t = cfg.target_for(a);
        assert(t);
        scores.push_back(
            o_presence_score(o_measured_presence(a, xs, cfg.measurement), *t, cfg.function));
    }
    return o_aggregate(scores, cfg.aggregator);
}

inline std::optional<double> o_rep(const AttributeSchema& schema, const std::string& group,
                                   const Item& item, const Profile& profile, const Query& q,
                                   const InclusionConfig& cfg) {
    const GroupType* type = schema.find_group(group);
    assert(type);
    const AttributeRef* ia = item.attribute_for(group);
    const AttributeRef* pa = profile.attribute_for(group);
    if (!ia || !pa) return std::nullopt;

    RepForm form = default_rep_form(type->kind);
    if (auto it = cfg.kernels.find(group); it != cfg.kernels.end()) form = it->second;

    double s = 0;
    switch (form) {
        case RepForm::categorical_equality:
            s = ia->value() == pa->value() ? 1.0 : 0.0;
            break;
        case RepForm::ordinal_similarity: {
            const double a = static_cast<double>(std::get<std::int64_t>(ia->value()));
            const double b = static_cast<double>(std::get<std::int64_t>(pa->value()));
            s = (*type->scale_max - std::abs(a - b)) / *type->scale_max;
            break;
        }
        case RepForm::numeric_similarity: {
            const auto widen = [](const AttributeValue& v) {
                if (const auto* level = std::get_if<std::int64_t>(&v))
                    return static_cast<double>(*level);
                return std::get<double>(v);
            };
            const double a = widen(ia->value());
            const double b = widen(pa->value());
            s = std::max(0.0, 1.0 - std::abs(a - b) / *type->scale_max);
            break;
        }
        case RepForm::composite_any_match: {
            const auto& a = std::get<CompositeValue>(ia->value());
            const auto& b = std::get<CompositeValue>(pa->value());
            s = 0.0;
            for (const auto& [field, value] : a) {
                auto it = b.find(field);
                if (it != b.end() && it->second == value) s = 1.0;
            }
            break;
        }
    }
    if (cfg.apply_polarity) s = std::clamp(s * q.polarity_weight * q.polarity, -1.0, 1.0);
    return s;
}

inline std::optional<double> o_instance_attribute(const AttributeSchema& schema,
                                                  const std::string& group, const Instance& x,
                                                  const Profile& profile, const Query& q,
                                                  const InclusionConfig& cfg) {
    if (!profile.attribute_for(group)) return std::nullopt;
    struct Scored {
        const Item* item;
        double rep;
    };
    std::vector<Scored> scored;
    for (const Item& item : x.items)
        if (auto rep = o_rep(schema, group, item, profile, q, cfg)) scored.push_back({&item, *rep});
    if (scored.empty()) return std::nullopt;

    switch (cfg.combiner) {
        case InstanceCombiner::single_item: {
            const Scored* pick = &scored.front();
            for (const Scored& s : scored)
                if (s.item->relevance > pick->item->relevance ||
                    (s.item->relevance == pick->item->relevance && s.item->id < pick->item->id))
                    pick = &s;
            return pick->rep;
        }
        case InstanceCombiner::relevance_weighted_mean: {
            double num = 0, den = 0;
            for (const Scored& s : scored) {
                num += s.item->relevance * s.rep;
                den += s.item->relevance;
            }
            if (den == 0) return std::nullopt;
            return num / den;
        }
        case InstanceCombiner::median_above_threshold: {
            std::vector<double> reps;
            for (const Scored& s : scored)
                if (s.item->relevance >= cfg.relevance_threshold) reps.push_back(s.rep);
            if (reps.empty()) return std::nullopt;
            std::sort(reps.begin(), reps.end());
            const std::size_t n = reps.size();
            return n % 2 ? reps[n / 2] : (reps[n / 2 - 1] + reps[n / 2]) / 2.0;
        }
        case InstanceCombiner::max: {
            double m = scored.front().rep;
            for (const Scored& s : scored) m = std::max(m, s.rep);
            return m;
        }
    }
    assert(false);
    return std::nullopt;
}

inline std::vector<std::string> o_profile_groups(const Profile& p) {
    std::vector<std::string> groups;
    for (const AttributeRef& a : p.attributes) groups.push_back(a.group());
    std::sort(groups.begin(), groups.end());
    return groups;
}

inline std::optional<double> o_instance_inclusion(const AttributeSchema& schema, const Instance& x,
                                                  const Profile& profile, const Query& q,
                                                  const InclusionConfig& cfg, Mechanism mechanism) {
    std::vector<double> defined;
    for (const std::string& group : o_profile_groups(profile))
        if (auto s = o_instance_attribute(schema, group, x, profile, q, cfg))
            defined.push_back(*s);
    if (defined.empty()) return std::nullopt;
    if (mechanism == Mechanism::nash && cfg.nash_rescale)
        for (double& v : defined) v = (v + 1.0) / 2.0;
    return o_cumulate(defined, mechanism);
}

struct OracleScore {
    double diversity = 0;
    std::optional<double> inclusion;
    std::optional<double> objective_value;
    bool feasible = true;
    std::vector<double> pool;   // what the set cumulant ranged over
};

inline OracleScore o_score_subset(const AttributeSchema& schema, const Catalog& catalog,
                                  std::vector<std::string> ids, const Profile& profile,
                                  const Objective& objective, const ScoringConfigs& configs) {
    std::sort(ids.begin(), ids.end());
    std::vector<const Instance*> xs;
    for (const std::string& id : ids) {
        const Instance* found = nullptr;
        for (const Instance& x : catalog.instances)
            if (x.id == id) found = &x;
        assert(found);
        xs.push_back(found);
    }

    OracleScore out;
    out.diversity = o_set_diversity(schema, xs, configs.presence, objective.mechanism);

    for (const Instance* x : xs) {
        if (configs.inclusion.set_basis == SetBasis::instance_cumulants) {
            if (auto s = o_instance_inclusion(schema, *x, profile, catalog.query,
                                              configs.inclusion, objective.mechanism))
                out.pool.push_back(*s);
        } else {
            for (const std::string& group : o_profile_groups(profile))
                if (auto s = o_instance_attribute(schema, group, *x, profile, catalog.query,
                                                  configs.inclusion))
                    out.pool.push_back(*s);
        }
    }
    if (!out.pool.empty()) {
        std::vector<double> pool = out.pool;
        if (objective.mechanism == Mechanism::nash && configs.inclusion.nash_rescale)
            for (double& v : pool) v = (v + 1.0) / 2.0;
        out.inclusion = o_cumulate(pool, objective.mechanism);
    }

    switch (objective.mode) {
        case SelectionMode::inclusion_only:
            out.objective_value = out.inclusion;
            break;
        case SelectionMode::diversity_only:
            out.objective_value = out.diversity;
            break;
        case SelectionMode::constrained:
            out.feasible = out.diversity >= objective.diversity_floor;
            out.objective_value = out.inclusion;
            break;
        case SelectionMode::weighted:
            if (objective.diversity_weight == 0.0)
                out.objective_value = out.inclusion;
            else if (objective.inclusion_weight == 0.0)
                out.objective_value = out.diversity;
            else if (out.inclusion)
                out.objective_value = objective.diversity_weight * out.diversity +
                                      objective.inclusion_weight * *out.inclusion;
            break;
    }
    return out;
}

inline int o_sign(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

// leximin with undefined-as-bottom, mirrored independently
inline int o_compare_pools(std::vector<double> a, std::vector<double> b) {
    if (a.size() != b.size()) return a.size() > b.size() ? 1 : -1;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (int s = o_sign(a[i], b[i])) return s;
    return 0;
}

inline int o_compare_inclusion(const OracleScore& a, const OracleScore& b, Mechanism mechanism) {
    if (mechanism == Mechanism::egalitarian) return o_compare_pools(a.pool, b.pool);
    if (a.inclusion && b.inclusion) return o_sign(*a.inclusion, *b.inclusion);
    if (a.inclusion) return 1;
    if (b.inclusion) return -1;
    return 0;
}

inline int o_compare(const OracleScore& a, const OracleScore& b, const Objective& objective) {
    switch (objective.mode) {
        case SelectionMode::diversity_only:
            return o_sign(a.diversity, b.diversity);
        case SelectionMode::inclusion_only:
            return o_compare_inclusion(a, b, objective.mechanism);
        case SelectionMode::constrained:
            if (a.feasible != b.feasible) return a.feasible ? 1 : -1;
            if (!a.feasible) return o_sign(a.diversity, b.diversity);
            return o_compare_inclusion(a, b, objective.mechanism);
        case SelectionMode::weighted:
            if (objective.diversity_weight == 0.0)
                return o_compare_inclusion(a, b, objective.mechanism);
            if (objective.inclusion_weight == 0.0) return o_sign(a.diversity, b.diversity);
            if (a.objective_value && b.objective_value)
                return o_sign(*a.objective_value, *b.objective_value);
            if (a.objective_value) return 1;
            if (b.objective_value) return -1;
            return 0;
    }
    assert(false);
    return 0;
}

struct OracleSelection {
    std::optional<std::vector<std::string>> chosen;   // nullopt: constrained infeasible
    OracleScore score;
};

/// Full enumeration by index combinations; ties to the lexicographically
/// smallest sorted id list.
inline OracleSelection o_select(const AttributeSchema& schema, const Catalog& catalog,
                                const Profile& profile, std::size_t k, const Objective& objective,
                                const ScoringConfigs& configs) {
    const std::size_t n = catalog.instances.size();
    assert(k >= 1 && k <= n);
    std::vector<std::size_t> index(k);
    for (std::size_t i = 0; i < k; ++i) index[i] = i;

    std::optional<std::vector<std::string>> best_ids;
    OracleScore best;
    while (true) {
        std::vector<std::string> ids;
        for (std::size_t i : index) ids.push_back(catalog.instances[i].id);
        std::sort(ids.begin(), ids.end());
        OracleScore s = o_score_subset(schema, catalog, ids, profile, objective, configs);
        if (!best_ids) {
            best_ids = ids;
            best = s;
        } else {
            const int order = o_compare(s, best, objective);
            if (order > 0 || (order == 0 && ids < *best_ids)) {
                best_ids = ids;
                best = s;
            }
        }
        std::size_t pos = k;
        while (pos > 0 && index[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) break;
        ++index[pos - 1];
        for (std::size_t j = pos; j < k; ++j) index[j] = index[j - 1] + 1;
    }

    OracleSelection out;
    if (objective.mode == SelectionMode::constrained && !best.feasible) return out;
    out.chosen = std::move(best_ids);
    out.score = best;
    return out;
}

}  // namespace oracle
