#include "divsel/selection.hpp"

#include <algorithm>
#include <numeric>

namespace divsel {

namespace {

int sign_of(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

int outcome_to_sign(ComparisonOutcome outcome) {
    switch (outcome) {
        case ComparisonOutcome::first_preferred: return 1;
        case ComparisonOutcome::second_preferred: return -1;
        case ComparisonOutcome::indifferent: return 0;
    }
    throw std::invalid_argument("bad ComparisonOutcome");
}

/// Leximin with undefined-as-bottom: a larger defined pool wins outright,
/// equal pools compare lexicographically from the minimum up.
int compare_inclusion(const SubsetScore& a, const SubsetScore& b, Mechanism mechanism) {
    if (mechanism == Mechanism::egalitarian) {
        if (a.inclusion_pool.size() != b.inclusion_pool.size())
            return a.inclusion_pool.size() > b.inclusion_pool.size() ? 1 : -1;
        if (a.inclusion_pool.empty()) return 0;
        return outcome_to_sign(
            compare_sets(a.inclusion_pool, b.inclusion_pool, Mechanism::egalitarian).outcome);
    }
    if (a.inclusion && b.inclusion) return sign_of(*a.inclusion, *b.inclusion);
    if (a.inclusion) return 1;
    if (b.inclusion) return -1;
    return 0;
}

CandidateTrace to_trace(const SubsetScore& s) {
    return {s.ids, s.diversity, s.inclusion, s.objective_value, s.feasible};
}

void require_valid_k(std::size_t k, std::size_t n) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (k > n)
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds catalog size " +
                                    std::to_string(n));
}

std::vector<std::string> sorted_instance_ids(const Catalog& catalog) {
    std::vector<std::string> ids;
    ids.reserve(catalog.instances.size());
    for (const Instance& x : catalog.instances) ids.push_back(x.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

const char* to_string(SelectionMode mode) {
    switch (mode) {
        case SelectionMode::inclusion_only: return "inclusion-only";
        case SelectionMode::diversity_only: return "diversity-only";
        case SelectionMode::constrained: return "constrained";
        case SelectionMode::weighted: return "weighted";
    }
    throw std::invalid_argument("bad SelectionMode");
}

const char* to_string(SelectionMethod method) {
    switch (method) {
        case SelectionMethod::exhaustive: return "exhaustive";
        case SelectionMethod::greedy_swap: return "greedy-swap";
    }
    throw std::invalid_argument("bad SelectionMethod");
}

std::optional<SelectionMode> selection_mode_from_string(std::string_view name) {
    if (name == "inclusion-only") return SelectionMode::inclusion_only;
    if (name == "diversity-only") return SelectionMode::diversity_only;
    if (name == "constrained") return SelectionMode::constrained;
    if (name == "weighted") return SelectionMode::weighted;
    return std::nullopt;
}

ValidationResult validate_objective(const Objective& objective) {
    ValidationResult result;
    if (objective.mode == SelectionMode::constrained &&
        (objective.diversity_floor < 0.0 || objective.diversity_floor > 1.0))
        result.add("objective.diversity_floor", "must lie in [0,1]");
    if (objective.mode == SelectionMode::weighted) {
        if (objective.diversity_weight < 0.0 || objective.inclusion_weight < 0.0)
            result.add("objective.weights", "must be nonnegative");
        else if (objective.diversity_weight + objective.inclusion_weight <= 0.0)
            result.add("objective.weights", "must sum to a positive value");
    }
    return result;
}

std::optional<std::uint64_t> binomial_capped(std::size_t n, std::size_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;   // exact at every step
        if (c > cap) return std::nullopt;
    }
    return static_cast<std::uint64_t>(c);
}

InstanceSet resolve_subset(const Catalog& catalog, const std::vector<std::string>& ids) {
    std::vector<std::string> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) throw UnknownIdError("duplicate instance id '" + *dup + "'");

    InstanceSet instances;
    instances.reserve(sorted.size());
    for (const std::string& id : sorted) {
        const Instance* x = catalog.find_instance(id);
        if (!x) throw UnknownIdError("unknown instance id '" + id + "'");
        instances.push_back(x);
    }
    return instances;
}

SubsetScore score_subset(const AttributeSchema& schema, const Catalog& catalog,
                         const std::vector<std::string>& ids, const Profile& profile,
                         const Objective& objective, const ScoringConfigs& configs,
                         bool full_trace) {
    const InstanceSet instances = resolve_subset(catalog, ids);

    SubsetScore s;
    s.ids.reserve(instances.size());
    for (const Instance* x : instances) s.ids.push_back(x->id);

    s.diversity = set_diversity(schema, instances, configs.presence, objective.mechanism);

    InclusionConfig inclusion_config = configs.inclusion;
    inclusion_config.attribute_cumulator = objective.mechanism;
    inclusion_config.set_cumulator = objective.mechanism;

    std::vector<Exclusion>* exclusions = full_trace ? &s.exclusions : nullptr;
    for (const Instance* x : instances) {
        std::map<std::string, std::optional<double>> per_attribute;
        const std::optional<double> cumulant = multi_attribute_inclusion(
            schema, *x, profile, catalog.query, inclusion_config, &per_attribute, exclusions);
        if (inclusion_config.set_basis == SetBasis::instance_cumulants) {
            if (cumulant) s.inclusion_pool.push_back(*cumulant);
        } else {
            for (const auto& [group, score] : per_attribute)
                if (score) s.inclusion_pool.push_back(*score);
        }
        if (full_trace) {
            s.instance_inclusion[x->id] = cumulant;
            s.attribute_inclusion[x->id] = std::move(per_attribute);
            s.instance_diversity[x->id] = diversity_score(schema, *x, configs.presence);
        }
    }
    if (!s.inclusion_pool.empty()) {
        std::vector<double> pool = s.inclusion_pool;
        if (objective.mechanism == Mechanism::nash && inclusion_config.nash_rescale)
            for (double& v : pool) v = (v + 1.0) / 2.0;
        s.inclusion = cumulate(pool, objective.mechanism);
    }

    switch (objective.mode) {
        case SelectionMode::inclusion_only:
            s.objective_value = s.inclusion;
            break;
        case SelectionMode::diversity_only:
            s.objective_value = s.diversity;
            break;
        case SelectionMode::constrained:
            s.feasible = s.diversity >= objective.diversity_floor;
            s.objective_value = s.inclusion;
            break;
        case SelectionMode::weighted:
            if (objective.diversity_weight == 0.0)
                s.objective_value = s.inclusion;
            else if (objective.inclusion_weight == 0.0)
                s.objective_value = s.diversity;
            else if (s.inclusion)
                s.objective_value = objective.diversity_weight * s.diversity +
                                    objective.inclusion_weight * *s.inclusion;
            break;
    }
    return s;
}

int compare_candidates(const SubsetScore& a, const SubsetScore& b, const Objective& objective) {
    switch (objective.mode) {
        case SelectionMode::diversity_only:
            return sign_of(a.diversity, b.diversity);
        case SelectionMode::inclusion_only:
            return compare_inclusion(a, b, objective.mechanism);
        case SelectionMode::constrained:
            if (a.feasible != b.feasible) return a.feasible ? 1 : -1;
            if (!a.feasible) return sign_of(a.diversity, b.diversity);
            return compare_inclusion(a, b, objective.mechanism);
        case SelectionMode::weighted:
            if (objective.diversity_weight == 0.0)
                return compare_inclusion(a, b, objective.mechanism);
            if (objective.inclusion_weight == 0.0) return sign_of(a.diversity, b.diversity);
            if (a.objective_value && b.objective_value)
                return sign_of(*a.objective_value, *b.objective_value);
            if (a.objective_value) return 1;
            if (b.objective_value) return -1;
            return 0;
    }
    throw std::invalid_argument("bad SelectionMode");
}

SelectionResult select_exhaustive(const AttributeSchema& schema, const Catalog& catalog,
                                  const Profile& profile, std::size_t k,
                                  const Objective& objective, const ScoringConfigs& configs,
                                  std::uint64_t cap) {
    const std::size_t n = catalog.instances.size();
    require_valid_k(k, n);
    if (!binomial_capped(n, k, cap))
        throw CapExceededError("C(" + std::to_string(n) + "," + std::to_string(k) +
                               ") exceeds the enumeration cap of " + std::to_string(cap) +
                               "; use the greedy selector");

    SelectionResult result;
    result.method = SelectionMethod::exhaustive;

    std::optional<SubsetScore> best;
    std::vector<std::vector<std::string>> ties;
    bool ties_truncated = false;

    std::vector<std::size_t> index(k);
    std::iota(index.begin(), index.end(), std::size_t{0});
    while (true) {
        std::vector<std::string> ids;
        ids.reserve(k);
        for (std::size_t i : index) ids.push_back(catalog.instances[i].id);
        SubsetScore s = score_subset(schema, catalog, ids, profile, objective, configs, false);

        ++result.evaluated;
        result.best_diversity_seen = std::max(result.best_diversity_seen, s.diversity);
        if (result.candidates.size() < kCandidateTraceCap)
            result.candidates.push_back(to_trace(s));
        else
            result.trace_truncated = true;

        if (!best) {
            ties = {s.ids};
            best = std::move(s);
        } else {
            const int order = compare_candidates(s, *best, objective);
            if (order > 0) {
                ties = {s.ids};
                ties_truncated = false;
                best = std::move(s);
            } else if (order == 0) {
                if (ties.size() < kCandidateTraceCap)
                    ties.push_back(s.ids);
                else
                    ties_truncated = true;
                if (s.ids < best->ids) best = std::move(s);
            }
        }

        // next k-combination of {0..n-1}
        std::size_t pos = k;
        while (pos > 0 && index[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) break;
        ++index[pos - 1];
        for (std::size_t j = pos; j < k; ++j) index[j] = index[j - 1] + 1;
    }

    result.trace_truncated = result.trace_truncated || ties_truncated;
    if (objective.mode == SelectionMode::constrained && !best->feasible) {
        result.best = std::nullopt;   // nothing met the floor
        return result;
    }
    std::sort(ties.begin(), ties.end());
    result.co_optima = std::move(ties);
    result.best = score_subset(schema, catalog, best->ids, profile, objective, configs, true);
    return result;
}

SelectionResult select_greedy(const AttributeSchema& schema, const Catalog& catalog,
                              const Profile& profile, std::size_t k, const Objective& objective,
                              const ScoringConfigs& configs, std::uint64_t seed) {
    const std::size_t n = catalog.instances.size();
    require_valid_k(k, n);
    const std::vector<std::string> all_ids = sorted_instance_ids(catalog);

    SelectionResult result;
    result.method = SelectionMethod::greedy_swap;
    result.seed = seed;

    auto lite_score = [&](const std::vector<std::string>& ids) {
        ++result.evaluated;
        return score_subset(schema, catalog, ids, profile, objective, configs, false);
    };
    const auto better = [&](const SubsetScore& a, const SubsetScore& b) {
        const int order = compare_candidates(a, b, objective);
        return order > 0 || (order == 0 && a.ids < b.ids);
    };

    std::vector<std::string> chosen;
    std::optional<SubsetScore> current;
    for (std::size_t step = 0; step < k; ++step) {
        std::optional<SubsetScore> best_grown;
        std::string best_added;
        for (const std::string& id : all_ids) {
            if (std::find(chosen.begin(), chosen.end(), id) != chosen.end()) continue;
            std::vector<std::string> grown = chosen;
            grown.push_back(id);
            SubsetScore s = lite_score(grown);
            if (!best_grown || better(s, *best_grown)) {
                best_grown = std::move(s);
                best_added = id;
            }
        }
        chosen = best_grown->ids;
        result.swap_log.push_back({best_added, "", best_grown->objective_value});
        current = std::move(best_grown);
    }

    for (bool improved = true; improved;) {
        improved = false;
        std::optional<SubsetScore> best_swap;
        std::string best_in, best_out;
        for (const std::string& out : current->ids) {
            for (const std::string& in : all_ids) {
                if (std::find(current->ids.begin(), current->ids.end(), in) != current->ids.end())
                    continue;
                std::vector<std::string> swapped;
                for (const std::string& id : current->ids)
                    if (id != out) swapped.push_back(id);
                swapped.push_back(in);
                SubsetScore s = lite_score(swapped);
                if (compare_candidates(s, *current, objective) <= 0) continue;
                if (!best_swap || better(s, *best_swap)) {
                    best_swap = std::move(s);
                    best_in = in;
                    best_out = out;
                }
            }
        }
        if (best_swap) {
            current = std::move(best_swap);
            result.swap_log.push_back({best_in, best_out, current->objective_value});
            improved = true;
        }
    }

    result.best_diversity_seen = current->diversity;
    if (objective.mode == SelectionMode::constrained && !current->feasible) {
        result.best = std::nullopt;
        return result;
    }
    result.best = score_subset(schema, catalog, current->ids, profile, objective, configs, true);
    return result;
}

}  // namespace divsel
