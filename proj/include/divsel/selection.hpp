#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "divsel/inclusion.hpp"
#include "divsel/presence.hpp"
#include "divsel/schema.hpp"
#include "divsel/social_choice.hpp"

namespace divsel {

enum class SelectionMode { inclusion_only, diversity_only, constrained, weighted };
enum class SelectionMethod { exhaustive, greedy_swap };

const char* to_string(SelectionMode mode);
const char* to_string(SelectionMethod method);
std::optional<SelectionMode> selection_mode_from_string(std::string_view name);

/// What "best subset" means. `mechanism` drives every cumulation in the
/// objective: it replaces the inclusion config's attribute and set cumulators
/// so instance scores and the set score always speak the same welfare
/// language.
struct Objective {
    SelectionMode mode = SelectionMode::inclusion_only;
    Mechanism mechanism = Mechanism::utilitarian;
    double diversity_floor = 0.0;    // constrained: required minimum diversity
    double diversity_weight = 0.5;   // weighted mode
    double inclusion_weight = 0.5;

    bool operator==(const Objective&) const = default;
};

ValidationResult validate_objective(const Objective& objective);

struct ScoringConfigs {
    PresenceConfig presence;
    InclusionConfig inclusion;
};

/// Full evaluation of one subset. `inclusion_pool` is the multiset the set
/// cumulant ranges over (per-instance cumulants, or pooled per-attribute
/// scores), in sorted-id traversal order; egalitarian set comparison works on
/// this vector. Per-instance and per-item detail is filled only when scoring
/// with full_trace.
struct SubsetScore {
    std::vector<std::string> ids;   // sorted ascending
    double diversity = 0.0;
    std::optional<double> inclusion;
    std::optional<double> objective_value;
    bool feasible = true;           // constrained mode: diversity >= floor
    std::vector<double> inclusion_pool;
    std::map<std::string, std::optional<double>> instance_inclusion;
    std::map<std::string, double> instance_diversity;
    std::map<std::string, std::map<std::string, std::optional<double>>> attribute_inclusion;
    std::vector<Exclusion> exclusions;
};

struct CandidateTrace {
    std::vector<std::string> ids;
    double diversity = 0.0;
    std::optional<double> inclusion;
    std::optional<double> objective_value;
    bool feasible = true;
};

struct SwapLogEntry {
    std::string added;
    std::string removed;   // empty during forward construction
    std::optional<double> objective_value;
};

struct SelectionResult {
    SelectionMethod method = SelectionMethod::exhaustive;
    std::optional<SubsetScore> best;   // nullopt: constrained mode found nothing feasible
    std::vector<std::vector<std::string>> co_optima;   // every optimum, sorted id lists
    std::size_t evaluated = 0;
    std::vector<CandidateTrace> candidates;            // exhaustive only, capped
    bool trace_truncated = false;
    std::vector<SwapLogEntry> swap_log;                // greedy only
    std::uint64_t seed = 0;                            // recorded; search is deterministic
    double best_diversity_seen = 0.0;                  // infeasibility diagnostics
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;
inline constexpr std::size_t kCandidateTraceCap = 10'000;

/// Thrown when C(n,k) exceeds the enumeration cap; the caller should fall
/// back to select_greedy.
struct CapExceededError : std::runtime_error {
    explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

/// C(n,k) when it is <= cap, nullopt otherwise. Exact; never overflows.
std::optional<std::uint64_t> binomial_capped(std::size_t n, std::size_t k, std::uint64_t cap);

/// Instances for the given ids, sorted by id. Throws UnknownIdError on an
/// unknown or duplicate id.
InstanceSet resolve_subset(const Catalog& catalog, const std::vector<std::string>& ids);

/// The one scoring path. Both selectors and the CLI route through this, so a
/// subset has exactly one score. Cumulators come from objective.mechanism.
SubsetScore score_subset(const AttributeSchema& schema, const Catalog& catalog,
                         const std::vector<std::string>& ids, const Profile& profile,
                         const Objective& objective, const ScoringConfigs& configs,
                         bool full_trace = true);

/// Three-way candidate order under the objective. Positive: `a` is better;
/// negative: `b` is better; zero: indistinguishable (callers tie-break on
/// ids). Egalitarian inclusion compares score vectors lexicographically from
/// the minimum up; a larger defined pool beats a smaller one first, which
/// keeps the vector comparison total. Undefined scores rank below any defined
/// score. Constrained mode puts every feasible subset above every infeasible
/// one and orders infeasible subsets by diversity.
int compare_candidates(const SubsetScore& a, const SubsetScore& b, const Objective& objective);

/// Scores every k-subset and returns the maximum; ties go to the
/// lexicographically smallest sorted id list, with all co-optima recorded.
/// Throws CapExceededError when C(n,k) > cap, std::invalid_argument when
/// k = 0 or k > n.
SelectionResult select_exhaustive(const AttributeSchema& schema, const Catalog& catalog,
                                  const Profile& profile, std::size_t k,
                                  const Objective& objective, const ScoringConfigs& configs,
                                  std::uint64_t cap = kDefaultEnumerationCap);

/// Greedy forward construction followed by best-improving 1-swap local
/// search. Deterministic: candidate order and tie-breaks depend only on ids.
/// The seed is recorded in the result for provenance; no randomness is used.
SelectionResult select_greedy(const AttributeSchema& schema, const Catalog& catalog,
                              const Profile& profile, std::size_t k, const Objective& objective,
                              const ScoringConfigs& configs, std::uint64_t seed = 0);

}  // namespace divsel
