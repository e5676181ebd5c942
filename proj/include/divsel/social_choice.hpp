#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace divsel {

/// Cumulation mechanisms: egalitarian keeps the worst-off score, utilitarian
/// the arithmetic mean, nash the geometric mean (sandwiched between the two).
enum class Mechanism { egalitarian, utilitarian, nash };

const char* to_string(Mechanism mechanism);
std::optional<Mechanism> mechanism_from_string(std::string_view name);

/// All three mechanisms, in canonical report order.
inline constexpr Mechanism kMechanisms[] = {Mechanism::egalitarian, Mechanism::utilitarian,
                                            Mechanism::nash};

/// Collapses a nonempty score list into one value. Nash is evaluated in log
/// space; an exact zero short-circuits to zero. Throws std::invalid_argument
/// on an empty list and std::domain_error when nash meets a negative score
/// (callers holding signed scores can opt into the (s+1)/2 rescale in their
/// configuration).
double cumulate(std::span<const double> scores, Mechanism mechanism);

enum class ComparisonOutcome { first_preferred, second_preferred, indifferent };

struct ComparisonVerdict {
    ComparisonOutcome outcome = ComparisonOutcome::indifferent;
    std::vector<std::pair<double, double>> trace;   // score pairs, in comparison order
};

/// Orders two score vectors. Utilitarian and nash compare cumulated values;
/// egalitarian compares ascending-sorted vectors lexicographically (worst
/// scores first) and therefore requires equal lengths. Exact ties at every
/// position are indifferent.
ComparisonVerdict compare_sets(std::span<const double> s1, std::span<const double> s2,
                               Mechanism mechanism);

}  // namespace divsel
