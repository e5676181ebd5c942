#include "divsel/social_choice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divsel {

const char* to_string(Mechanism mechanism) {
    switch (mechanism) {
        case Mechanism::egalitarian: return "egalitarian";
        case Mechanism::utilitarian: return "utilitarian";
        case Mechanism::nash: return "nash";
    }
    return "?";
}

std::optional<Mechanism> mechanism_from_string(std::string_view name) {
    if (name == "egalitarian") return Mechanism::egalitarian;
    if (name == "utilitarian") return Mechanism::utilitarian;
    if (name == "nash") return Mechanism::nash;
    return std::nullopt;
}

double cumulate(std::span<const double> scores, Mechanism mechanism) {
    if (scores.empty()) throw std::invalid_argument("cumulate: empty score list");
    switch (mechanism) {
        case Mechanism::egalitarian:
            return *std::min_element(scores.begin(), scores.end());
        case Mechanism::utilitarian: {
            double sum = 0.0;
            for (double s : scores) sum += s;
            return sum / static_cast<double>(scores.size());
        }
        case Mechanism::nash: {
            double log_sum = 0.0;
            for (double s : scores) {
                if (s < 0.0)
                    throw std::domain_error(
                        "nash: negative score; enable the (s+1)/2 rescale option to cumulate "
                        "signed scores");
                if (s == 0.0) return 0.0;
                log_sum += std::log(s);
            }
            return std::exp(log_sum / static_cast<double>(scores.size()));
        }
    }
    throw std::invalid_argument("cumulate: unknown mechanism");
}

ComparisonVerdict compare_sets(std::span<const double> s1, std::span<const double> s2,
                               Mechanism mechanism) {
    ComparisonVerdict verdict;
    if (mechanism == Mechanism::egalitarian) {
        if (s1.size() != s2.size())
            throw std::invalid_argument("compare_sets: egalitarian comparison needs equal sizes");
        std::vector<double> a(s1.begin(), s1.end());
        std::vector<double> b(s2.begin(), s2.end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        for (std::size_t i = 0; i < a.size(); ++i) {
            verdict.trace.emplace_back(a[i], b[i]);
            if (a[i] > b[i]) {
                verdict.outcome = ComparisonOutcome::first_preferred;
                return verdict;
            }
            if (a[i] < b[i]) {
                verdict.outcome = ComparisonOutcome::second_preferred;
                return verdict;
            }
        }
        verdict.outcome = ComparisonOutcome::indifferent;
        return verdict;
    }
    const double c1 = cumulate(s1, mechanism);
    const double c2 = cumulate(s2, mechanism);
    verdict.trace.emplace_back(c1, c2);
    if (c1 > c2)
        verdict.outcome = ComparisonOutcome::first_preferred;
    else if (c1 < c2)
        verdict.outcome = ComparisonOutcome::second_preferred;
    else
        verdict.outcome = ComparisonOutcome::indifferent;
    return verdict;
}

}  // namespace divsel
