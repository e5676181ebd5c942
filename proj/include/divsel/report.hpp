#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divsel/io.hpp"
#include "divsel/selection.hpp"

namespace divsel {

enum class ReportFormat { text, machine };

const char* to_string(ReportFormat format);
std::optional<ReportFormat> report_format_from_string(std::string_view name);

/// Fixed 4-decimal rendering used by every text report; negative zero prints
/// as zero, undefined as "n/a".
std::string format_real(double value);
std::string format_real(const std::optional<double>& value);

/// Reports are deterministic: fixed float formatting, sorted orderings, one
/// trailing newline; identical inputs render byte-identical output.

std::string render_validate_report(const ValidationResult& validation, ReportFormat format);

struct ScoreReport {
    std::string body;
    bool any_defined = true;   // false: every requested cumulant was undefined
};

/// Scoring report for the given instances: attribute rows by instance
/// columns, cumulant rows per mechanism beneath, then presence/diversity
/// detail. `as_set` adds set-level inclusion and diversity blocks.
/// `target_label` names the scope in the text header ("x1", "set {x1, x3}",
/// "each").
ScoreReport render_score_report(const LoadedConfig& config, const Catalog& catalog,
                                const std::vector<std::string>& ids, bool as_set,
                                const std::string& target_label, ReportFormat format);

std::string render_select_report(const LoadedConfig& config, const Catalog& catalog, std::size_t k,
                                 const SelectionResult& result, ReportFormat format);

/// Throws std::domain_error when no item carries the group (after the
/// restriction, if any).
std::string render_homogeneity_report(const LoadedConfig& config, const Catalog& catalog,
                                      const std::string& group,
                                      const std::optional<AttributeRef>& restrict_to,
                                      ReportFormat format);

}  // namespace divsel
