#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "tabori/phonology.hpp"
#include "tabori/report.hpp"
#include "tabori/run_stats.hpp"

namespace tabori {

// All renderers produce deterministic bytes for identical inputs: fixed field
// orders, fixed float formatting, no timestamps (the run manifest is the one
// exception and carries its timestamp in a single dedicated field).

// Delimited-text matrix with a scope comment and one row per orientation.
std::string frequency_csv(const FrequencyMatrix& matrix);
// Marker emitted in place of a matrix when a scope has no annotations.
std::string empty_scope_csv(const FrequencyScope& scope);

// Machine-readable cell-by-cell significance report. An empty report
// (grand_total == 0) is emitted with an explicit "empty" flag.
std::string significance_json(const SignificanceReport& report);
SignificanceReport parse_significance_json(const std::string& text);  // throws ConfigError

std::string comparison_json(const LanguageComparison& comparison);

// Vector-graphics heatmaps: frequencies shaded by proportion, significance
// marking over/under-represented and invalid cells.
std::string frequency_heatmap_svg(const FrequencyMatrix& matrix);
std::string significance_heatmap_svg(const SignificanceReport& report);

// Per-frame annotation dump, one tab-separated row per annotation.
std::string annotations_tsv(std::span<const PhonologicalAnnotation> annotations);
std::vector<PhonologicalAnnotation> parse_annotations_tsv(const std::string& text);

// Filter report: aligned text table and machine-readable record of the same
// per-video counters.
std::string filter_report_text(const RunStats& stats);
std::string filter_report_json(const RunStats& stats);

// Throws IoError with the path on failure; creates parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// Directory / file name fragment for ids that may contain path separators.
std::string sanitize_for_path(const std::string& id);

}  // namespace tabori
