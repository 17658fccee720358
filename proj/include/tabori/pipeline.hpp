#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tabori/contingency.hpp"
#include "tabori/filter.hpp"
#include "tabori/phonology.hpp"
#include "tabori/posthoc.hpp"
#include "tabori/report.hpp"
#include "tabori/run_stats.hpp"

namespace tabori {

// How far the run goes. IngestCheck stops after filtering (filter report +
// run manifest), Annotate adds the annotation dump, Full adds the statistics
// and presentation outputs.
enum class PipelineStage { IngestCheck, Annotate, Full };

struct PipelineConfig {
  std::filesystem::path manifest_path;
  std::filesystem::path output_dir;
  FilterConfig filter;
  LocationConfig location;
  double alpha = 0.001;
  double min_expected = 5.0;
  bool yates = false;
  bool heatmaps = true;
  bool dump_annotations = false;
  int workers = 1;

  void validate() const;  // throws ConfigError
};

struct VideoTableKey {
  std::string corpus_id;
  std::string video_id;
  Hand hand = Hand::Left;

  auto operator<=>(const VideoTableKey&) const = default;
};

// Statistics and presentation results derived from an annotation stream.
struct AnalysisOutputs {
  std::vector<std::string> corpus_order;
  TableMap tables;                                     // per (corpus, hand)
  std::map<VideoTableKey, ContingencyTable> video_tables;
  std::vector<FrequencyMatrix> frequencies;            // every non-empty scope
  std::vector<SignificanceReport> reports;             // per (corpus, hand), may be empty reports
  std::vector<LanguageComparison> comparisons;         // per corpus pair per hand
};

struct AnalysisConfig {
  double alpha = 0.001;
  double min_expected = 5.0;
  bool yates = false;
};

// Pure analysis stage: accumulate, test, compare. corpus_order fixes the
// output ordering (manifest order in the pipeline, first-appearance order
// when fed from an annotation dump).
AnalysisOutputs analyze_annotations(std::span<const PhonologicalAnnotation> annotations,
                                    const std::vector<std::string>& corpus_order,
                                    const AnalysisConfig& config);

// Writes frequency matrices, significance reports, comparisons and optional
// heatmaps under out_dir. Deterministic bytes for fixed inputs.
void write_analysis_outputs(const AnalysisOutputs& outputs,
                            const std::filesystem::path& out_dir, bool heatmaps);

struct PipelineResult {
  RunStats stats;
  std::vector<PhonologicalAnnotation> annotations;
  AnalysisOutputs analysis;  // populated for PipelineStage::Full
};

// End-to-end run: ingest -> filter -> annotate -> accumulate -> significance
// -> report, with frames processed by a bounded worker pool. Results are
// identical at any worker count. Throws ConfigError / ManifestError; frame
// parse failures are counted and reported, never fatal.
PipelineResult run_pipeline(const PipelineConfig& config,
                            PipelineStage stage = PipelineStage::Full);

}  // namespace tabori
