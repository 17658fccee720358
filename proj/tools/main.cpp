// tabori: phonological annotation and co-dependence statistics for 2D
// sign-language pose streams. Subcommands expose the pipeline stages
// individually; `run` wires them end to end.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tabori/errors.hpp"
#include "tabori/pipeline.hpp"
#include "tabori/render.hpp"
#include "tabori/synthgen.hpp"

namespace {

using tabori::ConfigError;

// One bound variable + option pointer per flag so that file/env settings are
// overridden only by flags the user actually passed.
struct PipelineArgs {
  std::string config_file;
  std::string manifest;
  std::string out;
  double min_confidence = 0.2;
  std::vector<int> required_body;
  int min_hand_points = 11;
  double threshold = 0.10;
  double alpha = 0.001;
  double min_expected = 5.0;
  bool yates = false;
  bool no_heatmaps = false;
  bool dump = false;
  int workers = 1;

  CLI::Option* manifest_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* min_confidence_opt = nullptr;
  CLI::Option* required_body_opt = nullptr;
  CLI::Option* min_hand_points_opt = nullptr;
  CLI::Option* threshold_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* min_expected_opt = nullptr;
  CLI::Option* yates_opt = nullptr;
  CLI::Option* no_heatmaps_opt = nullptr;
  CLI::Option* dump_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
};

void add_pipeline_options(CLI::App* cmd, PipelineArgs& a) {
  cmd->add_option("-c,--config", a.config_file, "JSON config file (flags win over it)");
  a.manifest_opt = cmd->add_option("-m,--manifest", a.manifest, "corpus manifest file");
  a.out_opt = cmd->add_option("-o,--out", a.out, "output directory (or env TABORI_OUT)");
  a.min_confidence_opt = cmd->add_option("--min-confidence", a.min_confidence,
                                         "keypoint confidence floor");
  a.required_body_opt =
      cmd->add_option("--required-body-indices", a.required_body,
                      "body keypoints that must clear the floor")
          ->delimiter(',');
  a.min_hand_points_opt = cmd->add_option("--min-hand-points", a.min_hand_points,
                                          "hand keypoints needed for a usable hand");
  a.threshold_opt = cmd->add_option("--threshold-fraction", a.threshold,
                                    "location threshold as a fraction of the image diagonal");
  a.alpha_opt = cmd->add_option("--alpha", a.alpha, "significance level");
  a.min_expected_opt = cmd->add_option("--min-expected", a.min_expected,
                                       "minimum expected count for a testable cell");
  a.yates_opt = cmd->add_flag("--yates", a.yates, "apply the continuity correction");
  a.no_heatmaps_opt = cmd->add_flag("--no-heatmaps", a.no_heatmaps, "skip SVG heatmaps");
  a.dump_opt = cmd->add_flag("--dump-annotations", a.dump, "write annotations.tsv");
  a.workers_opt = cmd->add_option("-j,--workers", a.workers, "worker threads");
}

void apply_config_file(const std::string& path, tabori::PipelineConfig& cfg) {
  const nlohmann::json doc = nlohmann::json::parse(tabori::read_text_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ConfigError("config file is not valid JSON: " + path);
  }
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "manifest") {
        cfg.manifest_path = value.get<std::string>();
      } else if (key == "output_dir") {
        cfg.output_dir = value.get<std::string>();
      } else if (key == "min_keypoint_confidence") {
        cfg.filter.min_keypoint_confidence = value.get<double>();
      } else if (key == "required_body_indices") {
        const auto v = value.get<std::vector<int>>();
        cfg.filter.required_body_indices = {v.begin(), v.end()};
      } else if (key == "min_valid_hand_points") {
        cfg.filter.min_valid_hand_points = value.get<int>();
      } else if (key == "threshold_fraction") {
        cfg.location.threshold_fraction = value.get<double>();
      } else if (key == "alpha") {
        cfg.alpha = value.get<double>();
      } else if (key == "min_expected") {
        cfg.min_expected = value.get<double>();
      } else if (key == "yates") {
        cfg.yates = value.get<bool>();
      } else if (key == "heatmaps") {
        cfg.heatmaps = value.get<bool>();
      } else if (key == "dump_annotations") {
        cfg.dump_annotations = value.get<bool>();
      } else if (key == "workers") {
        cfg.workers = value.get<int>();
      } else {
        throw ConfigError("config file: unknown key \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config file: key \"" + key + "\" has the wrong type");
    }
  }
}

// Precedence: flags > config file > TABORI_OUT > built-in defaults.
tabori::PipelineConfig resolve_config(const PipelineArgs& a) {
  tabori::PipelineConfig cfg;
  if (const char* env = std::getenv("TABORI_OUT")) cfg.output_dir = env;
  if (!a.config_file.empty()) apply_config_file(a.config_file, cfg);

  if (a.manifest_opt->count()) cfg.manifest_path = a.manifest;
  if (a.out_opt->count()) cfg.output_dir = a.out;
  if (a.min_confidence_opt->count()) cfg.filter.min_keypoint_confidence = a.min_confidence;
  if (a.required_body_opt->count()) {
    cfg.filter.required_body_indices = {a.required_body.begin(), a.required_body.end()};
  }
  if (a.min_hand_points_opt->count()) cfg.filter.min_valid_hand_points = a.min_hand_points;
  if (a.threshold_opt->count()) cfg.location.threshold_fraction = a.threshold;
  if (a.alpha_opt->count()) cfg.alpha = a.alpha;
  if (a.min_expected_opt->count()) cfg.min_expected = a.min_expected;
  if (a.yates_opt->count()) cfg.yates = a.yates;
  if (a.no_heatmaps_opt->count()) cfg.heatmaps = !a.no_heatmaps;
  if (a.dump_opt->count()) cfg.dump_annotations = a.dump;
  if (a.workers_opt->count()) cfg.workers = a.workers;

  if (cfg.manifest_path.empty()) {
    throw ConfigError("a manifest is required (--manifest or config file)");
  }
  if (cfg.output_dir.empty()) {
    throw ConfigError("an output directory is required (--out, config file, or TABORI_OUT)");
  }
  return cfg;
}

void print_run_summary(const tabori::PipelineResult& result) {
  const tabori::RunStats& s = result.stats;
  std::cout << "files " << s.files() << ", parsed " << s.parsed() << ", accepted "
            << s.accepted() << ", rejected " << s.rejected_total() << ", annotations "
            << s.annotations() << "\n";
  if (s.parse_failures() > 0) {
    std::cerr << "warning: " << s.parse_failures() << " frame file(s) failed to parse\n";
  }
  for (const tabori::SignificanceReport& r : result.analysis.reports) {
    if (r.grand_total == 0) {
      std::cerr << "warning: no annotations for corpus \"" << r.corpus_id << "\" ("
                << tabori::to_label(r.hand) << " hand)\n";
    }
  }
}

void run_stage(const PipelineArgs& args, tabori::PipelineStage stage) {
  tabori::PipelineConfig cfg = resolve_config(args);
  if (stage == tabori::PipelineStage::Annotate) cfg.dump_annotations = true;
  const tabori::PipelineResult result = tabori::run_pipeline(cfg, stage);
  print_run_summary(result);
  std::cout << "outputs in " << cfg.output_dir.string() << "\n";
}

struct StatsArgs {
  std::string annotations_path;
  std::string out;
  double alpha = 0.001;
  double min_expected = 5.0;
  bool yates = false;
  bool no_heatmaps = false;

  CLI::Option* out_opt = nullptr;
};

void run_stats(const StatsArgs& a) {
  std::string out = a.out;
  if (a.out_opt->count() == 0) {
    if (const char* env = std::getenv("TABORI_OUT")) out = env;
  }
  if (out.empty()) {
    throw ConfigError("an output directory is required (--out or TABORI_OUT)");
  }
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
  if (!(a.min_expected >= 0.0)) throw ConfigError("min_expected must be >= 0");

  const auto annotations =
      tabori::parse_annotations_tsv(tabori::read_text_file(a.annotations_path));
  const tabori::AnalysisOutputs outputs = tabori::analyze_annotations(
      annotations, {}, tabori::AnalysisConfig{a.alpha, a.min_expected, a.yates});
  tabori::write_analysis_outputs(outputs, out, !a.no_heatmaps);
  std::cout << "annotations " << annotations.size() << ", tables " << outputs.tables.size()
            << ", outputs in " << out << "\n";
  if (annotations.empty()) {
    std::cerr << "warning: annotation dump is empty\n";
  }
}

void run_synth(const std::string& spec_path, const std::string& out_arg,
               const CLI::Option* out_opt) {
  std::string out = out_arg;
  if (out_opt->count() == 0) {
    if (const char* env = std::getenv("TABORI_OUT")) out = env;
  }
  if (out.empty()) {
    throw ConfigError("an output directory is required (--out or TABORI_OUT)");
  }
  const auto specs = tabori::parse_synth_specs(tabori::read_text_file(spec_path));
  const auto truths = tabori::generate_corpora(specs, out);
  for (size_t i = 0; i < specs.size(); ++i) {
    std::cout << "corpus " << specs[i].corpus_id << ": " << truths[i].frames
              << " frames (planted left " << truths[i].planted_total(tabori::Hand::Left)
              << ", right " << truths[i].planted_total(tabori::Hand::Right) << ")\n";
  }
  std::cout << "manifest: " << (std::filesystem::path(out) / "manifest.json").string()
            << "\n";
}

void run_compare(const std::string& path_a, const std::string& path_b,
                 const std::string& out, const CLI::Option* out_opt) {
  const auto a = tabori::parse_significance_json(tabori::read_text_file(path_a));
  const auto b = tabori::parse_significance_json(tabori::read_text_file(path_b));
  const std::string text = tabori::comparison_json(tabori::compare_languages(a, b));
  if (out_opt->count()) {
    tabori::write_text_file(out, text);
    std::cout << "comparison written to " << out << "\n";
  } else {
    std::cout << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phonological annotation and co-dependence statistics for 2D pose streams"};
  app.require_subcommand(1);

  PipelineArgs run_args, ingest_args, annotate_args;
  CLI::App* run_cmd = app.add_subcommand("run", "full pipeline: ingest to reports");
  add_pipeline_options(run_cmd, run_args);
  run_cmd->callback([&] { run_stage(run_args, tabori::PipelineStage::Full); });

  CLI::App* ingest_cmd =
      app.add_subcommand("ingest-check", "parse and filter only; no annotations");
  add_pipeline_options(ingest_cmd, ingest_args);
  ingest_cmd->callback([&] { run_stage(ingest_args, tabori::PipelineStage::IngestCheck); });

  CLI::App* annotate_cmd =
      app.add_subcommand("annotate", "ingest, filter and dump annotations.tsv");
  add_pipeline_options(annotate_cmd, annotate_args);
  annotate_cmd->callback([&] { run_stage(annotate_args, tabori::PipelineStage::Annotate); });

  StatsArgs stats_args;
  CLI::App* stats_cmd =
      app.add_subcommand("stats", "statistics and reports from an annotation dump");
  stats_cmd->add_option("-a,--annotations", stats_args.annotations_path, "annotations.tsv")
      ->required();
  stats_args.out_opt = stats_cmd->add_option("-o,--out", stats_args.out,
                                             "output directory (or env TABORI_OUT)");
  stats_cmd->add_option("--alpha", stats_args.alpha, "significance level");
  stats_cmd->add_option("--min-expected", stats_args.min_expected,
                        "minimum expected count for a testable cell");
  stats_cmd->add_flag("--yates", stats_args.yates, "apply the continuity correction");
  stats_cmd->add_flag("--no-heatmaps", stats_args.no_heatmaps, "skip SVG heatmaps");
  stats_cmd->callback([&] { run_stats(stats_args); });

  std::string synth_spec, synth_out;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("-s,--spec", synth_spec, "generator spec file")->required();
  CLI::Option* synth_out_opt =
      synth_cmd->add_option("-o,--out", synth_out, "output directory (or env TABORI_OUT)");
  synth_cmd->callback([&] { run_synth(synth_spec, synth_out, synth_out_opt); });

  std::string cmp_a, cmp_b, cmp_out;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "compare two significance reports");
  compare_cmd->add_option("a", cmp_a, "first significance JSON")->required();
  compare_cmd->add_option("b", cmp_b, "second significance JSON")->required();
  CLI::Option* cmp_out_opt =
      compare_cmd->add_option("-o,--out", cmp_out, "write to file instead of stdout");
  compare_cmd->callback([&] { run_compare(cmp_a, cmp_b, cmp_out, cmp_out_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const tabori::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
