#include "tabori/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "tabori/corpus_loader.hpp"
#include "tabori/errors.hpp"
#include "tabori/frame_io.hpp"
#include "tabori/manifest.hpp"
#include "tabori/render.hpp"

namespace tabori {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* stage_label(PipelineStage stage) {
  switch (stage) {
    case PipelineStage::IngestCheck: return "ingest-check";
    case PipelineStage::Annotate: return "annotate";
    case PipelineStage::Full: return "full";
  }
  return "full";
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Index-stealing worker pool. The callable sees every index exactly once;
// the first exception wins and is rethrown on the caller thread.
void parallel_for(size_t count, int workers, const std::function<void(size_t)>& body) {
  if (workers <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  const size_t n = std::min<size_t>(static_cast<size_t>(workers), count);
  pool.reserve(n);
  for (size_t i = 0; i < n; ++i) pool.emplace_back(run);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct WorkItem {
  const CorpusEntry* corpus = nullptr;
  const VideoEntry* video = nullptr;
  std::filesystem::path file;
  uint64_t frame_id = 0;
};

struct FrameOutcome {
  bool parse_ok = false;
  FilterVerdict verdict;
  AnnotationResult result;
};

std::string join_name(std::initializer_list<std::string> parts, const char* suffix) {
  std::string name;
  for (const std::string& part : parts) {
    if (!name.empty()) name += "__";
    name += sanitize_for_path(part);
  }
  return name + suffix;
}

}  // namespace

void PipelineConfig::validate() const {
  if (manifest_path.empty()) throw ConfigError("manifest path must be set");
  if (output_dir.empty()) throw ConfigError("output directory must be set");
  filter.validate();
  location.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
  if (!(min_expected >= 0.0)) throw ConfigError("min_expected must be >= 0");
  if (workers < 1 || workers > 1024) throw ConfigError("workers must be in [1,1024]");
}

AnalysisOutputs analyze_annotations(std::span<const PhonologicalAnnotation> annotations,
                                    const std::vector<std::string>& corpus_order,
                                    const AnalysisConfig& config) {
  AnalysisOutputs out;
  out.corpus_order = corpus_order;
  out.tables = accumulate(annotations);

  // First-appearance bookkeeping: corpora missing from the given order and
  // the per-corpus video order for Table-5-style per-video matrices.
  std::map<std::string, std::vector<std::string>> corpus_videos;
  for (const PhonologicalAnnotation& ann : annotations) {
    if (std::find(out.corpus_order.begin(), out.corpus_order.end(), ann.corpus_id) ==
        out.corpus_order.end()) {
      out.corpus_order.push_back(ann.corpus_id);
    }
    auto& videos = corpus_videos[ann.corpus_id];
    if (std::find(videos.begin(), videos.end(), ann.video_id) == videos.end()) {
      videos.push_back(ann.video_id);
    }
    VideoTableKey key{ann.corpus_id, ann.video_id, ann.hand};
    auto [it, inserted] = out.video_tables.try_emplace(key);
    if (inserted) {
      it->second.corpus_id = ann.corpus_id;
      it->second.hand = ann.hand;
    }
    it->second.add(ann.orientation, ann.location);
  }

  for (const std::string& corpus : out.corpus_order) {
    for (Hand hand : kHands) {
      const auto table = out.tables.find(TableKey{corpus, hand});
      if (table != out.tables.end()) {
        out.frequencies.push_back(relative_frequencies(table->second));
        out.reports.push_back(significance_map(table->second, config.alpha,
                                               config.min_expected, config.yates));
      } else {
        SignificanceReport empty;  // explicit empty marker for the scope
        empty.corpus_id = corpus;
        empty.hand = hand;
        empty.alpha = config.alpha;
        empty.min_expected = config.min_expected;
        empty.yates = config.yates;
        out.reports.push_back(std::move(empty));
      }
      for (const std::string& video : corpus_videos[corpus]) {
        const auto vt = out.video_tables.find(VideoTableKey{corpus, video, hand});
        if (vt != out.video_tables.end()) {
          out.frequencies.push_back(
              relative_frequencies(vt->second, FrequencyScope{corpus, video, hand}));
        }
      }
    }
  }

  for (size_t i = 0; i < out.corpus_order.size(); ++i) {
    for (size_t j = i + 1; j < out.corpus_order.size(); ++j) {
      for (Hand hand : kHands) {
        const SignificanceReport* a = nullptr;
        const SignificanceReport* b = nullptr;
        for (const SignificanceReport& r : out.reports) {
          if (r.hand != hand) continue;
          if (r.corpus_id == out.corpus_order[i]) a = &r;
          if (r.corpus_id == out.corpus_order[j]) b = &r;
        }
        if (a && b) out.comparisons.push_back(compare_languages(*a, *b));
      }
    }
  }
  return out;
}

void write_analysis_outputs(const AnalysisOutputs& outputs,
                            const std::filesystem::path& out_dir, bool heatmaps) {
  for (const FrequencyMatrix& m : outputs.frequencies) {
    std::string name;
    if (m.scope.video_id) {
      name = join_name({m.scope.corpus_id, *m.scope.video_id,
                        m.scope.hand ? to_label(*m.scope.hand) : "both"},
                       ".csv");
    } else {
      name = join_name({m.scope.corpus_id, m.scope.hand ? to_label(*m.scope.hand) : "both"},
                       ".csv");
    }
    write_text_file(out_dir / "frequency" / name, frequency_csv(m));
    if (heatmaps && !m.scope.video_id) {
      write_text_file(out_dir / "heatmaps" /
                          join_name({m.scope.corpus_id,
                                     m.scope.hand ? to_label(*m.scope.hand) : "both"},
                                    "_freq.svg"),
                      frequency_heatmap_svg(m));
    }
  }

  for (const SignificanceReport& report : outputs.reports) {
    const std::string base = join_name({report.corpus_id, to_label(report.hand)}, "");
    write_text_file(out_dir / "significance" / (base + ".json"), significance_json(report));
    if (report.grand_total == 0) {
      // No frequency matrix exists for this scope; leave an explicit marker.
      write_text_file(out_dir / "frequency" / (base + ".csv"),
                      empty_scope_csv(FrequencyScope{report.corpus_id, std::nullopt,
                                                     report.hand}));
    } else if (heatmaps) {
      write_text_file(out_dir / "heatmaps" / (base + "_sig.svg"),
                      significance_heatmap_svg(report));
    }
  }

  for (const LanguageComparison& cmp : outputs.comparisons) {
    write_text_file(out_dir / "comparison" /
                        join_name({cmp.corpus_a, cmp.corpus_b, to_label(cmp.hand)}, ".json"),
                    comparison_json(cmp));
  }
}

namespace {

ordered_json config_json(const PipelineConfig& config) {
  ordered_json j;
  j["manifest"] = config.manifest_path.generic_string();
  j["output_dir"] = config.output_dir.generic_string();
  ordered_json filter;
  filter["min_keypoint_confidence"] = config.filter.min_keypoint_confidence;
  filter["required_body_indices"] = config.filter.required_body_indices;
  filter["min_valid_hand_points"] = config.filter.min_valid_hand_points;
  j["filter"] = filter;
  j["threshold_fraction"] = config.location.threshold_fraction;
  j["alpha"] = config.alpha;
  j["min_expected"] = config.min_expected;
  j["yates"] = config.yates;
  j["heatmaps"] = config.heatmaps;
  j["dump_annotations"] = config.dump_annotations;
  j["workers"] = config.workers;
  return j;
}

void write_run_manifest(const PipelineConfig& config, PipelineStage stage,
                        const RunStats& stats) {
  ordered_json j;
  j["tool"] = "tabori";
  j["stage"] = stage_label(stage);
  j["timestamp_utc"] = utc_timestamp();  // the only nondeterministic output field
  j["config"] = config_json(config);

  ordered_json totals;
  totals["files"] = stats.files();
  totals["parsed"] = stats.parsed();
  totals["parse_failures"] = stats.parse_failures();
  totals["accepted"] = stats.accepted();
  ordered_json rejected;
  for (int r = 0; r < kRejectReasonCount; ++r) {
    rejected[to_label(static_cast<RejectReason>(r))] =
        stats.rejected(static_cast<RejectReason>(r));
  }
  totals["rejected"] = rejected;
  totals["hands_skipped"] = stats.hands_skipped();
  totals["annotations"] = stats.annotations();
  j["totals"] = totals;

  ordered_json per_table = ordered_json::array();
  for (const auto& [key, count] : stats.annotations_per_table) {
    per_table.push_back({{"corpus_id", key.corpus_id},
                         {"hand", to_label(key.hand)},
                         {"annotations", count}});
  }
  j["annotations_per_table"] = per_table;
  write_text_file(config.output_dir / "run_manifest.json", j.dump(2) + "\n");
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, PipelineStage stage) {
  config.validate();
  const CorpusManifest manifest = load_manifest(config.manifest_path);

  // Enumerate all work up front; listing also surfaces missing directories
  // before any frame is parsed.
  std::vector<WorkItem> items;
  struct VideoRange {
    const CorpusEntry* corpus;
    const VideoEntry* video;
    size_t begin, count;
  };
  std::vector<VideoRange> ranges;
  for (const CorpusEntry& corpus : manifest.corpora) {
    for (const VideoEntry& video : corpus.videos) {
      const std::vector<std::filesystem::path> files = list_frame_files(video.frames_dir);
      ranges.push_back({&corpus, &video, items.size(), files.size()});
      for (size_t i = 0; i < files.size(); ++i) {
        items.push_back({&corpus, &video, files[i], static_cast<uint64_t>(i)});
      }
    }
  }

  const bool annotate = stage != PipelineStage::IngestCheck;
  std::vector<FrameOutcome> outcomes(items.size());
  parallel_for(items.size(), config.workers, [&](size_t i) {
    const WorkItem& item = items[i];
    FrameOutcome& outcome = outcomes[i];
    Frame frame;
    try {
      frame = parse_frame_file(read_text_file(item.file), item.video->image_width,
                               item.video->image_height, item.frame_id);
    } catch (const Error&) {
      outcome.parse_ok = false;
      return;
    }
    outcome.parse_ok = true;
    outcome.verdict = filter_frame(frame, config.filter);
    if (annotate && outcome.verdict.accepted) {
      outcome.result = annotate_frame(frame, outcome.verdict, config.filter, config.location,
                                      item.corpus->id, item.video->id);
    }
  });

  // Sequential reduce in manifest order makes every downstream artifact
  // independent of the worker count.
  PipelineResult result;
  for (const VideoRange& range : ranges) {
    VideoStats v;
    v.corpus_id = range.corpus->id;
    v.video_id = range.video->id;
    v.files = range.count;
    for (size_t i = range.begin; i < range.begin + range.count; ++i) {
      const FrameOutcome& outcome = outcomes[i];
      if (!outcome.parse_ok) {
        ++v.parse_failures;
        continue;
      }
      ++v.parsed;
      if (!outcome.verdict.accepted) {
        ++v.rejected[static_cast<size_t>(outcome.verdict.reason)];
        continue;
      }
      ++v.accepted;
      v.hands_skipped += static_cast<uint64_t>(outcome.result.hands_skipped);
      v.annotations += outcome.result.annotations.size();
      for (const PhonologicalAnnotation& ann : outcome.result.annotations) {
        ++result.stats.annotations_per_table[TableKey{ann.corpus_id, ann.hand}];
        result.annotations.push_back(ann);
      }
    }
    result.stats.videos.push_back(std::move(v));
  }

  write_text_file(config.output_dir / "filter_report.txt", filter_report_text(result.stats));
  write_text_file(config.output_dir / "filter_report.json", filter_report_json(result.stats));
  if (annotate && config.dump_annotations) {
    write_text_file(config.output_dir / "annotations.tsv",
                    annotations_tsv(result.annotations));
  }

  if (stage == PipelineStage::Full) {
    std::vector<std::string> corpus_order;
    for (const CorpusEntry& corpus : manifest.corpora) corpus_order.push_back(corpus.id);
    result.analysis = analyze_annotations(
        result.annotations, corpus_order,
        AnalysisConfig{config.alpha, config.min_expected, config.yates});
    write_analysis_outputs(result.analysis, config.output_dir, config.heatmaps);
  }

  write_run_manifest(config, stage, result.stats);
  return result;
}

}  // namespace tabori
