#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "tabori/manifest.hpp"
#include "tabori/types.hpp"

namespace tabori {

struct VideoLoadStats {
  std::string corpus_id;
  std::string video_id;
  uint64_t files = 0;
  uint64_t streamed = 0;
  uint64_t parse_failures = 0;
};

struct LoadStats {
  std::vector<VideoLoadStats> videos;

  uint64_t files() const;
  uint64_t streamed() const;
  uint64_t parse_failures() const;
};

// Frame files are the *.json entries of a video directory, ordered by file
// name; the frame id is the position in that ordering. Throws ManifestError
// when the directory does not exist.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir);

using FrameSink =
    std::function<void(const std::string& corpus_id, const std::string& video_id, Frame&&)>;

// Streams every parseable frame: corpora and videos in manifest order, frames
// in ascending frame id. Parse failures are counted per video, never fatal.
// Missing frame directories raise ManifestError before anything is streamed.
LoadStats load_corpus(const CorpusManifest& manifest, const FrameSink& sink);

}  // namespace tabori
