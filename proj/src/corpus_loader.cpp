#include "tabori/corpus_loader.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tabori/errors.hpp"
#include "tabori/frame_io.hpp"

namespace tabori {

uint64_t LoadStats::files() const {
  uint64_t n = 0;
  for (const auto& v : videos) n += v.files;
  return n;
}

uint64_t LoadStats::streamed() const {
  uint64_t n = 0;
  for (const auto& v : videos) n += v.streamed;
  return n;
}

uint64_t LoadStats::parse_failures() const {
  uint64_t n = 0;
  for (const auto& v : videos) n += v.parse_failures;
  return n;
}

std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw ManifestError("frames directory missing: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

LoadStats load_corpus(const CorpusManifest& manifest, const FrameSink& sink) {
  // Validate every directory up front so nothing is streamed on failure.
  for (const auto& corpus : manifest.corpora) {
    for (const auto& video : corpus.videos) {
      if (!std::filesystem::is_directory(video.frames_dir)) {
        throw ManifestError("frames directory missing: " + video.frames_dir.string());
      }
    }
  }

  LoadStats stats;
  for (const auto& corpus : manifest.corpora) {
    for (const auto& video : corpus.videos) {
      VideoLoadStats vs;
      vs.corpus_id = corpus.id;
      vs.video_id = video.id;
      auto files = list_frame_files(video.frames_dir);
      vs.files = files.size();
      for (size_t i = 0; i < files.size(); ++i) {
        std::ifstream in(files[i], std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        if (!in.good() && !in.eof()) {
          ++vs.parse_failures;
          continue;
        }
        try {
          Frame frame = parse_frame_file(buf.str(), video.image_width, video.image_height,
                                         static_cast<uint64_t>(i));
          ++vs.streamed;
          sink(corpus.id, video.id, std::move(frame));
        } catch (const MalformedFile&) {
          ++vs.parse_failures;
        }
      }
      stats.videos.push_back(std::move(vs));
    }
  }
  return stats;
}

}  // namespace tabori
