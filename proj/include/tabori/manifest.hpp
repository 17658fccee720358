#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace tabori {

struct VideoEntry {
  std::string id;
  std::filesystem::path frames_dir;  // resolved against the manifest location
  int image_width = 0;
  int image_height = 0;
};

struct CorpusEntry {
  std::string id;
  std::vector<VideoEntry> videos;
};

struct CorpusManifest {
  std::vector<CorpusEntry> corpora;
};

// Parses a manifest document; relative frame directories are resolved against
// base_dir. Throws ManifestError on bad syntax, duplicate corpus ids,
// duplicate video ids within a corpus, or non-positive image dimensions.
CorpusManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);

// Reads and parses a manifest file. Frame directories are resolved relative
// to the file's parent directory.
CorpusManifest load_manifest(const std::filesystem::path& path);

}  // namespace tabori
