#include "tabori/manifest.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "tabori/errors.hpp"

namespace tabori {

namespace {
using nlohmann::json;
}

CorpusManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("corpora") ||
      !doc["corpora"].is_array()) {
    throw ManifestError("manifest: expected an object with a \"corpora\" array");
  }

  CorpusManifest manifest;
  std::set<std::string> corpus_ids;
  for (const json& c : doc["corpora"]) {
    if (!c.is_object() || !c.contains("id") || !c["id"].is_string() ||
        !c.contains("videos") || !c["videos"].is_array()) {
      throw ManifestError("manifest: corpus entries need an \"id\" and a \"videos\" array");
    }
    CorpusEntry corpus;
    corpus.id = c["id"].get<std::string>();
    if (corpus.id.empty()) throw ManifestError("manifest: empty corpus id");
    if (!corpus_ids.insert(corpus.id).second) {
      throw ManifestError("manifest: duplicate corpus id \"" + corpus.id + "\"");
    }

    std::set<std::string> video_ids;
    for (const json& v : c["videos"]) {
      if (!v.is_object() || !v.contains("id") || !v["id"].is_string() ||
          !v.contains("frames_dir") || !v["frames_dir"].is_string() ||
          !v.contains("width") || !v["width"].is_number_integer() ||
          !v.contains("height") || !v["height"].is_number_integer()) {
        throw ManifestError("manifest: video entries need id, frames_dir, width, height");
      }
      VideoEntry video;
      video.id = v["id"].get<std::string>();
      if (video.id.empty()) throw ManifestError("manifest: empty video id");
      if (!video_ids.insert(video.id).second) {
        throw ManifestError("manifest: duplicate video id \"" + video.id + "\" in corpus \"" +
                            corpus.id + "\"");
      }
      std::filesystem::path dir = v["frames_dir"].get<std::string>();
      video.frames_dir = dir.is_absolute() ? dir : base_dir / dir;
      video.image_width = v["width"].get<int>();
      video.image_height = v["height"].get<int>();
      if (video.image_width <= 0 || video.image_height <= 0) {
        throw ManifestError("manifest: video \"" + video.id +
                            "\" has non-positive image dimensions");
      }
      corpus.videos.push_back(std::move(video));
    }
    manifest.corpora.push_back(std::move(corpus));
  }
  return manifest;
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ManifestError("manifest: cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.parent_path());
}

}  // namespace tabori
