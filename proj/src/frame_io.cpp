#include "tabori/frame_io.hpp"

#include <cmath>
#include <json.hpp>

#include "tabori/errors.hpp"

namespace tabori {

namespace {

using nlohmann::json;

Keypoint2D read_triple(const json& arr, size_t base, const char* field) {
  Keypoint2D kp;
  double v[3];
  for (size_t k = 0; k < 3; ++k) {
    const json& num = arr[base + k];
    if (!num.is_number()) {
      throw MalformedFile(std::string(field) + ": non-numeric entry");
    }
    v[k] = num.get<double>();
    if (!std::isfinite(v[k])) {
      throw MalformedFile(std::string(field) + ": non-finite value");
    }
  }
  kp.x = v[0];
  kp.y = v[1];
  kp.confidence = v[2];
  if (kp.confidence < 0.0 || kp.confidence > 1.0) {
    throw MalformedFile(std::string(field) + ": confidence outside [0,1]");
  }
  return kp;
}

// Reads a flat (x, y, c) triple array of exactly `count` keypoints. Absent
// keys, null, and empty arrays all mean "not detected" for optional fields.
std::vector<Keypoint2D> read_triples(const json& person, const char* field, size_t count) {
  const json& arr = person.at(field);
  if (!arr.is_array()) {
    throw MalformedFile(std::string(field) + ": expected an array");
  }
  if (arr.size() != count * 3) {
    throw MalformedFile(std::string(field) + ": expected " + std::to_string(count * 3) +
                        " numbers, got " + std::to_string(arr.size()));
  }
  std::vector<Keypoint2D> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    out.push_back(read_triple(arr, i * 3, field));
  }
  return out;
}

bool has_nonempty(const json& person, const char* field) {
  if (!person.contains(field)) return false;
  const json& arr = person.at(field);
  if (arr.is_null()) return false;
  if (arr.is_array() && arr.empty()) return false;
  return true;
}

json triples_to_json(const Keypoint2D* kps, size_t count) {
  json arr = json::array();
  for (size_t i = 0; i < count; ++i) {
    arr.push_back(kps[i].x);
    arr.push_back(kps[i].y);
    arr.push_back(kps[i].confidence);
  }
  return arr;
}

}  // namespace

Frame parse_frame_file(std::string_view text, int image_width, int image_height,
                       uint64_t frame_id) {
  if (image_width <= 0 || image_height <= 0) {
    throw MalformedFile("image dimensions must be positive");
  }
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw MalformedFile("not parseable as a keypoint file");
  }
  if (!doc.is_object() || !doc.contains("people") || !doc["people"].is_array()) {
    throw MalformedFile("missing top-level \"people\" list");
  }

  Frame frame;
  frame.frame_id = frame_id;
  frame.image_width = image_width;
  frame.image_height = image_height;

  for (const json& person : doc["people"]) {
    if (!person.is_object()) {
      throw MalformedFile("person entry is not an object");
    }
    if (!person.contains("pose_keypoints_2d")) {
      throw MalformedFile("person entry without pose_keypoints_2d");
    }
    PersonDetection det;
    auto body = read_triples(person, "pose_keypoints_2d", kBodyKeypointCount);
    std::copy(body.begin(), body.end(), det.body.keypoints.begin());

    if (has_nonempty(person, "hand_left_keypoints_2d")) {
      auto pts = read_triples(person, "hand_left_keypoints_2d", kHandKeypointCount);
      HandSkeleton hand;
      hand.side = Hand::Left;
      std::copy(pts.begin(), pts.end(), hand.keypoints.begin());
      det.left_hand = hand;
    }
    if (has_nonempty(person, "hand_right_keypoints_2d")) {
      auto pts = read_triples(person, "hand_right_keypoints_2d", kHandKeypointCount);
      HandSkeleton hand;
      hand.side = Hand::Right;
      std::copy(pts.begin(), pts.end(), hand.keypoints.begin());
      det.right_hand = hand;
    }
    if (has_nonempty(person, "face_keypoints_2d")) {
      det.face = read_triples(person, "face_keypoints_2d", kFaceKeypointCount);
    }
    frame.people.push_back(std::move(det));
  }
  return frame;
}

std::string serialize_frame(const Frame& frame) {
  json doc;
  json people = json::array();
  for (const PersonDetection& det : frame.people) {
    json person;
    person["pose_keypoints_2d"] =
        triples_to_json(det.body.keypoints.data(), kBodyKeypointCount);
    if (det.left_hand) {
      person["hand_left_keypoints_2d"] =
          triples_to_json(det.left_hand->keypoints.data(), kHandKeypointCount);
    }
    if (det.right_hand) {
      person["hand_right_keypoints_2d"] =
          triples_to_json(det.right_hand->keypoints.data(), kHandKeypointCount);
    }
    if (det.face) {
      person["face_keypoints_2d"] = triples_to_json(det.face->data(), det.face->size());
    }
    people.push_back(std::move(person));
  }
  doc["people"] = std::move(people);
  return doc.dump();
}

}  // namespace tabori
