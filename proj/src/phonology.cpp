#include "tabori/phonology.hpp"

#include <cmath>
#include <limits>

#include "tabori/errors.hpp"

namespace tabori {

const char* to_label(Hand hand) { return hand == Hand::Left ? "left" : "right"; }

std::optional<Hand> parse_hand(const std::string& label) {
  if (label == "left") return Hand::Left;
  if (label == "right") return Hand::Right;
  return std::nullopt;
}

namespace {

constexpr const char* kOrientationLabels[kOrientationBinCount] = {"N", "NE", "E", "SE",
                                                                  "S", "SW", "W", "NW"};
constexpr const char* kLocationLabels[kLocationBinCount] = {
    "ears", "eyes", "nose", "neck", "shoulder", "abdomen", "neutral_space"};

// Compass sector index -> bin, counterclockwise from East: the sector k
// covers [45k - 22.5, 45k + 22.5) degrees.
constexpr OrientationBin kSectorToBin[8] = {
    OrientationBin::E,  OrientationBin::NE, OrientationBin::N,  OrientationBin::NW,
    OrientationBin::W,  OrientationBin::SW, OrientationBin::S,  OrientationBin::SE};

// Tie-break order for equidistant categories: face-specific before broad.
constexpr LocationBin kTieBreakOrder[kBodyLocationCount] = {
    LocationBin::Eyes, LocationBin::Ears,     LocationBin::Nose,
    LocationBin::Neck, LocationBin::Shoulder, LocationBin::Abdomen};

}  // namespace

const char* to_label(OrientationBin bin) {
  return kOrientationLabels[static_cast<size_t>(bin)];
}

const char* to_label(LocationBin bin) { return kLocationLabels[static_cast<size_t>(bin)]; }

std::optional<OrientationBin> parse_orientation(const std::string& label) {
  for (int i = 0; i < kOrientationBinCount; ++i) {
    if (label == kOrientationLabels[i]) return static_cast<OrientationBin>(i);
  }
  return std::nullopt;
}

std::optional<LocationBin> parse_location(const std::string& label) {
  for (int i = 0; i < kLocationBinCount; ++i) {
    if (label == kLocationLabels[i]) return static_cast<LocationBin>(i);
  }
  return std::nullopt;
}

OrientationBin next_clockwise(OrientationBin bin) {
  return static_cast<OrientationBin>((static_cast<int>(bin) + 1) % kOrientationBinCount);
}

void LocationConfig::validate() const {
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw ConfigError("threshold_fraction must be in (0,1)");
  }
}

std::optional<Point> hand_centroid(const HandSkeleton& hand, double min_confidence) {
  double sx = 0.0, sy = 0.0;
  int n = 0;
  for (const Keypoint2D& kp : hand.keypoints) {
    if (kp.detected(min_confidence)) {
      sx += kp.x;
      sy += kp.y;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return Point{sx / n, sy / n};
}

OrientationBin bin_compass_degrees(double degrees) {
  double d = std::fmod(degrees + 22.5, 360.0);
  if (d < 0.0) d += 360.0;
  int sector = static_cast<int>(d / 45.0);
  if (sector > 7) sector = 7;  // d == 360 after rounding
  return kSectorToBin[sector];
}

std::optional<OrientationBin> finger_orientation(const HandSkeleton& hand,
                                                 double min_confidence) {
  const Keypoint2D& wrist = hand.keypoints[hand_index::kWrist];
  const Keypoint2D& mcp = hand.keypoints[hand_index::kMiddleMcp];
  if (!wrist.detected(min_confidence) || !mcp.detected(min_confidence)) {
    return std::nullopt;
  }
  const double dx = mcp.x - wrist.x;
  const double dy = mcp.y - wrist.y;
  if (dx == 0.0 && dy == 0.0) {
    return std::nullopt;  // coincident anchors carry no direction
  }
  // Negate y so the angle is in compass convention (up on screen = North).
  const double radians = std::atan2(-dy, dx);
  return bin_compass_degrees(radians * 180.0 / M_PI);
}

AnchorMap body_anchor_points(const BodySkeleton& body, double min_confidence) {
  struct CategorySpec {
    LocationBin bin;
    std::array<int, 2> indices;
    int count;
  };
  static constexpr CategorySpec kCategories[kBodyLocationCount] = {
      {LocationBin::Nose, {body_index::kNose, -1}, 1},
      {LocationBin::Neck, {body_index::kNeck, -1}, 1},
      {LocationBin::Eyes, {body_index::kRightEye, body_index::kLeftEye}, 2},
      {LocationBin::Ears, {body_index::kRightEar, body_index::kLeftEar}, 2},
      {LocationBin::Shoulder, {body_index::kRightShoulder, body_index::kLeftShoulder}, 2},
      {LocationBin::Abdomen, {body_index::kMidHip, -1}, 1},
  };

  AnchorMap anchors;
  for (const CategorySpec& cat : kCategories) {
    std::vector<Point> points;
    for (int k = 0; k < cat.count; ++k) {
      const Keypoint2D& kp = body.keypoints[static_cast<size_t>(cat.indices[k])];
      if (kp.detected(min_confidence)) {
        points.push_back(kp.point());
      }
    }
    if (!points.empty()) {
      anchors.emplace(cat.bin, std::move(points));
    }
  }
  return anchors;
}

LocationBin hand_location(const Point& centroid, const AnchorMap& anchors, int image_width,
                          int image_height, const LocationConfig& config) {
  double best = std::numeric_limits<double>::infinity();
  LocationBin best_bin = LocationBin::NeutralSpace;
  for (LocationBin bin : kTieBreakOrder) {
    auto it = anchors.find(bin);
    if (it == anchors.end()) continue;
    double d = std::numeric_limits<double>::infinity();
    for (const Point& p : it->second) {
      d = std::min(d, distance(centroid, p));
    }
    if (d < best) {  // strict: earlier tie-break entries win equal distances
      best = d;
      best_bin = bin;
    }
  }
  const double threshold =
      config.threshold_fraction * std::hypot(static_cast<double>(image_width),
                                             static_cast<double>(image_height));
  if (!(best <= threshold)) {
    return LocationBin::NeutralSpace;
  }
  return best_bin;
}

AnnotationResult annotate_frame(const Frame& frame, const FilterVerdict& verdict,
                                const FilterConfig& filter_config,
                                const LocationConfig& location_config,
                                const std::string& corpus_id, const std::string& video_id) {
  AnnotationResult result;
  if (!verdict.accepted || frame.people.empty()) {
    return result;
  }
  const PersonDetection& person = frame.people.front();
  const double min_conf = filter_config.min_keypoint_confidence;
  const AnchorMap anchors = body_anchor_points(person.body, min_conf);

  for (Hand side : kHands) {
    if (!verdict.usable(side)) continue;
    const std::optional<HandSkeleton>& hand = person.hand(side);
    if (!hand) {
      ++result.hands_skipped;
      continue;
    }
    const auto orientation = finger_orientation(*hand, min_conf);
    const auto centroid = hand_centroid(*hand, min_conf);
    if (!orientation || !centroid || anchors.empty()) {
      ++result.hands_skipped;
      continue;
    }
    PhonologicalAnnotation ann;
    ann.corpus_id = corpus_id;
    ann.video_id = video_id;
    ann.frame_id = frame.frame_id;
    ann.hand = side;
    ann.location =
        hand_location(*centroid, anchors, frame.image_width, frame.image_height, location_config);
    ann.orientation = *orientation;
    result.annotations.push_back(std::move(ann));
  }
  return result;
}

}  // namespace tabori
