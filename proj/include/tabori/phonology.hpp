#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabori/filter.hpp"
#include "tabori/types.hpp"

namespace tabori {

// Compass bins of 45 degrees each. "North" means up on screen: image y grows
// downward, so the y difference is negated before the angle is taken.
enum class OrientationBin : uint8_t { N = 0, NE, E, SE, S, SW, W, NW };
inline constexpr int kOrientationBinCount = 8;
inline constexpr std::array<OrientationBin, 8> kOrientationBins = {
    OrientationBin::N,  OrientationBin::NE, OrientationBin::E,  OrientationBin::SE,
    OrientationBin::S,  OrientationBin::SW, OrientationBin::W,  OrientationBin::NW};

// Six body categories plus the neutral signing space in front of the signer.
enum class LocationBin : uint8_t { Ears = 0, Eyes, Nose, Neck, Shoulder, Abdomen, NeutralSpace };
inline constexpr int kLocationBinCount = 7;
inline constexpr int kBodyLocationCount = 6;
inline constexpr std::array<LocationBin, 7> kLocationBins = {
    LocationBin::Ears,    LocationBin::Eyes,    LocationBin::Nose,        LocationBin::Neck,
    LocationBin::Shoulder, LocationBin::Abdomen, LocationBin::NeutralSpace};

const char* to_label(OrientationBin bin);
const char* to_label(LocationBin bin);
std::optional<OrientationBin> parse_orientation(const std::string& label);
std::optional<LocationBin> parse_location(const std::string& label);

// One compass step clockwise on screen: N -> NE -> E -> ... -> NW -> N.
OrientationBin next_clockwise(OrientationBin bin);

struct LocationConfig {
  double threshold_fraction = 0.10;  // of the image diagonal

  void validate() const;  // throws ConfigError
};

struct PhonologicalAnnotation {
  std::string corpus_id;
  std::string video_id;
  uint64_t frame_id = 0;
  Hand hand = Hand::Left;
  LocationBin location = LocationBin::NeutralSpace;
  OrientationBin orientation = OrientationBin::N;
};

// Arithmetic mean of the keypoints at or above min_confidence. Undetected
// points are excluded so the (0,0,0) encoding cannot drag the centroid toward
// the image origin. nullopt when no keypoint qualifies.
std::optional<Point> hand_centroid(const HandSkeleton& hand, double min_confidence);

// Bins a compass angle in degrees (0 = East, 90 = North, any real value).
// Sectors are half-open with the lower bound inclusive: exactly 22.5 is NE,
// exactly -22.5 is the lower edge of E and so bins to E.
OrientationBin bin_compass_degrees(double degrees);

// Wrist -> middle-finger-MCP direction quantized to the 8 compass bins.
// nullopt when either anchor is below min_confidence or the two anchors
// coincide exactly (no direction).
std::optional<OrientationBin> finger_orientation(const HandSkeleton& hand, double min_confidence);

// Anchor points per body category: Nose kp0, Neck kp1, Eyes {kp15, kp16},
// Ears {kp17, kp18}, Shoulder {kp2, kp5}, Abdomen kp8. Points below
// min_confidence are dropped; categories left with no point are absent.
using AnchorMap = std::map<LocationBin, std::vector<Point>>;
AnchorMap body_anchor_points(const BodySkeleton& body, double min_confidence);

// Nearest body category, where a category's distance is the minimum over its
// anchor points. If even the nearest category is farther than
// threshold_fraction * image diagonal, the hand is in the neutral signing
// space. Ties between categories go to the first of Eyes, Ears, Nose, Neck,
// Shoulder, Abdomen.
LocationBin hand_location(const Point& centroid, const AnchorMap& anchors, int image_width,
                          int image_height, const LocationConfig& config);

struct AnnotationResult {
  std::vector<PhonologicalAnnotation> annotations;  // 0, 1, or 2 entries
  int hands_skipped = 0;  // usable hands that failed an anchor precondition
};

// Emits one (location, orientation) annotation per usable hand of an accepted
// frame. A hand is silently skipped (and counted) when its orientation
// anchors are missing, its centroid is undefined, or no body anchor survives
// the confidence floor. Rejected verdicts produce an empty result.
AnnotationResult annotate_frame(const Frame& frame, const FilterVerdict& verdict,
                                const FilterConfig& filter_config,
                                const LocationConfig& location_config,
                                const std::string& corpus_id, const std::string& video_id);

}  // namespace tabori
