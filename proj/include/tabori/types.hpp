#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tabori {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// One detected landmark in image coordinates (origin top-left, y grows down).
// confidence == 0 means "undetected"; the source format emits (0,0,0) and the
// coordinates then carry no meaning.
struct Keypoint2D {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  bool detected(double min_confidence) const { return confidence >= min_confidence; }
  Point point() const { return {x, y}; }
};

enum class Hand : uint8_t { Left = 0, Right = 1 };

inline constexpr std::array<Hand, 2> kHands = {Hand::Left, Hand::Right};

const char* to_label(Hand hand);
std::optional<Hand> parse_hand(const std::string& label);

// BODY_25 indices consumed by the pipeline; the rest are parsed but unused.
namespace body_index {
inline constexpr int kNose = 0;
inline constexpr int kNeck = 1;
inline constexpr int kRightShoulder = 2;
inline constexpr int kLeftShoulder = 5;
inline constexpr int kMidHip = 8;
inline constexpr int kRightEye = 15;
inline constexpr int kLeftEye = 16;
inline constexpr int kRightEar = 17;
inline constexpr int kLeftEar = 18;
}  // namespace body_index

namespace hand_index {
inline constexpr int kWrist = 0;      // radius end
inline constexpr int kMiddleMcp = 9;  // middle-finger metacarpal base
}  // namespace hand_index

inline constexpr int kBodyKeypointCount = 25;
inline constexpr int kHandKeypointCount = 21;
inline constexpr int kFaceKeypointCount = 70;

struct BodySkeleton {
  std::array<Keypoint2D, kBodyKeypointCount> keypoints{};
};

struct HandSkeleton {
  std::array<Keypoint2D, kHandKeypointCount> keypoints{};
  Hand side = Hand::Left;
};

struct PersonDetection {
  BodySkeleton body;
  std::optional<HandSkeleton> left_hand;
  std::optional<HandSkeleton> right_hand;
  // 70 points, stored for completeness but never interpreted.
  std::optional<std::vector<Keypoint2D>> face;

  const std::optional<HandSkeleton>& hand(Hand side) const {
    return side == Hand::Left ? left_hand : right_hand;
  }
};

struct Frame {
  uint64_t frame_id = 0;
  std::vector<PersonDetection> people;
  int image_width = 0;
  int image_height = 0;
};

}  // namespace tabori
