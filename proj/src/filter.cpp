#include "tabori/filter.hpp"

#include "tabori/errors.hpp"

namespace tabori {

void FilterConfig::validate() const {
  if (min_keypoint_confidence < 0.0 || min_keypoint_confidence > 1.0) {
    throw ConfigError("min_keypoint_confidence must be in [0,1]");
  }
  if (min_valid_hand_points < 1 || min_valid_hand_points > kHandKeypointCount) {
    throw ConfigError("min_valid_hand_points must be in [1,21]");
  }
  for (int idx : required_body_indices) {
    if (idx < 0 || idx >= kBodyKeypointCount) {
      throw ConfigError("required body index out of range: " + std::to_string(idx));
    }
  }
}

const char* to_label(RejectReason reason) {
  switch (reason) {
    case RejectReason::NoPerson: return "no_person";
    case RejectReason::MultiplePeople: return "multiple_people";
    case RejectReason::InsufficientBody: return "insufficient_body";
    case RejectReason::NoUsableHand: return "no_usable_hand";
  }
  return "unknown";
}

namespace {

bool hand_usable(const std::optional<HandSkeleton>& hand, const FilterConfig& config) {
  if (!hand) return false;
  int valid = 0;
  for (const Keypoint2D& kp : hand->keypoints) {
    if (kp.detected(config.min_keypoint_confidence)) ++valid;
  }
  return valid >= config.min_valid_hand_points;
}

}  // namespace

FilterVerdict filter_frame(const Frame& frame, const FilterConfig& config) {
  if (frame.people.size() > 1) {
    return FilterVerdict::reject(RejectReason::MultiplePeople);
  }
  if (frame.people.empty()) {
    return FilterVerdict::reject(RejectReason::NoPerson);
  }
  const PersonDetection& person = frame.people.front();
  for (int idx : config.required_body_indices) {
    if (!person.body.keypoints[static_cast<size_t>(idx)].detected(
            config.min_keypoint_confidence)) {
      return FilterVerdict::reject(RejectReason::InsufficientBody);
    }
  }
  const bool left = hand_usable(person.left_hand, config);
  const bool right = hand_usable(person.right_hand, config);
  if (!left && !right) {
    return FilterVerdict::reject(RejectReason::NoUsableHand);
  }
  return FilterVerdict::accept(left, right);
}

}  // namespace tabori
