#pragma once

#include <cstdint>
#include <set>

#include "tabori/types.hpp"

namespace tabori {

// Quality gate settings. The defaults require the five upper-body anchors the
// location stage consumes plus a majority of each hand's keypoints.
struct FilterConfig {
  double min_keypoint_confidence = 0.2;
  std::set<int> required_body_indices = {body_index::kNose, body_index::kNeck,
                                         body_index::kRightShoulder,
                                         body_index::kLeftShoulder, body_index::kMidHip};
  int min_valid_hand_points = 11;  // out of 21

  void validate() const;  // throws ConfigError
};

enum class RejectReason : uint8_t {
  NoPerson = 0,
  MultiplePeople = 1,
  InsufficientBody = 2,
  NoUsableHand = 3,
};
inline constexpr int kRejectReasonCount = 4;

const char* to_label(RejectReason reason);

struct FilterVerdict {
  bool accepted = false;
  bool left_usable = false;
  bool right_usable = false;
  RejectReason reason = RejectReason::NoPerson;  // meaningful only when !accepted

  static FilterVerdict accept(bool left, bool right) {
    return {true, left, right, RejectReason::NoPerson};
  }
  static FilterVerdict reject(RejectReason why) { return {false, false, false, why}; }

  bool usable(Hand hand) const { return hand == Hand::Left ? left_usable : right_usable; }
};

// Single-signer gate, evaluated in a fixed order so every rejected frame gets
// exactly one reason:
//   > 1 person            -> MultiplePeople
//   0 people              -> NoPerson
//   required body anchor below the confidence floor -> InsufficientBody
//   otherwise a hand is usable when present with at least
//   min_valid_hand_points keypoints at or above the floor; no usable hand
//   -> NoUsableHand, anything else -> Accept.
// Total and deterministic over parsed frames.
FilterVerdict filter_frame(const Frame& frame, const FilterConfig& config);

}  // namespace tabori
