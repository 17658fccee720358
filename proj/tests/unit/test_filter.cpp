#include <doctest.h>

#include "support/builders.hpp"
#include "tabori/errors.hpp"
#include "tabori/filter.hpp"

using namespace tabori;
using namespace testsupport;

TEST_CASE("rejection reasons") {
  const FilterConfig config;

  SUBCASE("no person") {
    const FilterVerdict v = filter_frame(frame_of({}), config);
    CHECK(!v.accepted);
    CHECK(v.reason == RejectReason::NoPerson);
  }
  SUBCASE("multiple people, even if both are otherwise perfect") {
    PersonDetection p;
    p.body = minimal_body();
    p.right_hand = hand_with_detected(21, Hand::Right);
    const FilterVerdict v = filter_frame(frame_of({p, p}), config);
    CHECK(!v.accepted);
    CHECK(v.reason == RejectReason::MultiplePeople);
  }
  SUBCASE("multiple people wins over missing body") {
    PersonDetection p;  // nothing detected at all
    const FilterVerdict v = filter_frame(frame_of({p, p}), config);
    CHECK(v.reason == RejectReason::MultiplePeople);
  }
  SUBCASE("required body anchor below the floor") {
    PersonDetection p;
    p.body = minimal_body();
    p.body.keypoints[body_index::kNeck].confidence = 0.19;  // floor is 0.2
    p.right_hand = hand_with_detected(21, Hand::Right);
    const FilterVerdict v = filter_frame(frame_of({p}), config);
    CHECK(!v.accepted);
    CHECK(v.reason == RejectReason::InsufficientBody);
  }
  SUBCASE("anchor exactly at the floor passes") {
    PersonDetection p;
    p.body = minimal_body(0.2);
    p.right_hand = hand_with_detected(21, Hand::Right);
    CHECK(filter_frame(frame_of({p}), config).accepted);
  }
  SUBCASE("no usable hand") {
    PersonDetection p;
    p.body = minimal_body();
    SUBCASE("hands absent") {}
    SUBCASE("10 of 21 points") { p.left_hand = hand_with_detected(10, Hand::Left); }
    SUBCASE("low-confidence points") { p.left_hand = hand_with_detected(21, Hand::Left, 0.1); }
    const FilterVerdict v = filter_frame(frame_of({p}), config);
    CHECK(!v.accepted);
    CHECK(v.reason == RejectReason::NoUsableHand);
  }
}

TEST_CASE("acceptance and usable-hand flags") {
  const FilterConfig config;
  PersonDetection p;
  p.body = minimal_body();

  SUBCASE("11 of 21 points is exactly enough") {
    p.left_hand = hand_with_detected(11, Hand::Left);
    const FilterVerdict v = filter_frame(frame_of({p}), config);
    CHECK(v.accepted);
    CHECK(v.left_usable);
    CHECK(!v.right_usable);
    CHECK(v.usable(Hand::Left));
    CHECK(!v.usable(Hand::Right));
  }
  SUBCASE("both hands usable") {
    p.left_hand = hand_with_detected(21, Hand::Left);
    p.right_hand = hand_with_detected(15, Hand::Right);
    const FilterVerdict v = filter_frame(frame_of({p}), config);
    CHECK(v.accepted);
    CHECK(v.left_usable);
    CHECK(v.right_usable);
  }
  SUBCASE("one usable, one short") {
    p.left_hand = hand_with_detected(10, Hand::Left);
    p.right_hand = hand_with_detected(11, Hand::Right);
    const FilterVerdict v = filter_frame(frame_of({p}), config);
    CHECK(v.accepted);
    CHECK(!v.left_usable);
    CHECK(v.right_usable);
  }
}

TEST_CASE("filter config validation") {
  FilterConfig config;
  CHECK_NOTHROW(config.validate());

  config.min_keypoint_confidence = 1.5;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config.min_keypoint_confidence = 0.2;

  config.min_valid_hand_points = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config.min_valid_hand_points = 22;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config.min_valid_hand_points = 11;

  config.required_body_indices.insert(25);
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("custom required indices") {
  FilterConfig config;
  config.required_body_indices = {body_index::kNose};
  PersonDetection p;
  p.body = body_with({{body_index::kNose, {10, 10}}});
  p.right_hand = hand_with_detected(11, Hand::Right);
  CHECK(filter_frame(frame_of({p}), config).accepted);
}
