#include <doctest.h>

#include <cmath>
#include <random>

#include "support/builders.hpp"
#include "tabori/errors.hpp"
#include "tabori/phonology.hpp"

using namespace tabori;
using namespace testsupport;

namespace {

constexpr double kPi = 3.14159265358979323846;

HandSkeleton centered_hand(Point center, double confidence = 0.9) {
  HandSkeleton hand;
  for (auto& kp : hand.keypoints) kp = {center.x, center.y, confidence};
  return hand;
}

}  // namespace

TEST_CASE("compass binning hits the 8 sector centers") {
  CHECK(bin_compass_degrees(90.0) == OrientationBin::N);
  CHECK(bin_compass_degrees(45.0) == OrientationBin::NE);
  CHECK(bin_compass_degrees(0.0) == OrientationBin::E);
  CHECK(bin_compass_degrees(-45.0) == OrientationBin::SE);
  CHECK(bin_compass_degrees(315.0) == OrientationBin::SE);
  CHECK(bin_compass_degrees(270.0) == OrientationBin::S);
  CHECK(bin_compass_degrees(-90.0) == OrientationBin::S);
  CHECK(bin_compass_degrees(225.0) == OrientationBin::SW);
  CHECK(bin_compass_degrees(180.0) == OrientationBin::W);
  CHECK(bin_compass_degrees(135.0) == OrientationBin::NW);
}

TEST_CASE("sector boundaries are lower-inclusive") {
  CHECK(bin_compass_degrees(22.5) == OrientationBin::NE);
  CHECK(bin_compass_degrees(-22.5) == OrientationBin::E);
  CHECK(bin_compass_degrees(337.5) == OrientationBin::E);  // same edge, wrapped
  CHECK(bin_compass_degrees(67.5) == OrientationBin::N);
  CHECK(bin_compass_degrees(112.5) == OrientationBin::NW);
  CHECK(bin_compass_degrees(157.5) == OrientationBin::W);
  CHECK(bin_compass_degrees(202.5) == OrientationBin::SW);
  CHECK(bin_compass_degrees(247.5) == OrientationBin::S);
  CHECK(bin_compass_degrees(292.5) == OrientationBin::SE);

  // Just below an edge stays in the previous sector.
  CHECK(bin_compass_degrees(22.49) == OrientationBin::E);
  CHECK(bin_compass_degrees(67.49) == OrientationBin::NE);
}

TEST_CASE("compass binning wraps any real angle") {
  CHECK(bin_compass_degrees(360.0) == OrientationBin::E);
  CHECK(bin_compass_degrees(765.0) == OrientationBin::NE);  // 765 = 2*360 + 45
  CHECK(bin_compass_degrees(-361.0) == OrientationBin::E);
  CHECK(bin_compass_degrees(-270.0) == OrientationBin::N);
  CHECK(bin_compass_degrees(1e6 * 360.0 + 180.0) == OrientationBin::W);
}

TEST_CASE("binning is total: dense angle sweep lands in a sector containing the angle") {
  for (int k = -1440; k <= 1440; ++k) {
    const double deg = 0.25 * k;
    const OrientationBin bin = bin_compass_degrees(deg);
    // Recover the sector's center from the enum and check angular distance.
    static constexpr double kCenter[8] = {90, 45, 0, 315, 270, 225, 180, 135};
    const double center = kCenter[static_cast<int>(bin)];
    double diff = std::fmod(deg - center, 360.0);
    if (diff < -180.0) diff += 360.0;
    if (diff >= 180.0) diff -= 360.0;
    CAPTURE(deg);
    CHECK(diff >= -22.5 - 1e-9);
    CHECK(diff < 22.5 + 1e-9);
  }
}

TEST_CASE("finger orientation from the wrist->MCP vector") {
  SUBCASE("straight up on screen is N") {
    HandSkeleton hand = centered_hand({100, 200});
    hand.keypoints[hand_index::kWrist] = {100, 200, 0.9};
    hand.keypoints[hand_index::kMiddleMcp] = {100, 150, 0.9};
    CHECK(finger_orientation(hand, 0.2) == OrientationBin::N);
  }
  SUBCASE("down-right diagonal in image coords is SE") {
    HandSkeleton hand = centered_hand({0, 0});
    hand.keypoints[hand_index::kWrist] = {0, 0, 0.9};
    hand.keypoints[hand_index::kMiddleMcp] = {50, 50, 0.9};
    CHECK(finger_orientation(hand, 0.2) == OrientationBin::SE);
  }
  SUBCASE("due right is E") {
    HandSkeleton hand = centered_hand({0, 0});
    hand.keypoints[hand_index::kWrist] = {0, 0, 0.9};
    hand.keypoints[hand_index::kMiddleMcp] = {100, 0, 0.9};
    CHECK(finger_orientation(hand, 0.2) == OrientationBin::E);
  }
  SUBCASE("exact 22.5-degree boundary goes to NE") {
    HandSkeleton hand = centered_hand({0, 0});
    hand.keypoints[hand_index::kWrist] = {0, 0, 0.9};
    hand.keypoints[hand_index::kMiddleMcp] = {std::cos(22.5 * kPi / 180.0) * 100.0,
                                              -std::sin(22.5 * kPi / 180.0) * 100.0, 0.9};
    CHECK(finger_orientation(hand, 0.2) == OrientationBin::NE);
  }
  SUBCASE("undetected wrist yields nothing") {
    HandSkeleton hand = centered_hand({100, 100});
    hand.keypoints[hand_index::kWrist] = {0, 0, 0.0};
    CHECK_FALSE(finger_orientation(hand, 0.2).has_value());
  }
  SUBCASE("anchor below the confidence floor yields nothing") {
    HandSkeleton hand = centered_hand({100, 100});
    hand.keypoints[hand_index::kMiddleMcp] = {150, 100, 0.19};
    CHECK_FALSE(finger_orientation(hand, 0.2).has_value());
  }
  SUBCASE("coincident anchors have no direction") {
    HandSkeleton hand = centered_hand({100, 100});
    CHECK_FALSE(finger_orientation(hand, 0.2).has_value());
  }
}

TEST_CASE("oriented_hand builder round-trips through finger_orientation") {
  // The builder is the workhorse of the synthetic tests; pin it against the
  // binner at every sector center.
  static constexpr double kCenter[8] = {90, 45, 0, 315, 270, 225, 180, 135};
  for (int i = 0; i < 8; ++i) {
    const auto bin = finger_orientation(oriented_hand({400, 400}, kCenter[i]), 0.2);
    REQUIRE(bin.has_value());
    CHECK(*bin == kOrientationBins[static_cast<size_t>(i)]);
  }
}

TEST_CASE("hand centroid averages detected points only") {
  SUBCASE("all points coincide") {
    const auto c = hand_centroid(centered_hand({5, 5}), 0.2);
    REQUIRE(c.has_value());
    CHECK(c->x == doctest::Approx(5.0));
    CHECK(c->y == doctest::Approx(5.0));
  }
  SUBCASE("one outlier shifts the mean by outlier/21") {
    HandSkeleton hand = centered_hand({0, 0});  // (0,0) at conf 0.9 counts as detected
    hand.keypoints[20] = {210, 0, 0.9};
    const auto c = hand_centroid(hand, 0.2);
    REQUIRE(c.has_value());
    CHECK(c->x == doctest::Approx(10.0));
    CHECK(c->y == doctest::Approx(0.0));
  }
  SUBCASE("undetected points are excluded") {
    HandSkeleton hand = centered_hand({4, 4});
    hand.keypoints[20] = {999, 999, 0.0};
    const auto c = hand_centroid(hand, 0.2);
    REQUIRE(c.has_value());
    CHECK(c->x == doctest::Approx(4.0));
    CHECK(c->y == doctest::Approx(4.0));
  }
  SUBCASE("no detected point yields nothing") {
    HandSkeleton hand = centered_hand({4, 4}, 0.1);
    CHECK_FALSE(hand_centroid(hand, 0.2).has_value());
  }
}

TEST_CASE("body anchors group keypoints into the six categories") {
  namespace bi = body_index;
  SUBCASE("full skeleton carries all six with both instances where paired") {
    auto body = body_with({{bi::kNose, {500, 100}},
                           {bi::kNeck, {500, 200}},
                           {bi::kRightShoulder, {400, 220}},
                           {bi::kLeftShoulder, {600, 220}},
                           {bi::kMidHip, {500, 500}},
                           {bi::kRightEye, {480, 90}},
                           {bi::kLeftEye, {520, 90}},
                           {bi::kRightEar, {460, 100}},
                           {bi::kLeftEar, {540, 100}}});
    const auto anchors = body_anchor_points(body, 0.2);
    REQUIRE(anchors.size() == 6);
    CHECK(anchors.at(LocationBin::Eyes).size() == 2);
    CHECK(anchors.at(LocationBin::Ears).size() == 2);
    CHECK(anchors.at(LocationBin::Shoulder).size() == 2);
    CHECK(anchors.at(LocationBin::Nose).size() == 1);
    CHECK(anchors.at(LocationBin::Neck).size() == 1);
    CHECK(anchors.at(LocationBin::Abdomen).size() == 1);
    CHECK(anchors.at(LocationBin::Abdomen)[0].x == doctest::Approx(500.0));
    CHECK(anchors.at(LocationBin::Abdomen)[0].y == doctest::Approx(500.0));
  }
  SUBCASE("category with no detected instance is absent") {
    const auto anchors = body_anchor_points(minimal_body(), 0.2);
    CHECK(anchors.count(LocationBin::Ears) == 0);
    CHECK(anchors.count(LocationBin::Eyes) == 0);
    CHECK(anchors.count(LocationBin::Neck) == 1);
  }
  SUBCASE("single detected eye leaves one point in Eyes") {
    auto body = minimal_body();
    body.keypoints[bi::kRightEye] = {480, 90, 0.9};
    const auto anchors = body_anchor_points(body, 0.2);
    REQUIRE(anchors.count(LocationBin::Eyes) == 1);
    CHECK(anchors.at(LocationBin::Eyes).size() == 1);
  }
  SUBCASE("confidence floor drops points") {
    auto body = minimal_body();
    body.keypoints[bi::kNose].confidence = 0.19;
    const auto anchors = body_anchor_points(body, 0.2);
    CHECK(anchors.count(LocationBin::Nose) == 0);
  }
}

TEST_CASE("hand location picks the nearest category") {
  const LocationConfig cfg;
  AnchorMap anchors;
  anchors[LocationBin::Neck] = {{500, 200}};
  anchors[LocationBin::Shoulder] = {{400, 220}, {600, 220}};

  SUBCASE("zero distance wins outright") {
    CHECK(hand_location({500, 200}, anchors, 1000, 1000, cfg) == LocationBin::Neck);
  }
  SUBCASE("nearest of several categories") {
    // 30 px from the left shoulder, ~100 px from the neck.
    CHECK(hand_location({600, 250}, anchors, 1000, 1000, cfg) == LocationBin::Shoulder);
  }
  SUBCASE("per-category distance is the min over its instances") {
    // Close to the right shoulder only; the left one is far.
    CHECK(hand_location({395, 220}, anchors, 1000, 1000, cfg) == LocationBin::Shoulder);
  }
}

TEST_CASE("neutral space threshold is 10% of the image diagonal, strictly exceeded") {
  const LocationConfig cfg;
  // 1000x700 image: diagonal = sqrt(1000^2 + 700^2) = 1220.6555..., threshold
  // = 122.06555615733703 px.
  const double threshold = 0.10 * std::hypot(1000.0, 700.0);
  CHECK(threshold == doctest::Approx(122.06555615733703).epsilon(1e-12));

  AnchorMap anchors;
  anchors[LocationBin::Neck] = {{0, 0}};

  SUBCASE("122.0 px stays on the body") {
    CHECK(hand_location({122.0, 0}, anchors, 1000, 700, cfg) == LocationBin::Neck);
  }
  SUBCASE("122.1 px falls into neutral space") {
    CHECK(hand_location({122.1, 0}, anchors, 1000, 700, cfg) == LocationBin::NeutralSpace);
  }
  SUBCASE("exactly the threshold stays on the body") {
    CHECK(hand_location({threshold, 0}, anchors, 1000, 700, cfg) == LocationBin::Neck);
  }
  SUBCASE("200 px from everything is neutral") {
    AnchorMap many;
    many[LocationBin::Nose] = {{500, 100}};
    many[LocationBin::Neck] = {{500, 200}};
    many[LocationBin::Shoulder] = {{400, 220}, {600, 220}};
    CHECK(hand_location({500, 420}, many, 1000, 700, cfg) == LocationBin::NeutralSpace);
  }
}

TEST_CASE("location ties break face-first: Eyes, Ears, Nose, Neck, Shoulder, Abdomen") {
  const LocationConfig cfg;
  SUBCASE("Eyes beats Ears at equal distance") {
    AnchorMap anchors;
    anchors[LocationBin::Ears] = {{400, 300}};
    anchors[LocationBin::Eyes] = {{600, 300}};
    CHECK(hand_location({500, 300}, anchors, 2000, 2000, cfg) == LocationBin::Eyes);
  }
  SUBCASE("Neck beats Shoulder and Abdomen at equal distance") {
    AnchorMap anchors;
    anchors[LocationBin::Shoulder] = {{400, 300}};
    anchors[LocationBin::Neck] = {{600, 300}};
    anchors[LocationBin::Abdomen] = {{500, 400}};
    CHECK(hand_location({500, 300}, anchors, 2000, 2000, cfg) == LocationBin::Neck);
  }
}

TEST_CASE("location is scale invariant when image dimensions scale too") {
  const LocationConfig cfg;
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> coord(0.0, 900.0);
  for (int trial = 0; trial < 50; ++trial) {
    AnchorMap anchors;
    anchors[LocationBin::Nose] = {{coord(rng), coord(rng)}};
    anchors[LocationBin::Neck] = {{coord(rng), coord(rng)}};
    anchors[LocationBin::Abdomen] = {{coord(rng), coord(rng)}};
    const Point centroid{coord(rng), coord(rng)};
    const LocationBin base = hand_location(centroid, anchors, 1000, 800, cfg);
    for (double s : {2.0, 7.5}) {
      AnchorMap scaled;
      for (const auto& [bin, pts] : anchors) {
        for (const auto& p : pts) scaled[bin].push_back({p.x * s, p.y * s});
      }
      const Point c{centroid.x * s, centroid.y * s};
      CHECK(hand_location(c, scaled, static_cast<int>(1000 * s), static_cast<int>(800 * s),
                          cfg) == base);
    }
  }
}

TEST_CASE("annotate_frame emits one annotation per usable hand") {
  const FilterConfig fcfg;
  const LocationConfig lcfg;

  SUBCASE("two fully valid hands give two annotations") {
    PersonDetection person;
    person.body = minimal_body();
    person.left_hand = oriented_hand({500, 210}, 90.0, 30.0, Hand::Left);
    person.right_hand = oriented_hand({500, 495}, 180.0, 30.0, Hand::Right);
    Frame frame = frame_of({person}, 1000, 1000, 17);

    const auto verdict = filter_frame(frame, fcfg);
    REQUIRE(verdict.accepted);
    const auto result = annotate_frame(frame, verdict, fcfg, lcfg, "corpusX", "vid3");
    REQUIRE(result.annotations.size() == 2);
    CHECK(result.hands_skipped == 0);

    const auto& left = result.annotations[0];
    CHECK(left.corpus_id == "corpusX");
    CHECK(left.video_id == "vid3");
    CHECK(left.frame_id == 17);
    CHECK(left.hand == Hand::Left);
    CHECK(left.orientation == OrientationBin::N);
    CHECK(left.location == LocationBin::Neck);  // centroid 10 px above the neck

    const auto& right = result.annotations[1];
    CHECK(right.hand == Hand::Right);
    CHECK(right.orientation == OrientationBin::W);
    CHECK(right.location == LocationBin::Abdomen);  // centroid 5 px above the mid-hip
  }

  SUBCASE("hand without a wrist is skipped and counted") {
    PersonDetection person;
    person.body = minimal_body();
    auto left = oriented_hand({500, 210}, 90.0, 30.0, Hand::Left);
    left.keypoints[hand_index::kWrist] = {0, 0, 0.0};
    person.left_hand = left;
    person.right_hand = oriented_hand({500, 495}, 0.0, 30.0, Hand::Right);
    Frame frame = frame_of({person});

    const auto verdict = filter_frame(frame, fcfg);
    REQUIRE(verdict.accepted);
    REQUIRE(verdict.left_usable);  // 20 of 21 points still clear the majority rule
    const auto result = annotate_frame(frame, verdict, fcfg, lcfg, "c", "v");
    REQUIRE(result.annotations.size() == 1);
    CHECK(result.annotations[0].hand == Hand::Right);
    CHECK(result.hands_skipped == 1);
  }

  SUBCASE("directionless hands are skipped, not misbinned") {
    PersonDetection person;
    person.body = minimal_body();
    person.left_hand = centered_hand({500, 210});
    person.left_hand->side = Hand::Left;
    person.right_hand = centered_hand({500, 495});
    person.right_hand->side = Hand::Right;
    Frame frame = frame_of({person});

    const auto verdict = filter_frame(frame, fcfg);
    REQUIRE(verdict.accepted);
    const auto result = annotate_frame(frame, verdict, fcfg, lcfg, "c", "v");
    CHECK(result.annotations.empty());
    CHECK(result.hands_skipped == 2);
  }

  SUBCASE("rejected frames never annotate") {
    Frame frame = frame_of({});
    const auto verdict = filter_frame(frame, fcfg);
    REQUIRE_FALSE(verdict.accepted);
    const auto result = annotate_frame(frame, verdict, fcfg, lcfg, "c", "v");
    CHECK(result.annotations.empty());
    CHECK(result.hands_skipped == 0);
  }
}

TEST_CASE("annotations are translation invariant") {
  const FilterConfig fcfg;
  const LocationConfig lcfg;
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> shift(-40.0, 40.0);

  PersonDetection person;
  person.body = minimal_body();
  person.left_hand = oriented_hand({470, 120}, 45.0, 25.0, Hand::Left);
  person.right_hand = oriented_hand({640, 230}, 270.0, 25.0, Hand::Right);
  Frame frame = frame_of({person}, 2000, 2000);

  const auto base = annotate_frame(frame, filter_frame(frame, fcfg), fcfg, lcfg, "c", "v");
  REQUIRE(base.annotations.size() == 2);

  for (int trial = 0; trial < 20; ++trial) {
    const double dx = shift(rng), dy = shift(rng);
    Frame moved = frame;
    auto& p = moved.people[0];
    for (auto& kp : p.body.keypoints) {
      if (kp.confidence > 0) { kp.x += dx; kp.y += dy; }
    }
    for (auto* hand : {&p.left_hand, &p.right_hand}) {
      for (auto& kp : (*hand)->keypoints) { kp.x += dx; kp.y += dy; }
    }
    const auto moved_result =
        annotate_frame(moved, filter_frame(moved, fcfg), fcfg, lcfg, "c", "v");
    REQUIRE(moved_result.annotations.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
      CHECK(moved_result.annotations[i].location == base.annotations[i].location);
      CHECK(moved_result.annotations[i].orientation == base.annotations[i].orientation);
    }
  }
}

TEST_CASE("next_clockwise cycles through all eight bins") {
  OrientationBin bin = OrientationBin::N;
  const OrientationBin expected[8] = {OrientationBin::NE, OrientationBin::E, OrientationBin::SE,
                                      OrientationBin::S,  OrientationBin::SW, OrientationBin::W,
                                      OrientationBin::NW, OrientationBin::N};
  for (const auto want : expected) {
    bin = next_clockwise(bin);
    CHECK(bin == want);
  }
}

TEST_CASE("bin labels round-trip") {
  for (const auto bin : kOrientationBins) {
    const auto parsed = parse_orientation(to_label(bin));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == bin);
  }
  for (const auto bin : kLocationBins) {
    const auto parsed = parse_location(to_label(bin));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == bin);
  }
  CHECK_FALSE(parse_orientation("north").has_value());
  CHECK_FALSE(parse_location("").has_value());
  CHECK(std::string(to_label(LocationBin::NeutralSpace)) == "neutral_space");
}

TEST_CASE("location config rejects out-of-range thresholds") {
  LocationConfig cfg;
  cfg.threshold_fraction = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.threshold_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.threshold_fraction = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.threshold_fraction = 0.10;
  CHECK_NOTHROW(cfg.validate());
}
