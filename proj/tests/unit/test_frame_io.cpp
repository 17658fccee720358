#include <doctest.h>

#include <random>
#include <string>

#include "tabori/errors.hpp"
#include "tabori/frame_io.hpp"

using namespace tabori;

namespace {

std::string triples(int count, double x = 1.0, double y = 2.0, double c = 0.5) {
  std::string out = "[";
  for (int i = 0; i < count; ++i) {
    if (i) out += ",";
    out += std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(c);
  }
  return out + "]";
}

std::string person_json(const std::string& body, const std::string& extra = "") {
  return "{\"pose_keypoints_2d\":" + body + extra + "}";
}

std::string frame_json(const std::string& people) { return "{\"people\":[" + people + "]}"; }

}  // namespace

TEST_CASE("frame with body only") {
  const Frame f = parse_frame_file(frame_json(person_json(triples(25))), 640, 480, 7);
  REQUIRE(f.people.size() == 1);
  CHECK(f.frame_id == 7);
  CHECK(f.image_width == 640);
  CHECK(f.image_height == 480);
  const PersonDetection& p = f.people.front();
  CHECK(p.body.keypoints[0].x == 1.0);
  CHECK(p.body.keypoints[24].confidence == 0.5);
  CHECK(!p.left_hand);
  CHECK(!p.right_hand);
  CHECK(!p.face);
}

TEST_CASE("hands and face parsed when present") {
  const std::string extra = ",\"hand_left_keypoints_2d\":" + triples(21, 10, 20, 0.9) +
                            ",\"hand_right_keypoints_2d\":" + triples(21, 30, 40, 0.8) +
                            ",\"face_keypoints_2d\":" + triples(70, 5, 6, 0.7);
  const Frame f = parse_frame_file(frame_json(person_json(triples(25), extra)), 100, 100, 0);
  const PersonDetection& p = f.people.front();
  REQUIRE(p.left_hand);
  REQUIRE(p.right_hand);
  REQUIRE(p.face);
  CHECK(p.left_hand->side == Hand::Left);
  CHECK(p.right_hand->side == Hand::Right);
  CHECK(p.left_hand->keypoints[20].x == 10.0);
  CHECK(p.right_hand->keypoints[0].confidence == 0.8);
  CHECK(p.face->size() == 70);
}

TEST_CASE("empty or null hand arrays mean absent") {
  for (const char* empty : {"[]", "null"}) {
    const std::string extra = std::string(",\"hand_left_keypoints_2d\":") + empty;
    const Frame f =
        parse_frame_file(frame_json(person_json(triples(25), extra)), 100, 100, 0);
    CHECK(!f.people.front().left_hand);
  }
}

TEST_CASE("zero triples are kept but count as undetected") {
  std::string body = "[";
  for (int i = 0; i < 25; ++i) body += std::string(i ? "," : "") + "0,0,0";
  body += "]";
  const Frame f = parse_frame_file(frame_json(person_json(body)), 100, 100, 0);
  CHECK(!f.people.front().body.keypoints[0].detected(0.2));
  CHECK(f.people.front().body.keypoints[0].detected(0.0));  // floor 0 counts everything
}

TEST_CASE("no people is a valid frame") {
  const Frame f = parse_frame_file("{\"people\":[]}", 100, 100, 3);
  CHECK(f.people.empty());
}

TEST_CASE("malformed files throw") {
  CHECK_THROWS_AS(parse_frame_file("not json", 10, 10, 0), MalformedFile);
  CHECK_THROWS_AS(parse_frame_file("[1,2,3]", 10, 10, 0), MalformedFile);
  CHECK_THROWS_AS(parse_frame_file("{}", 10, 10, 0), MalformedFile);
  CHECK_THROWS_AS(parse_frame_file("{\"people\":3}", 10, 10, 0), MalformedFile);
  CHECK_THROWS_AS(parse_frame_file(frame_json("{}"), 10, 10, 0), MalformedFile);
  CHECK_THROWS_AS(parse_frame_file(frame_json("[1]"), 10, 10, 0), MalformedFile);

  SUBCASE("wrong arity") {
    CHECK_THROWS_AS(parse_frame_file(frame_json(person_json(triples(24))), 10, 10, 0),
                    MalformedFile);
    const std::string extra = ",\"hand_left_keypoints_2d\":" + triples(20);
    CHECK_THROWS_AS(parse_frame_file(frame_json(person_json(triples(25), extra)), 10, 10, 0),
                    MalformedFile);
  }
  SUBCASE("non-numeric entry") {
    std::string body = triples(25);
    body.replace(body.find("1.0"), 3, "\"x\"");
    CHECK_THROWS_AS(parse_frame_file(frame_json(person_json(body)), 10, 10, 0),
                    MalformedFile);
  }
  SUBCASE("confidence out of range") {
    CHECK_THROWS_AS(
        parse_frame_file(frame_json(person_json(triples(25, 1, 2, 1.5))), 10, 10, 0),
        MalformedFile);
    CHECK_THROWS_AS(
        parse_frame_file(frame_json(person_json(triples(25, 1, 2, -0.1))), 10, 10, 0),
        MalformedFile);
  }
  SUBCASE("bad image dimensions") {
    CHECK_THROWS_AS(parse_frame_file(frame_json(person_json(triples(25))), 0, 10, 0),
                    MalformedFile);
    CHECK_THROWS_AS(parse_frame_file(frame_json(person_json(triples(25))), 10, -1, 0),
                    MalformedFile);
  }
}

TEST_CASE("serialize/parse round-trip is bit-exact") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coord(-50.0, 2000.0);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  auto random_kp = [&] { return Keypoint2D{coord(rng), coord(rng), conf(rng)}; };

  for (int iter = 0; iter < 50; ++iter) {
    Frame frame;
    frame.frame_id = iter;
    frame.image_width = 1280;
    frame.image_height = 720;
    const int people = static_cast<int>(rng() % 3);
    for (int p = 0; p < people; ++p) {
      PersonDetection det;
      for (auto& kp : det.body.keypoints) kp = random_kp();
      if (rng() % 2) {
        HandSkeleton hand;
        hand.side = Hand::Left;
        for (auto& kp : hand.keypoints) kp = random_kp();
        det.left_hand = hand;
      }
      if (rng() % 2) {
        HandSkeleton hand;
        hand.side = Hand::Right;
        for (auto& kp : hand.keypoints) kp = random_kp();
        det.right_hand = hand;
      }
      if (rng() % 2) {
        std::vector<Keypoint2D> face(kFaceKeypointCount);
        for (auto& kp : face) kp = random_kp();
        det.face = std::move(face);
      }
      frame.people.push_back(std::move(det));
    }

    const std::string text = serialize_frame(frame);
    const Frame back = parse_frame_file(text, 1280, 720, frame.frame_id);
    REQUIRE(back.people.size() == frame.people.size());
    for (size_t p = 0; p < frame.people.size(); ++p) {
      const auto& x = frame.people[p];
      const auto& y = back.people[p];
      for (int i = 0; i < kBodyKeypointCount; ++i) {
        CHECK(x.body.keypoints[i].x == y.body.keypoints[i].x);
        CHECK(x.body.keypoints[i].y == y.body.keypoints[i].y);
        CHECK(x.body.keypoints[i].confidence == y.body.keypoints[i].confidence);
      }
      REQUIRE(x.left_hand.has_value() == y.left_hand.has_value());
      REQUIRE(x.right_hand.has_value() == y.right_hand.has_value());
      REQUIRE(x.face.has_value() == y.face.has_value());
    }
    // And the re-serialization is byte-identical.
    CHECK(serialize_frame(back) == text);
  }
}
