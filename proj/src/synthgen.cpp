#include "tabori/synthgen.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include <json.hpp>

#include "tabori/errors.hpp"
#include "tabori/frame_io.hpp"
#include "tabori/render.hpp"

namespace tabori {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPlantedConfidence = 0.9;

// splitmix64 finalizer over an affinely indexed state: O(1) per-frame seeds
// that do not depend on generation order.
uint64_t frame_seed(uint64_t seed, uint64_t ordinal) {
  uint64_t z = seed + (ordinal + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// 53-bit mantissa in [0,1); bit-identical across platforms, unlike
// std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on [-sqrt(3)*noise_px, +sqrt(3)*noise_px]: standard deviation
// noise_px with a hard bound the feasibility margins can rely on.
double jitter(std::mt19937_64& rng, double noise_px) {
  return (2.0 * uniform01(rng) - 1.0) * std::sqrt(3.0) * noise_px;
}

// Compass degrees of each sector center, in OrientationBin order.
constexpr double kSectorCenter[kOrientationBinCount] = {90.0,  45.0,  0.0,   315.0,
                                                        270.0, 225.0, 180.0, 135.0};

double plant_angle(OrientationBin ori, bool boundary_stress) {
  const double center = kSectorCenter[static_cast<size_t>(ori)];
  return boundary_stress ? center + 22.5 : center;
}

// Image-coordinate unit vector for a compass angle (y grows down).
Point compass_unit(double degrees) {
  const double rad = degrees * kPi / 180.0;
  return {std::cos(rad), -std::sin(rad)};
}

// The nine anchor keypoints and the category each belongs to.
struct AnchorSlot {
  LocationBin bin;
  int body;
};
constexpr AnchorSlot kAnchorSlots[9] = {
    {LocationBin::Eyes, body_index::kRightEye},
    {LocationBin::Eyes, body_index::kLeftEye},
    {LocationBin::Nose, body_index::kNose},
    {LocationBin::Ears, body_index::kRightEar},
    {LocationBin::Ears, body_index::kLeftEar},
    {LocationBin::Neck, body_index::kNeck},
    {LocationBin::Shoulder, body_index::kRightShoulder},
    {LocationBin::Shoulder, body_index::kLeftShoulder},
    {LocationBin::Abdomen, body_index::kMidHip},
};

// 21 hand keypoints whose mean is exactly the target: wrist and middle-MCP
// straddle it along the pointing direction, nine antipodal pairs ring it, and
// one point sits on it.
HandSkeleton planted_hand(const Point& target, double angle_deg, double length, Hand side) {
  HandSkeleton hand;
  hand.side = side;
  const Point u = compass_unit(angle_deg);
  const double half = length / 2.0;
  auto put = [&](int index, double x, double y) {
    hand.keypoints[static_cast<size_t>(index)] = {x, y, kPlantedConfidence};
  };
  put(hand_index::kWrist, target.x - half * u.x, target.y - half * u.y);
  put(hand_index::kMiddleMcp, target.x + half * u.x, target.y + half * u.y);

  int slots[19];
  int filled = 0;
  for (int i = 0; i < kHandKeypointCount; ++i) {
    if (i != hand_index::kWrist && i != hand_index::kMiddleMcp) slots[filled++] = i;
  }
  const double ring = length / 4.0;
  for (int k = 0; k < 9; ++k) {
    const double phi = kPi * k / 9.0;
    const double rx = ring * std::cos(phi);
    const double ry = ring * std::sin(phi);
    put(slots[2 * k], target.x + rx, target.y + ry);
    put(slots[2 * k + 1], target.x - rx, target.y - ry);
  }
  put(slots[18], target.x, target.y);
  return hand;
}

std::string frame_name(uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06" PRIu64 ".json", index);
  return buf;
}

std::string video_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "v%03d", index);
  return buf;
}

Point aim_point(const SkeletonTemplate& tmpl, LocationBin location, const SynthSpec& spec) {
  if (!spec.boundary_stress) return tmpl.target(location);
  const double thr = spec.threshold_fraction *
                     std::hypot(static_cast<double>(spec.image_width),
                                static_cast<double>(spec.image_height));
  auto towards = [&](const Point& from, const Point& to, double dist) {
    const double d = distance(from, to);
    return Point{from.x + dist * (to.x - from.x) / d, from.y + dist * (to.y - from.y) / d};
  };
  if (location == LocationBin::NeutralSpace) {
    // Exactly on the nearest anchor's threshold circle.
    const Point n = tmpl.neutral_point();
    Point nearest = tmpl.target(LocationBin::Nose);
    double best = std::numeric_limits<double>::infinity();
    for (int l = 0; l < kBodyLocationCount; ++l) {
      const Point p = tmpl.target(static_cast<LocationBin>(l));
      if (const double d = distance(n, p); d < best) {
        best = d;
        nearest = p;
      }
    }
    return towards(nearest, n, thr);
  }
  // On the anchor's threshold circle in the direction of the image center.
  const Point t = tmpl.target(location);
  const Point center{spec.image_width / 2.0, spec.image_height / 2.0};
  return towards(t, center, thr);
}

struct HandPlan {
  LocationBin location;
  OrientationBin orientation;
};

Frame build_frame(const SynthSpec& spec, const SkeletonTemplate& tmpl,
                  const std::optional<HandPlan>& left, const std::optional<HandPlan>& right,
                  bool second_person, uint64_t frame_id, std::mt19937_64& rng) {
  Frame frame;
  frame.frame_id = frame_id;
  frame.image_width = spec.image_width;
  frame.image_height = spec.image_height;

  PersonDetection person;
  person.body = tmpl.body(kPlantedConfidence);
  auto plant = [&](const std::optional<HandPlan>& plan, Hand side) {
    if (!plan) return std::optional<HandSkeleton>{};
    return std::optional<HandSkeleton>(planted_hand(
        aim_point(tmpl, plan->location, spec),
        plant_angle(plan->orientation, spec.boundary_stress), tmpl.pointer_length(), side));
  };
  person.left_hand = plant(left, Hand::Left);
  person.right_hand = plant(right, Hand::Right);
  frame.people.push_back(std::move(person));

  if (second_person) {
    PersonDetection extra;
    extra.body = tmpl.body(kPlantedConfidence);
    const double shift = 0.01 * spec.image_width;
    for (Keypoint2D& kp : extra.body.keypoints) kp.x += shift;
    frame.people.push_back(std::move(extra));
  }

  if (spec.noise_px > 0.0) {
    // Fixed draw order: bodies in person order, then left hand, then right.
    for (PersonDetection& p : frame.people) {
      for (Keypoint2D& kp : p.body.keypoints) {
        kp.x += jitter(rng, spec.noise_px);
        kp.y += jitter(rng, spec.noise_px);
      }
    }
    for (Hand side : kHands) {
      auto& hand = side == Hand::Left ? frame.people.front().left_hand
                                      : frame.people.front().right_hand;
      if (!hand) continue;
      for (Keypoint2D& kp : hand->keypoints) {
        kp.x += jitter(rng, spec.noise_px);
        kp.y += jitter(rng, spec.noise_px);
      }
    }
  }
  return frame;
}

using ordered_json = nlohmann::ordered_json;

CellDistribution parse_distribution(const nlohmann::json& j, const char* key) {
  if (j.is_string()) {
    if (j.get<std::string>() == "uniform") return CellDistribution::uniform();
    throw ConfigError(std::string("synth spec: unknown distribution name for ") + key);
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError(std::string("synth spec: distribution for ") + key +
                      " needs a \"kind\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return CellDistribution::uniform();
  if (kind != "boosted") {
    throw ConfigError("synth spec: unknown distribution kind \"" + kind + "\"");
  }
  if (!j.contains("location") || !j.at("location").is_string() ||
      !j.contains("orientation") || !j.at("orientation").is_string() ||
      !j.contains("boost") || !j.at("boost").is_number()) {
    throw ConfigError("synth spec: boosted distribution needs location, orientation, boost");
  }
  const auto location = parse_location(j.at("location").get<std::string>());
  const auto orientation = parse_orientation(j.at("orientation").get<std::string>());
  if (!location || !orientation) {
    throw ConfigError("synth spec: boosted distribution has unknown bin label");
  }
  return CellDistribution::boosted(*location, *orientation, j.at("boost").get<double>());
}

void apply_spec_fields(const nlohmann::json& j, SynthSpec& spec) {
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "corpus_id") {
        spec.corpus_id = value.get<std::string>();
      } else if (key == "seed") {
        spec.seed = value.get<uint64_t>();
      } else if (key == "frames") {
        spec.frames = value.get<uint32_t>();
      } else if (key == "image_width") {
        spec.image_width = value.get<int>();
      } else if (key == "image_height") {
        spec.image_height = value.get<int>();
      } else if (key == "noise_px") {
        spec.noise_px = value.get<double>();
      } else if (key == "threshold_fraction") {
        spec.threshold_fraction = value.get<double>();
      } else if (key == "second_person_rate") {
        spec.second_person_rate = value.get<double>();
      } else if (key == "boundary_stress") {
        spec.boundary_stress = value.get<bool>();
      } else if (key == "videos") {
        spec.videos = value.get<int>();
      } else if (key == "left") {
        spec.left = parse_distribution(value, "left");
      } else if (key == "right") {
        spec.right = parse_distribution(value, "right");
      } else {
        throw ConfigError("synth spec: unknown field \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("synth spec: field \"" + key + "\" has the wrong type");
    }
  }
}

}  // namespace

CellDistribution CellDistribution::uniform() {
  CellDistribution d;
  const double cell = 1.0 / (kOrientationBinCount * kLocationBinCount);
  for (auto& row : d.p) row.fill(cell);
  return d;
}

CellDistribution CellDistribution::boosted(LocationBin location, OrientationBin orientation,
                                           double boost) {
  if (!(boost >= 0.0 && boost <= 1.0)) {
    throw ConfigError("cell boost must be in [0,1]");
  }
  CellDistribution d;
  const double rest = (1.0 - boost) / (kOrientationBinCount * kLocationBinCount - 1);
  for (auto& row : d.p) row.fill(rest);
  d.p[static_cast<size_t>(orientation)][static_cast<size_t>(location)] = boost;
  return d;
}

void CellDistribution::validate() const {
  double sum = 0.0;
  for (const auto& row : p) {
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ConfigError("cell distribution entries must be finite and non-negative");
      }
      sum += v;
    }
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw ConfigError("cell distribution mass must sum to 1");
  }
}

std::pair<OrientationBin, LocationBin> CellDistribution::sample(double u) const {
  double cum = 0.0;
  for (int o = 0; o < kOrientationBinCount; ++o) {
    for (int l = 0; l < kLocationBinCount; ++l) {
      cum += p[o][l];
      if (u < cum) {
        return {static_cast<OrientationBin>(o), static_cast<LocationBin>(l)};
      }
    }
  }
  return {OrientationBin::NW, LocationBin::NeutralSpace};  // u beyond fp-rounded mass
}

void SynthSpec::validate() const {
  if (corpus_id.empty()) throw ConfigError("synth spec: corpus_id must not be empty");
  if (image_width <= 0 || image_height <= 0) {
    throw ConfigError("synth spec: image dimensions must be positive");
  }
  if (!(noise_px >= 0.0) || !std::isfinite(noise_px)) {
    throw ConfigError("synth spec: noise_px must be finite and >= 0");
  }
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw ConfigError("synth spec: threshold_fraction must be in (0,1)");
  }
  if (!(second_person_rate >= 0.0 && second_person_rate <= 1.0)) {
    throw ConfigError("synth spec: second_person_rate must be in [0,1]");
  }
  if (videos < 1) throw ConfigError("synth spec: videos must be >= 1");
  left.validate();
  right.validate();
}

SkeletonTemplate SkeletonTemplate::for_image(int width, int height) {
  SkeletonTemplate t;
  t.width_ = width;
  t.height_ = height;
  const double w = width;
  const double h = height;
  // Three-column, three-row anchor grid at 0.15 / 0.50 / 0.85 of each axis.
  const double gx[3] = {0.15 * w, 0.50 * w, 0.85 * w};
  const double gy[3] = {0.15 * h, 0.50 * h, 0.85 * h};

  t.body_points_[body_index::kRightEye] = {gx[0], gy[0]};
  t.body_points_[body_index::kLeftEye] = {gx[1], gy[0]};
  t.body_points_[body_index::kNose] = {gx[2], gy[0]};
  t.body_points_[body_index::kRightEar] = {gx[0], gy[1]};
  t.body_points_[body_index::kLeftEar] = {gx[1], gy[1]};
  t.body_points_[body_index::kNeck] = {gx[2], gy[1]};
  t.body_points_[body_index::kRightShoulder] = {gx[0], gy[2]};
  t.body_points_[body_index::kLeftShoulder] = {gx[1], gy[2]};
  t.body_points_[body_index::kMidHip] = {gx[2], gy[2]};

  // Unconsumed indices parked along the bottom edge.
  int filler = 0;
  constexpr bool kIsAnchor[kBodyKeypointCount] = {
      true,  true,  true,  false, false, true,  false, false, true,
      false, false, false, false, false, false, true,  true,  true,
      true,  false, false, false, false, false, false};
  for (int i = 0; i < kBodyKeypointCount; ++i) {
    if (kIsAnchor[i]) continue;
    t.body_points_[static_cast<size_t>(i)] = {(0.05 + 0.06 * filler) * w, 0.97 * h};
    ++filler;
  }

  // Center of the first grid cell: the farthest interior point from the
  // surrounding four anchors.
  t.neutral_ = {0.325 * w, 0.325 * h};
  t.pointer_length_ = 0.06 * std::min(w, h);
  return t;
}

Point SkeletonTemplate::target(LocationBin location) const {
  switch (location) {
    case LocationBin::Ears: return body_points_[body_index::kRightEar];
    case LocationBin::Eyes: return body_points_[body_index::kRightEye];
    case LocationBin::Nose: return body_points_[body_index::kNose];
    case LocationBin::Neck: return body_points_[body_index::kNeck];
    case LocationBin::Shoulder: return body_points_[body_index::kRightShoulder];
    case LocationBin::Abdomen: return body_points_[body_index::kMidHip];
    case LocationBin::NeutralSpace: return neutral_;
  }
  return neutral_;
}

BodySkeleton SkeletonTemplate::body(double confidence) const {
  BodySkeleton skeleton;
  for (int i = 0; i < kBodyKeypointCount; ++i) {
    const Point& p = body_points_[static_cast<size_t>(i)];
    skeleton.keypoints[static_cast<size_t>(i)] = {p.x, p.y, confidence};
  }
  return skeleton;
}

void SkeletonTemplate::check_feasible(double threshold_fraction, double jitter_bound) const {
  const double thr = threshold_fraction *
                     std::hypot(static_cast<double>(width_), static_cast<double>(height_));
  // Worst-case drift of a planted centroid relative to a jittered anchor:
  // every keypoint moves at most sqrt(2) * jitter_bound, twice over.
  const double drift = 2.0 * std::sqrt(2.0) * jitter_bound;

  if (!(drift <= 0.5 * thr)) {
    throw InfeasiblePlacement("noise can push a planted hand outside its location disk");
  }
  for (int i = 0; i < 9; ++i) {
    for (int j = i + 1; j < 9; ++j) {
      if (kAnchorSlots[i].bin == kAnchorSlots[j].bin) continue;
      const double d = distance(body_points_[static_cast<size_t>(kAnchorSlots[i].body)],
                                body_points_[static_cast<size_t>(kAnchorSlots[j].body)]);
      if (!(d >= 2.0 * thr + 4.0 * drift)) {
        throw InfeasiblePlacement(
            std::string("threshold disks overlap: ") + to_label(kAnchorSlots[i].bin) +
            " and " + to_label(kAnchorSlots[j].bin) +
            " (resize the image or lower the threshold)");
      }
    }
  }
  for (const AnchorSlot& slot : kAnchorSlots) {
    const double d = distance(neutral_, body_points_[static_cast<size_t>(slot.body)]);
    if (!(d > thr + 4.0 * drift)) {
      throw InfeasiblePlacement(std::string("neutral point too close to ") +
                                to_label(slot.bin));
    }
  }
  // Jittering both anchors tilts the pointer by at most asin(drift / length);
  // demand an 18-degree ceiling, inside the 22.5-degree sector half-width.
  if (!(drift <= pointer_length_ * std::sin(18.0 * kPi / 180.0))) {
    throw InfeasiblePlacement("noise can tilt the pointer across a sector boundary");
  }
}

Frame generate_frame(LocationBin location, OrientationBin orientation, const SynthSpec& spec,
                     Hand side, uint64_t frame_ordinal) {
  spec.validate();
  const SkeletonTemplate tmpl = SkeletonTemplate::for_image(spec.image_width, spec.image_height);
  tmpl.check_feasible(spec.threshold_fraction,
                      spec.boundary_stress ? 0.0 : std::sqrt(3.0) * spec.noise_px);
  std::mt19937_64 rng(frame_seed(spec.seed, frame_ordinal));
  const HandPlan plan{location, orientation};
  return build_frame(spec, tmpl, side == Hand::Left ? std::optional(plan) : std::nullopt,
                     side == Hand::Right ? std::optional(plan) : std::nullopt, false,
                     frame_ordinal, rng);
}

uint64_t GroundTruth::planted_total(Hand hand) const {
  uint64_t sum = 0;
  for (const auto& row : planted[static_cast<size_t>(hand)]) {
    for (uint64_t c : row) sum += c;
  }
  return sum;
}

std::vector<GroundTruth> generate_corpora(const std::vector<SynthSpec>& specs,
                                          const std::filesystem::path& out_dir) {
  if (specs.empty()) throw ConfigError("synth: no corpora to generate");
  std::set<std::string> ids;
  for (const SynthSpec& spec : specs) {
    spec.validate();
    if (!ids.insert(spec.corpus_id).second) {
      throw ConfigError("synth: duplicate corpus id \"" + spec.corpus_id + "\"");
    }
  }

  ordered_json manifest;
  manifest["corpora"] = ordered_json::array();
  std::vector<GroundTruth> truths;

  for (const SynthSpec& spec : specs) {
    const SkeletonTemplate tmpl =
        SkeletonTemplate::for_image(spec.image_width, spec.image_height);
    tmpl.check_feasible(spec.threshold_fraction,
                        spec.boundary_stress ? 0.0 : std::sqrt(3.0) * spec.noise_px);

    GroundTruth truth;
    truth.frames = spec.frames;

    ordered_json corpus;
    corpus["id"] = spec.corpus_id;
    corpus["videos"] = ordered_json::array();

    const uint64_t per_video = spec.frames / static_cast<uint32_t>(spec.videos);
    const uint64_t remainder = spec.frames % static_cast<uint32_t>(spec.videos);
    uint64_t ordinal = 0;

    for (int v = 0; v < spec.videos; ++v) {
      const std::string vid = video_name(v);
      const std::filesystem::path rel =
          std::filesystem::path(sanitize_for_path(spec.corpus_id)) / vid;
      const std::filesystem::path dir = out_dir / rel;
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw IoError("cannot create directory " + dir.string());

      const uint64_t count = per_video + (static_cast<uint64_t>(v) < remainder ? 1 : 0);
      for (uint64_t j = 0; j < count; ++j, ++ordinal) {
        std::mt19937_64 rng(frame_seed(spec.seed, ordinal));
        const auto [lo, ll] = spec.left.sample(uniform01(rng));
        const auto [ro, rl] = spec.right.sample(uniform01(rng));
        const bool second =
            spec.second_person_rate > 0.0 && uniform01(rng) < spec.second_person_rate;

        const Frame frame = build_frame(spec, tmpl, HandPlan{ll, lo}, HandPlan{rl, ro},
                                        second, j, rng);
        write_text_file(dir / frame_name(j), serialize_frame(frame));
        if (!second) {
          ++truth.planted[static_cast<size_t>(Hand::Left)][static_cast<size_t>(lo)]
                         [static_cast<size_t>(ll)];
          ++truth.planted[static_cast<size_t>(Hand::Right)][static_cast<size_t>(ro)]
                         [static_cast<size_t>(rl)];
        }
      }

      ordered_json video;
      video["id"] = vid;
      video["frames_dir"] = rel.generic_string();
      video["width"] = spec.image_width;
      video["height"] = spec.image_height;
      corpus["videos"].push_back(std::move(video));
    }
    manifest["corpora"].push_back(std::move(corpus));
    truths.push_back(truth);
  }

  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return truths;
}

GroundTruth generate_corpus(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  return generate_corpora({spec}, out_dir).front();
}

std::vector<SynthSpec> parse_synth_specs(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ConfigError("synth spec: not valid JSON");
  }
  if (!doc.contains("corpora") || !doc.at("corpora").is_array() ||
      doc.at("corpora").empty()) {
    throw ConfigError("synth spec: needs a non-empty \"corpora\" array");
  }
  SynthSpec base;
  if (doc.contains("defaults")) {
    if (!doc.at("defaults").is_object()) {
      throw ConfigError("synth spec: \"defaults\" must be an object");
    }
    apply_spec_fields(doc.at("defaults"), base);
  }
  std::vector<SynthSpec> specs;
  for (const nlohmann::json& entry : doc.at("corpora")) {
    if (!entry.is_object()) {
      throw ConfigError("synth spec: corpus entries must be objects");
    }
    SynthSpec spec = base;
    apply_spec_fields(entry, spec);
    spec.validate();
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace tabori
