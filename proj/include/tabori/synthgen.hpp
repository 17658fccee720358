#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tabori/phonology.hpp"
#include "tabori/types.hpp"

namespace tabori {

// Probability distribution over the 8x7 (orientation, location) cells.
struct CellDistribution {
  std::array<std::array<double, kLocationBinCount>, kOrientationBinCount> p{};

  static CellDistribution uniform();
  // One cell raised to probability boost, the remaining mass spread uniformly
  // over the other 55 cells.
  static CellDistribution boosted(LocationBin location, OrientationBin orientation,
                                  double boost);

  void validate() const;  // throws ConfigError unless the mass sums to 1
  // Inverse-CDF sample in canonical row-major cell order; u in [0, 1).
  std::pair<OrientationBin, LocationBin> sample(double u) const;
};

// Ground-truth generator settings. The analysis threshold fraction lives here
// too because the planted geometry must respect the same bin boundaries the
// annotator will use.
struct SynthSpec {
  uint64_t seed = 0;
  uint32_t frames = 0;
  int image_width = 1000;
  int image_height = 1000;
  double noise_px = 0.0;             // stddev of the truncated-uniform keypoint jitter
  double threshold_fraction = 0.10;  // must match the analysis LocationConfig
  CellDistribution left = CellDistribution::uniform();
  CellDistribution right = CellDistribution::uniform();
  double second_person_rate = 0.0;   // chance of an extra skeleton, to exercise filtering
  bool boundary_stress = false;      // aim at bin edges instead of centers; no round-trip guarantee
  std::string corpus_id = "SYN";
  int videos = 1;                    // frames are split evenly across videos

  void validate() const;  // throws ConfigError
};

// Body-anchor layout stretched onto a 3x3 grid so that every location
// category's threshold disk stays disjoint from the others. Deliberately not
// anatomically proportioned; that is what makes the planted bins unambiguous.
class SkeletonTemplate {
 public:
  static SkeletonTemplate for_image(int width, int height);

  // Placement target for a location: the category's first anchor point, or a
  // point beyond every threshold disk for NeutralSpace.
  Point target(LocationBin location) const;
  Point neutral_point() const { return neutral_; }
  // Wrist->MCP segment length used for planted orientations.
  double pointer_length() const { return pointer_length_; }

  // Full 25-point skeleton at the given confidence; non-anchor indices get
  // filler positions that no stage consumes.
  BodySkeleton body(double confidence) const;

  // Verifies that the anchor disks stay pairwise disjoint and that the jitter
  // bound cannot push a planted hand across a location or orientation
  // boundary. Throws InfeasiblePlacement otherwise.
  void check_feasible(double threshold_fraction, double jitter_bound) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::array<Point, kBodyKeypointCount> body_points_{};
  Point neutral_{};
  double pointer_length_ = 0.0;
};

// Deterministic single-person, single-hand frame whose annotation is
// (location, orientation) by construction: the hand centroid lands inside the
// location's threshold region (or beyond all of them for NeutralSpace) and
// the wrist->MCP vector points at the orientation's sector center. Jitter is
// bounded so the planted bins cannot flip; with boundary_stress the aim point
// moves to the bin edges and no such guarantee exists.
Frame generate_frame(LocationBin location, OrientationBin orientation, const SynthSpec& spec,
                     Hand side = Hand::Right, uint64_t frame_ordinal = 0);

// Cells actually planted by generate_corpus, per hand, for frames that pass
// the single-signer filter (injected two-person frames plant nothing).
struct GroundTruth {
  std::array<std::array<std::array<uint64_t, kLocationBinCount>, kOrientationBinCount>, 2>
      planted{};  // indexed by Hand
  uint64_t frames = 0;

  uint64_t planted_total(Hand hand) const;
};

// Writes one corpus: frame files drawn i.i.d. from the per-hand cell
// distributions (both hands in every frame) plus a manifest.json next to the
// frame directories. Layout: out_dir/<corpus>/v###/frame_######.json.
GroundTruth generate_corpus(const SynthSpec& spec, const std::filesystem::path& out_dir);

// Several corpora into one manifest. Corpus ids must be unique.
std::vector<GroundTruth> generate_corpora(const std::vector<SynthSpec>& specs,
                                          const std::filesystem::path& out_dir);

// Parses the generator's JSON spec file: top-level defaults plus a "corpora"
// array of per-corpus settings. Throws ConfigError.
std::vector<SynthSpec> parse_synth_specs(const std::string& text);

}  // namespace tabori
