#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tabori/contingency.hpp"
#include "tabori/filter.hpp"

namespace tabori {

// Per-video ingest and filter counters. files = parsed + parse_failures;
// parsed = accepted + sum(rejected).
struct VideoStats {
  std::string corpus_id;
  std::string video_id;
  uint64_t files = 0;
  uint64_t parsed = 0;
  uint64_t parse_failures = 0;
  uint64_t accepted = 0;
  std::array<uint64_t, kRejectReasonCount> rejected{};  // indexed by RejectReason
  uint64_t hands_skipped = 0;
  uint64_t annotations = 0;

  uint64_t rejected_total() const;
  double acceptance_ratio() const;  // accepted / parsed, 0 for empty videos
};

struct RunStats {
  std::vector<VideoStats> videos;  // manifest order
  std::map<TableKey, uint64_t> annotations_per_table;

  uint64_t files() const;
  uint64_t parsed() const;
  uint64_t parse_failures() const;
  uint64_t accepted() const;
  uint64_t rejected(RejectReason reason) const;
  uint64_t rejected_total() const;
  uint64_t hands_skipped() const;
  uint64_t annotations() const;
};

}  // namespace tabori
