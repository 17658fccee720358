#include "tabori/run_stats.hpp"

namespace tabori {

uint64_t VideoStats::rejected_total() const {
  uint64_t sum = 0;
  for (uint64_t r : rejected) sum += r;
  return sum;
}

double VideoStats::acceptance_ratio() const {
  if (parsed == 0) return 0.0;
  return static_cast<double>(accepted) / static_cast<double>(parsed);
}

uint64_t RunStats::files() const {
  uint64_t sum = 0;
  for (const VideoStats& v : videos) sum += v.files;
  return sum;
}

uint64_t RunStats::parsed() const {
  uint64_t sum = 0;
  for (const VideoStats& v : videos) sum += v.parsed;
  return sum;
}

uint64_t RunStats::parse_failures() const {
  uint64_t sum = 0;
  for (const VideoStats& v : videos) sum += v.parse_failures;
  return sum;
}

uint64_t RunStats::accepted() const {
  uint64_t sum = 0;
  for (const VideoStats& v : videos) sum += v.accepted;
  return sum;
}

uint64_t RunStats::rejected(RejectReason reason) const {
  uint64_t sum = 0;
  for (const VideoStats& v : videos) sum += v.rejected[static_cast<size_t>(reason)];
  return sum;
}

uint64_t RunStats::rejected_total() const {
  uint64_t sum = 0;
  for (const VideoStats& v : videos) sum += v.rejected_total();
  return sum;
}

uint64_t RunStats::hands_skipped() const {
  uint64_t sum = 0;
  for (const VideoStats& v : videos) sum += v.hands_skipped;
  return sum;
}

uint64_t RunStats::annotations() const {
  uint64_t sum = 0;
  for (const VideoStats& v : videos) sum += v.annotations;
  return sum;
}

}  // namespace tabori
