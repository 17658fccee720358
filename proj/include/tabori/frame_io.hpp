#pragma once

#include <string>
#include <string_view>

#include "tabori/types.hpp"

namespace tabori {

// Parses one keypoint file: a top-level "people" list where every person
// carries flat (x, y, confidence) triples. Body is required (75 numbers);
// hands (63 each) and face (210) are optional, and an empty array counts as
// absent. Image dimensions come from the caller because the file format does
// not record them. Throws MalformedFile for anything off-schema: unparseable
// text, wrong array arity, non-finite numbers, confidence outside [0,1].
Frame parse_frame_file(std::string_view text, int image_width, int image_height,
                       uint64_t frame_id);

// Debug exporter for the same schema. parse(serialize(f)) reproduces every
// finite (x, y, confidence) triple bit-exactly.
std::string serialize_frame(const Frame& frame);

}  // namespace tabori
