#include "tabori/render.hpp"

#include <cinttypes>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tabori/errors.hpp"

namespace tabori {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string strf(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[256];
  vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

const char* hand_or_both(const std::optional<Hand>& hand) {
  return hand ? to_label(*hand) : "both";
}

std::string scope_comment(const FrequencyScope& scope, uint64_t total) {
  std::string line = "# corpus=" + scope.corpus_id;
  line += " video=" + (scope.video_id ? *scope.video_id : std::string("-"));
  line += std::string(" hand=") + hand_or_both(scope.hand);
  line += strf(" total=%" PRIu64 "\n", total);
  return line;
}

std::string location_header() {
  std::string line = "orientation";
  for (LocationBin l : kLocationBins) {
    line += ',';
    line += to_label(l);
  }
  line += '\n';
  return line;
}

// Linear white -> dark blue ramp; t in [0,1].
std::string blue_ramp(double t) {
  t = std::min(1.0, std::max(0.0, t));
  const int r = static_cast<int>(255 + t * (8 - 255));
  const int g = static_cast<int>(255 + t * (48 - 255));
  const int b = static_cast<int>(255 + t * (107 - 255));
  return strf("rgb(%d,%d,%d)", r, g, b);
}

constexpr int kCell = 56;
constexpr int kLeft = 46;    // room for orientation labels
constexpr int kTop = 96;     // room for title + location labels
constexpr int kBottom = 30;  // room for a legend line

std::string svg_open(const std::string& title) {
  const int width = kLeft + kCell * kLocationBinCount + 10;
  const int height = kTop + kCell * kOrientationBinCount + kBottom;
  std::string s =
      strf("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
           "viewBox=\"0 0 %d %d\">\n",
           width, height, width, height);
  s += strf(
      "<text x=\"%d\" y=\"22\" font-family=\"monospace\" font-size=\"14\">%s</text>\n",
      kLeft, title.c_str());
  for (int l = 0; l < kLocationBinCount; ++l) {
    s += strf(
        "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"10\" "
        "text-anchor=\"middle\" transform=\"rotate(-40 %d %d)\">%s</text>\n",
        kLeft + l * kCell + kCell / 2, kTop - 8, kLeft + l * kCell + kCell / 2, kTop - 8,
        to_label(static_cast<LocationBin>(l)));
  }
  for (int o = 0; o < kOrientationBinCount; ++o) {
    s += strf(
        "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"11\" "
        "text-anchor=\"end\">%s</text>\n",
        kLeft - 6, kTop + o * kCell + kCell / 2 + 4,
        to_label(static_cast<OrientationBin>(o)));
  }
  return s;
}

std::string svg_cell(int o, int l, const std::string& fill, const std::string& tooltip) {
  return strf(
             "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"%s\" "
             "stroke=\"#444\" stroke-width=\"1\">",
             kLeft + l * kCell, kTop + o * kCell, kCell, kCell, fill.c_str()) +
         "<title>" + tooltip + "</title></rect>\n";
}

std::string svg_legend(const std::string& text) {
  const int y = kTop + kCell * kOrientationBinCount + 18;
  return strf(
      "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"10\">%s</text>\n",
      kLeft, y, text.c_str());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

ordered_json cell_json(const SignificanceCell& cell) {
  ordered_json j;
  j["orientation"] = to_label(cell.orientation);
  j["location"] = to_label(cell.location);
  j["a"] = cell.a;
  j["b"] = cell.b;
  j["c"] = cell.c;
  j["d"] = cell.d;
  j["expected_a"] = cell.expected_a;
  j["chi2"] = cell.chi2;
  j["p_raw"] = cell.p_raw;
  j["p_adjusted"] = cell.p_adjusted;
  j["valid"] = cell.valid;
  j["significant"] = cell.significant;
  j["direction"] = to_label(cell.direction);
  return j;
}

template <typename T>
T require_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ConfigError(std::string("significance report missing field: ") + key);
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("significance report field has wrong type: ") + key);
  }
}

}  // namespace

std::string frequency_csv(const FrequencyMatrix& matrix) {
  std::string out = scope_comment(matrix.scope, matrix.total);
  out += location_header();
  for (int o = 0; o < kOrientationBinCount; ++o) {
    out += to_label(static_cast<OrientationBin>(o));
    for (int l = 0; l < kLocationBinCount; ++l) {
      out += strf(",%.9f", matrix.values[o][l]);
    }
    out += '\n';
  }
  return out;
}

std::string empty_scope_csv(const FrequencyScope& scope) {
  std::string out = scope_comment(scope, 0);
  out += "# empty: no annotations in scope\n";
  return out;
}

std::string significance_json(const SignificanceReport& report) {
  ordered_json j;
  j["corpus_id"] = report.corpus_id;
  j["hand"] = to_label(report.hand);
  j["alpha"] = report.alpha;
  j["min_expected"] = report.min_expected;
  j["yates"] = report.yates;
  j["grand_total"] = report.grand_total;
  j["number_of_tests"] = report.number_of_tests;
  j["empty"] = report.grand_total == 0;
  j["cells"] = ordered_json::array();
  for (const SignificanceCell& cell : report.cells) {
    j["cells"].push_back(cell_json(cell));
  }
  return j.dump(2) + "\n";
}

SignificanceReport parse_significance_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ConfigError("significance report is not valid JSON");
  }
  SignificanceReport report;
  report.corpus_id = require_field<std::string>(j, "corpus_id");
  const auto hand = parse_hand(require_field<std::string>(j, "hand"));
  if (!hand) throw ConfigError("significance report has unknown hand label");
  report.hand = *hand;
  report.alpha = require_field<double>(j, "alpha");
  report.min_expected = require_field<double>(j, "min_expected");
  report.yates = require_field<bool>(j, "yates");
  report.grand_total = require_field<uint64_t>(j, "grand_total");
  report.number_of_tests = require_field<int>(j, "number_of_tests");
  if (!j.contains("cells") || !j.at("cells").is_array()) {
    throw ConfigError("significance report missing field: cells");
  }
  for (const nlohmann::json& cj : j.at("cells")) {
    SignificanceCell cell;
    const auto orientation = parse_orientation(require_field<std::string>(cj, "orientation"));
    const auto location = parse_location(require_field<std::string>(cj, "location"));
    if (!orientation || !location) {
      throw ConfigError("significance report cell has unknown bin label");
    }
    cell.orientation = *orientation;
    cell.location = *location;
    cell.a = require_field<uint64_t>(cj, "a");
    cell.b = require_field<uint64_t>(cj, "b");
    cell.c = require_field<uint64_t>(cj, "c");
    cell.d = require_field<uint64_t>(cj, "d");
    cell.expected_a = require_field<double>(cj, "expected_a");
    cell.chi2 = require_field<double>(cj, "chi2");
    cell.p_raw = require_field<double>(cj, "p_raw");
    cell.p_adjusted = require_field<double>(cj, "p_adjusted");
    cell.valid = require_field<bool>(cj, "valid");
    cell.significant = require_field<bool>(cj, "significant");
    cell.direction = require_field<std::string>(cj, "direction") == "over"
                         ? Direction::OverRepresented
                         : Direction::UnderRepresented;
    report.cells.push_back(cell);
  }
  return report;
}

std::string comparison_json(const LanguageComparison& comparison) {
  auto cells = [](const std::vector<CellId>& ids) {
    ordered_json arr = ordered_json::array();
    for (const CellId& id : ids) {
      arr.push_back({{"orientation", to_label(id.orientation)},
                     {"location", to_label(id.location)}});
    }
    return arr;
  };
  ordered_json j;
  j["corpus_a"] = comparison.corpus_a;
  j["corpus_b"] = comparison.corpus_b;
  j["hand"] = to_label(comparison.hand);
  j["alpha"] = comparison.alpha;
  j["shared"] = cells(comparison.shared);
  j["only_a"] = cells(comparison.only_a);
  j["only_b"] = cells(comparison.only_b);
  return j.dump(2) + "\n";
}

std::string frequency_heatmap_svg(const FrequencyMatrix& matrix) {
  double max_value = 0.0;
  for (const auto& row : matrix.values) {
    for (double v : row) max_value = std::max(max_value, v);
  }
  std::string title = "frequencies " + matrix.scope.corpus_id;
  if (matrix.scope.video_id) title += "/" + *matrix.scope.video_id;
  title += std::string(" ") + hand_or_both(matrix.scope.hand);

  std::string svg = svg_open(title);
  for (int o = 0; o < kOrientationBinCount; ++o) {
    for (int l = 0; l < kLocationBinCount; ++l) {
      const double v = matrix.values[o][l];
      const double t = max_value > 0.0 ? v / max_value : 0.0;
      std::string tooltip = strf("%s/%s: %.6f", to_label(static_cast<OrientationBin>(o)),
                                 to_label(static_cast<LocationBin>(l)), v);
      svg += svg_cell(o, l, blue_ramp(t), tooltip);
    }
  }
  svg += svg_legend(strf("shade: proportion of %" PRIu64 " annotations, max %.6f",
                         matrix.total, max_value));
  svg += "</svg>\n";
  return svg;
}

std::string significance_heatmap_svg(const SignificanceReport& report) {
  std::string title = "significance " + report.corpus_id + " " + to_label(report.hand) +
                      strf(" alpha=%g", report.alpha);
  std::string svg = svg_open(title);
  for (const SignificanceCell& cell : report.cells) {
    std::string fill = "white";
    if (!cell.valid) {
      fill = "rgb(200,200,200)";
    } else if (cell.significant) {
      fill = cell.direction == Direction::OverRepresented ? "rgb(197,27,27)"
                                                          : "rgb(33,68,166)";
    }
    std::string tooltip =
        strf("%s/%s: a=%" PRIu64 " exp=%.3f chi2=%.4f p_adj=%.3g %s%s",
             to_label(cell.orientation), to_label(cell.location), cell.a, cell.expected_a,
             cell.chi2, cell.p_adjusted, to_label(cell.direction),
             cell.valid ? "" : " (invalid)");
    svg += svg_cell(static_cast<int>(cell.orientation), static_cast<int>(cell.location),
                    fill, tooltip);
  }
  svg += svg_legend("red: over-represented, blue: under-represented, gray: expected "
                    "counts too small");
  svg += "</svg>\n";
  return svg;
}

std::string annotations_tsv(std::span<const PhonologicalAnnotation> annotations) {
  std::string out = "# corpus\tvideo\tframe\thand\tlocation\torientation\n";
  for (const PhonologicalAnnotation& ann : annotations) {
    out += ann.corpus_id;
    out += '\t';
    out += ann.video_id;
    out += strf("\t%" PRIu64 "\t", ann.frame_id);
    out += to_label(ann.hand);
    out += '\t';
    out += to_label(ann.location);
    out += '\t';
    out += to_label(ann.orientation);
    out += '\n';
  }
  return out;
}

std::vector<PhonologicalAnnotation> parse_annotations_tsv(const std::string& text) {
  std::vector<PhonologicalAnnotation> annotations;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 6) {
      throw ConfigError(strf("annotation dump line %zu: expected 6 fields", line_no));
    }
    PhonologicalAnnotation ann;
    ann.corpus_id = fields[0];
    ann.video_id = fields[1];
    try {
      ann.frame_id = std::stoull(fields[2]);
    } catch (const std::exception&) {
      throw ConfigError(strf("annotation dump line %zu: bad frame id", line_no));
    }
    const auto hand = parse_hand(fields[3]);
    const auto location = parse_location(fields[4]);
    const auto orientation = parse_orientation(fields[5]);
    if (!hand || !location || !orientation) {
      throw ConfigError(strf("annotation dump line %zu: unknown label", line_no));
    }
    ann.hand = *hand;
    ann.location = *location;
    ann.orientation = *orientation;
    annotations.push_back(std::move(ann));
  }
  return annotations;
}

std::string filter_report_text(const RunStats& stats) {
  static constexpr const char* kHeaders[] = {
      "corpus", "video",      "files",   "parsed",  "parse_fail", "accepted",
      "no_person", "multi", "low_body", "no_hand", "skipped",    "annotations"};
  constexpr int kColumns = 12;

  std::vector<std::array<std::string, kColumns>> rows;
  auto make_row = [](const std::string& corpus, const std::string& video, uint64_t files,
                     uint64_t parsed, uint64_t parse_failures, uint64_t accepted,
                     const std::array<uint64_t, kRejectReasonCount>& rejected,
                     uint64_t skipped, uint64_t annotations) {
    std::array<std::string, kColumns> row;
    row[0] = corpus;
    row[1] = video;
    row[2] = std::to_string(files);
    row[3] = std::to_string(parsed);
    row[4] = std::to_string(parse_failures);
    row[5] = std::to_string(accepted);
    for (int r = 0; r < kRejectReasonCount; ++r) row[6 + r] = std::to_string(rejected[r]);
    row[10] = std::to_string(skipped);
    row[11] = std::to_string(annotations);
    return row;
  };

  for (const VideoStats& v : stats.videos) {
    rows.push_back(make_row(v.corpus_id, v.video_id, v.files, v.parsed, v.parse_failures,
                            v.accepted, v.rejected, v.hands_skipped, v.annotations));
  }
  std::array<uint64_t, kRejectReasonCount> total_rejected{};
  for (int r = 0; r < kRejectReasonCount; ++r) {
    total_rejected[r] = stats.rejected(static_cast<RejectReason>(r));
  }
  rows.push_back(make_row("TOTAL", "-", stats.files(), stats.parsed(),
                          stats.parse_failures(), stats.accepted(), total_rejected,
                          stats.hands_skipped(), stats.annotations()));

  std::array<size_t, kColumns> width;
  for (int c = 0; c < kColumns; ++c) {
    width[c] = std::string(kHeaders[c]).size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }

  auto emit = [&](const std::array<std::string, kColumns>& row) {
    std::string line;
    for (int c = 0; c < kColumns; ++c) {
      if (c > 0) line += "  ";
      const size_t pad = width[c] - row[c].size();
      if (c < 2) {  // ids left-aligned, counters right-aligned
        line += row[c] + std::string(pad, ' ');
      } else {
        line += std::string(pad, ' ') + row[c];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
  };

  std::array<std::string, kColumns> header_row;
  for (int c = 0; c < kColumns; ++c) header_row[c] = kHeaders[c];
  std::string out = emit(header_row);
  for (const auto& row : rows) out += emit(row);
  return out;
}

std::string filter_report_json(const RunStats& stats) {
  ordered_json j;
  j["videos"] = ordered_json::array();
  for (const VideoStats& v : stats.videos) {
    ordered_json vj;
    vj["corpus_id"] = v.corpus_id;
    vj["video_id"] = v.video_id;
    vj["files"] = v.files;
    vj["parsed"] = v.parsed;
    vj["parse_failures"] = v.parse_failures;
    vj["accepted"] = v.accepted;
    ordered_json rejected;
    for (int r = 0; r < kRejectReasonCount; ++r) {
      rejected[to_label(static_cast<RejectReason>(r))] = v.rejected[r];
    }
    vj["rejected"] = rejected;
    vj["hands_skipped"] = v.hands_skipped;
    vj["annotations"] = v.annotations;
    j["videos"].push_back(vj);
  }
  ordered_json totals;
  totals["files"] = stats.files();
  totals["parsed"] = stats.parsed();
  totals["parse_failures"] = stats.parse_failures();
  totals["accepted"] = stats.accepted();
  ordered_json rejected;
  for (int r = 0; r < kRejectReasonCount; ++r) {
    rejected[to_label(static_cast<RejectReason>(r))] = stats.rejected(static_cast<RejectReason>(r));
  }
  totals["rejected"] = rejected;
  totals["hands_skipped"] = stats.hands_skipped();
  totals["annotations"] = stats.annotations();
  j["totals"] = totals;

  ordered_json per_table = ordered_json::array();
  for (const auto& [key, count] : stats.annotations_per_table) {
    per_table.push_back({{"corpus_id", key.corpus_id},
                         {"hand", to_label(key.hand)},
                         {"annotations", count}});
  }
  j["annotations_per_table"] = per_table;
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failed: " + path.string());
  }
  return buf.str();
}

std::string sanitize_for_path(const std::string& id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_";
  return out;
}

}  // namespace tabori
