#pragma once

#include <cstdint>
#include <vector>

#include "tabori/contingency.hpp"

namespace tabori {

// Per-cell collapse of the global table: a is the cell itself, b the rest of
// its row, c the rest of its column, d everything else. Always sums to the
// source table's grand total and reproduces its marginals for that row and
// column.
struct PostHocTable {
  OrientationBin orientation = OrientationBin::N;
  LocationBin location = LocationBin::Ears;
  uint64_t a = 0, b = 0, c = 0, d = 0;

  uint64_t total() const { return a + b + c + d; }
};

// One table per cell, canonical row-major order (orientation outer, location
// inner), 56 entries. Throws EmptyTable when the grand total is zero.
std::vector<PostHocTable> post_hoc_decompose(const ContingencyTable& table);

struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Pearson chi-square test of independence on a 2x2 table, one degree of
// freedom. No continuity correction unless yates is set. A degenerate
// marginal (empty row or column) yields (0, 1).
Chi2Result chi_square_2x2(const PostHocTable& t, bool yates = false);

enum class Direction : uint8_t { OverRepresented, UnderRepresented };
const char* to_label(Direction direction);

struct SignificanceCell {
  OrientationBin orientation = OrientationBin::N;
  LocationBin location = LocationBin::Ears;
  uint64_t a = 0, b = 0, c = 0, d = 0;
  double expected_a = 0.0;
  double chi2 = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  bool valid = false;       // all four expected counts >= min_expected
  bool significant = false; // valid and p_adjusted < alpha
  Direction direction = Direction::OverRepresented;  // sign of a - expected_a
};

struct SignificanceReport {
  std::string corpus_id;
  Hand hand = Hand::Left;
  double alpha = 0.001;
  double min_expected = 5.0;
  bool yates = false;
  uint64_t grand_total = 0;
  // Bonferroni family size: the number of valid cells of this one table.
  int number_of_tests = 0;
  std::vector<SignificanceCell> cells;  // all 56, canonical row-major order
};

// Decomposes, tests every cell, and applies the Bonferroni correction over
// the valid cells of this table only. Cells whose expected counts fall below
// min_expected are reported as invalid and are never significant. Throws
// EmptyTable when the grand total is zero.
SignificanceReport significance_map(const ContingencyTable& table, double alpha,
                                    double min_expected, bool yates = false);

}  // namespace tabori
