#include "tabori/posthoc.hpp"

#include <cmath>

#include "tabori/chi2.hpp"
#include "tabori/errors.hpp"

namespace tabori {

const char* to_label(Direction direction) {
  return direction == Direction::OverRepresented ? "over" : "under";
}

std::vector<PostHocTable> post_hoc_decompose(const ContingencyTable& table) {
  const uint64_t n = table.grand_total();
  if (n == 0) {
    throw EmptyTable("cannot decompose an empty contingency table");
  }
  std::vector<PostHocTable> out;
  out.reserve(static_cast<size_t>(kOrientationBinCount) * kLocationBinCount);
  for (OrientationBin o : kOrientationBins) {
    const uint64_t row = table.row_total(o);
    for (LocationBin l : kLocationBins) {
      const uint64_t col = table.column_total(l);
      PostHocTable t;
      t.orientation = o;
      t.location = l;
      t.a = table.at(o, l);
      t.b = row - t.a;
      t.c = col - t.a;
      t.d = n - row - col + t.a;
      out.push_back(t);
    }
  }
  return out;
}

Chi2Result chi_square_2x2(const PostHocTable& t, bool yates) {
  const double a = static_cast<double>(t.a);
  const double b = static_cast<double>(t.b);
  const double c = static_cast<double>(t.c);
  const double d = static_cast<double>(t.d);
  const double n = a + b + c + d;
  const double denom = (a + b) * (c + d) * (a + c) * (b + d);
  if (n == 0.0 || denom == 0.0) {
    return {0.0, 1.0};  // a degenerate marginal carries no evidence
  }
  double numerator_root = a * d - b * c;
  if (yates) {
    numerator_root = std::max(0.0, std::fabs(numerator_root) - n / 2.0);
  }
  const double statistic = n * numerator_root * numerator_root / denom;
  return {statistic, chi_square_upper_tail(statistic, 1)};
}

SignificanceReport significance_map(const ContingencyTable& table, double alpha,
                                    double min_expected, bool yates) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must be in (0,1)");
  }
  if (!(min_expected >= 0.0)) {
    throw ConfigError("min_expected must be >= 0");
  }

  SignificanceReport report;
  report.corpus_id = table.corpus_id;
  report.hand = table.hand;
  report.alpha = alpha;
  report.min_expected = min_expected;
  report.yates = yates;
  report.grand_total = table.grand_total();

  const std::vector<PostHocTable> tables = post_hoc_decompose(table);
  const double n = static_cast<double>(report.grand_total);

  report.cells.reserve(tables.size());
  for (const PostHocTable& t : tables) {
    SignificanceCell cell;
    cell.orientation = t.orientation;
    cell.location = t.location;
    cell.a = t.a;
    cell.b = t.b;
    cell.c = t.c;
    cell.d = t.d;

    const double row = static_cast<double>(t.a + t.b);
    const double col = static_cast<double>(t.a + t.c);
    cell.expected_a = row * col / n;
    const double expected_b = row * (n - col) / n;
    const double expected_c = (n - row) * col / n;
    const double expected_d = (n - row) * (n - col) / n;
    cell.valid = cell.expected_a >= min_expected && expected_b >= min_expected &&
                 expected_c >= min_expected && expected_d >= min_expected;
    if (cell.valid) ++report.number_of_tests;

    const Chi2Result r = chi_square_2x2(t, yates);
    cell.chi2 = r.statistic;
    cell.p_raw = r.p_value;
    cell.direction = static_cast<double>(t.a) >= cell.expected_a
                         ? Direction::OverRepresented
                         : Direction::UnderRepresented;
    report.cells.push_back(cell);
  }

  for (SignificanceCell& cell : report.cells) {
    cell.p_adjusted = std::min(1.0, cell.p_raw * report.number_of_tests);
    cell.significant = cell.valid && cell.p_adjusted < alpha;
  }
  return report;
}

}  // namespace tabori
