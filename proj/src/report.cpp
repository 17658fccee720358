#include "tabori/report.hpp"

#include <algorithm>
#include <set>

#include "tabori/errors.hpp"

namespace tabori {

double FrequencyMatrix::sum() const {
  double s = 0.0;
  for (const auto& row : values) {
    for (double v : row) s += v;
  }
  return s;
}

FrequencyMatrix relative_frequencies(const ContingencyTable& table, FrequencyScope scope) {
  const uint64_t n = table.grand_total();
  if (n == 0) {
    throw EmptyTable("cannot normalize an empty contingency table");
  }
  FrequencyMatrix m;
  m.scope = std::move(scope);
  m.total = n;
  for (size_t o = 0; o < kOrientationBinCount; ++o) {
    for (size_t l = 0; l < kLocationBinCount; ++l) {
      m.values[o][l] = static_cast<double>(table.counts[o][l]) / static_cast<double>(n);
    }
  }
  return m;
}

FrequencyMatrix relative_frequencies(const ContingencyTable& table) {
  return relative_frequencies(table,
                              FrequencyScope{table.corpus_id, std::nullopt, table.hand});
}

namespace {

std::set<CellId> over_represented_significant(const SignificanceReport& report) {
  std::set<CellId> cells;
  for (const SignificanceCell& cell : report.cells) {
    if (cell.significant && cell.direction == Direction::OverRepresented) {
      cells.insert(CellId{cell.orientation, cell.location});
    }
  }
  return cells;
}

}  // namespace

LanguageComparison compare_languages(const SignificanceReport& a,
                                     const SignificanceReport& b) {
  if (a.hand != b.hand) {
    throw HandMismatch("comparison requires significance maps for the same hand");
  }
  if (a.alpha != b.alpha) {
    throw AlphaMismatch("comparison requires significance maps at the same alpha");
  }

  const std::set<CellId> set_a = over_represented_significant(a);
  const std::set<CellId> set_b = over_represented_significant(b);

  LanguageComparison cmp;
  cmp.corpus_a = a.corpus_id;
  cmp.corpus_b = b.corpus_id;
  cmp.hand = a.hand;
  cmp.alpha = a.alpha;
  std::set_intersection(set_a.begin(), set_a.end(), set_b.begin(), set_b.end(),
                        std::back_inserter(cmp.shared));
  std::set_difference(set_a.begin(), set_a.end(), set_b.begin(), set_b.end(),
                      std::back_inserter(cmp.only_a));
  std::set_difference(set_b.begin(), set_b.end(), set_a.begin(), set_a.end(),
                      std::back_inserter(cmp.only_b));
  return cmp;
}

}  // namespace tabori
