#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "tabori/contingency.hpp"
#include "tabori/posthoc.hpp"

namespace tabori {

struct FrequencyScope {
  std::string corpus_id;
  std::optional<std::string> video_id;
  std::optional<Hand> hand;
};

// Relative frequencies of the 56 (orientation, location) cells; sums to 1
// whenever the source total is positive.
struct FrequencyMatrix {
  FrequencyScope scope;
  uint64_t total = 0;
  std::array<std::array<double, kLocationBinCount>, kOrientationBinCount> values{};

  double sum() const;
};

// Each cell divided by the grand total. Throws EmptyTable on an empty table.
FrequencyMatrix relative_frequencies(const ContingencyTable& table);
FrequencyMatrix relative_frequencies(const ContingencyTable& table, FrequencyScope scope);

struct CellId {
  OrientationBin orientation = OrientationBin::N;
  LocationBin location = LocationBin::Ears;

  auto operator<=>(const CellId&) const = default;
};

// Set partition of the over-represented significant cells of two corpora for
// one hand. shared, only_a and only_b are pairwise disjoint and their union
// is the union of both inputs' significant sets.
struct LanguageComparison {
  std::string corpus_a;
  std::string corpus_b;
  Hand hand = Hand::Left;
  double alpha = 0.001;
  std::vector<CellId> shared;
  std::vector<CellId> only_a;
  std::vector<CellId> only_b;
};

// Throws HandMismatch / AlphaMismatch when the two reports were not produced
// for the same hand at the same significance level.
LanguageComparison compare_languages(const SignificanceReport& a, const SignificanceReport& b);

}  // namespace tabori
