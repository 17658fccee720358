#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "tabori/phonology.hpp"

namespace tabori {

// Orientation x location counts for one (corpus, hand). Merging is an
// element-wise sum, so partial tables built by parallel workers combine in
// any order and in any grouping.
struct ContingencyTable {
  std::string corpus_id;
  Hand hand = Hand::Left;
  std::array<std::array<uint64_t, kLocationBinCount>, kOrientationBinCount> counts{};

  void add(OrientationBin o, LocationBin l, uint64_t n = 1);
  void merge(const ContingencyTable& other);  // corpus and hand must match

  uint64_t at(OrientationBin o, LocationBin l) const;
  uint64_t row_total(OrientationBin o) const;
  uint64_t column_total(LocationBin l) const;
  uint64_t grand_total() const;

  bool operator==(const ContingencyTable& other) const = default;
};

struct TableKey {
  std::string corpus_id;
  Hand hand = Hand::Left;

  auto operator<=>(const TableKey&) const = default;
};

using TableMap = std::map<TableKey, ContingencyTable>;

// Counts every annotation into its (corpus, hand) table.
TableMap accumulate(std::span<const PhonologicalAnnotation> annotations);

// Element-wise merge of whole maps; missing keys are inserted.
void merge_tables(TableMap& into, const TableMap& from);

}  // namespace tabori
