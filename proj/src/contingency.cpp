#include "tabori/contingency.hpp"

#include "tabori/errors.hpp"

namespace tabori {

void ContingencyTable::add(OrientationBin o, LocationBin l, uint64_t n) {
  counts[static_cast<size_t>(o)][static_cast<size_t>(l)] += n;
}

void ContingencyTable::merge(const ContingencyTable& other) {
  if (corpus_id != other.corpus_id || hand != other.hand) {
    throw HandMismatch("cannot merge tables for different (corpus, hand) pairs");
  }
  for (size_t o = 0; o < kOrientationBinCount; ++o) {
    for (size_t l = 0; l < kLocationBinCount; ++l) {
      counts[o][l] += other.counts[o][l];
    }
  }
}

uint64_t ContingencyTable::at(OrientationBin o, LocationBin l) const {
  return counts[static_cast<size_t>(o)][static_cast<size_t>(l)];
}

uint64_t ContingencyTable::row_total(OrientationBin o) const {
  uint64_t sum = 0;
  for (uint64_t c : counts[static_cast<size_t>(o)]) sum += c;
  return sum;
}

uint64_t ContingencyTable::column_total(LocationBin l) const {
  uint64_t sum = 0;
  for (const auto& row : counts) sum += row[static_cast<size_t>(l)];
  return sum;
}

uint64_t ContingencyTable::grand_total() const {
  uint64_t sum = 0;
  for (const auto& row : counts) {
    for (uint64_t c : row) sum += c;
  }
  return sum;
}

TableMap accumulate(std::span<const PhonologicalAnnotation> annotations) {
  TableMap tables;
  for (const PhonologicalAnnotation& ann : annotations) {
    TableKey key{ann.corpus_id, ann.hand};
    auto [it, inserted] = tables.try_emplace(key);
    if (inserted) {
      it->second.corpus_id = ann.corpus_id;
      it->second.hand = ann.hand;
    }
    it->second.add(ann.orientation, ann.location);
  }
  return tables;
}

void merge_tables(TableMap& into, const TableMap& from) {
  for (const auto& [key, table] : from) {
    auto [it, inserted] = into.try_emplace(key, table);
    if (!inserted) {
      it->second.merge(table);
    }
  }
}

}  // namespace tabori
