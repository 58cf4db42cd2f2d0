#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/random.hpp"

namespace regdev {

using Fold = std::vector<std::size_t>;

/// Stratified k-fold assignment. Records are grouped by class (class index
/// order), each group is shuffled with the seeded generator, and the
/// concatenation is dealt round-robin over the folds. Fold sizes and the
/// per-class count in each fold therefore differ by at most one.
/// Indices inside each fold are ascending.
inline std::vector<Fold> stratified_kfold(const LabeledDataset& ds, std::span<const std::size_t> indices, std::size_t k,
                                          std::uint64_t seed) {
  if (k < 2) throw DataError("cross-validation needs at least 2 folds");
  if (k > indices.size()) {
    throw DataError("cannot make " + std::to_string(k) + " folds from " + std::to_string(indices.size()) + " records");
  }
  std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
  for (auto i : indices) {
    const auto& r = ds[i];
    if (!r.label) throw DataError("stratified folds need labeled records");
    by_class[*r.label].push_back(i);
  }

  Rng rng(seed);
  std::vector<Fold> folds(k);
  std::size_t dealt = 0;
  for (auto& group : by_class) {
    rng.shuffle(std::span<std::size_t>(group));
    for (auto i : group) folds[dealt++ % k].push_back(i);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

inline std::vector<Fold> stratified_kfold(const LabeledDataset& ds, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> all(ds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return stratified_kfold(ds, all, k, seed);
}

/// All indices of `indices` not in fold `held_out`.
inline std::vector<std::size_t> complement(std::span<const Fold> folds, std::size_t held_out) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f != held_out) out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace regdev
