#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/folds.hpp"
#include "regdev/impurity.hpp"
#include "regdev/naive_bayes.hpp"
#include "regdev/tree.hpp"

namespace regdev {

/// Decision tree with naive Bayes leaves, split only when the cross-validated
/// naive Bayes accuracy improves enough.
struct NBTreeParams {
  std::size_t min_split_instances = 30;
  double min_relative_error_reduction = 0.05;
  std::size_t utility_folds = 5;

  void validate() const {
    if (min_split_instances < 1) throw DataError("min_split_instances must be positive");
    if (!(min_relative_error_reduction > 0)) throw DataError("min_relative_error_reduction must be positive");
    if (utility_folds < 2) throw DataError("utility_folds must be >= 2");
  }

  bool operator==(const NBTreeParams&) const = default;
};

/// Stratified cross-validated accuracy (a fraction) of naive Bayes on the
/// records `indices`, with fold seed 0. Uses min(folds, n) folds; fewer than
/// two records cannot be cross-validated and score 0.
inline double nb_cv_accuracy(const LabeledDataset& ds, std::span<const std::size_t> indices, std::size_t folds) {
  if (indices.size() < 2) return 0.0;
  const auto k = std::min(folds, indices.size());
  const auto parts = stratified_kfold(ds, indices, k, 0);
  std::size_t correct = 0;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    const auto train = complement(parts, f);
    const auto model = fit_nb(ds, train);
    for (auto i : parts[f]) correct += argmax(predict_nb(model, ds[i])) == *ds[i].label;
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

namespace detail {

struct NBTreeGrower {
  const LabeledDataset& ds;
  const NBTreeParams& p;

  Node leaf(std::span<const std::size_t> indices) const {
    Node node;
    node.distribution = class_counts(ds, indices);
    node.instances = static_cast<double>(indices.size());
    node.nb = fit_nb(ds, indices);
    return node;
  }

  Node grow(std::span<const std::size_t> indices) const {
    Node node = leaf(indices);
    if (indices.size() < p.min_split_instances || node.distribution.is_pure()) return node;

    const double n = static_cast<double>(indices.size());
    const double base_error = 1.0 - nb_cv_accuracy(ds, indices, p.utility_folds);
    if (base_error <= 0) return node;

    std::optional<Split> best;
    double best_utility = 0.0;
    for (std::size_t a = 0; a < ds.schema().size(); ++a) {
      Split split;
      if (ds.schema()[a].is_numeric()) {
        const auto t = best_numeric_threshold(ds, indices, a, 1);
        if (!t) continue;
        split = Split::numeric(a, t->threshold);
      } else {
        split = Split::nominal(a, ds.schema()[a].labels.size());
      }
      const auto parts = partition(ds, indices, split);
      std::size_t non_empty = 0;
      double utility = 0.0;
      for (const auto& part : parts) {
        if (part.empty()) continue;
        ++non_empty;
        utility += static_cast<double>(part.size()) / n * nb_cv_accuracy(ds, part, p.utility_folds);
      }
      if (non_empty < 2) continue;
      if (!best || utility > best_utility + kTieTolerance) {
        best = split;
        best_utility = utility;
      }
    }
    if (!best) return node;

    const double split_error = 1.0 - best_utility;
    if ((base_error - split_error) / base_error < p.min_relative_error_reduction) return node;

    node.split = best;
    const auto parts = partition(ds, indices, *best);
    for (const auto& part : parts) {
      if (part.empty()) {
        Node empty;
        empty.distribution = node.distribution;
        empty.nb = node.nb;
        node.children.push_back(std::move(empty));
      } else {
        node.children.push_back(grow(part));
      }
    }
    node.nb.reset();
    return node;
  }
};

}  // namespace detail

/// Each node's utility is the cross-validated naive Bayes accuracy on its
/// records; a split's utility is the record-weighted mean over its children.
/// A node splits only if it holds at least min_split_instances records and
/// the best split cuts the error by at least min_relative_error_reduction
/// (relative). Leaves carry a naive Bayes model fit on their own records.
inline Tree train_nbtree(const LabeledDataset& ds, const NBTreeParams& p = {}) {
  p.validate();
  if (ds.empty()) throw DataError("cannot train on an empty dataset");
  ds.require_labeled();
  const auto idx = all_indices(ds);
  return Tree{ds.header(), detail::NBTreeGrower{ds, p}.grow(idx)};
}

}  // namespace regdev
