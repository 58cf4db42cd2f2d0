#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/impurity.hpp"
#include "regdev/tree.hpp"

namespace regdev {

/// Gain-ratio tree with optional error-based pruning (C4.5 style).
struct J48Params {
  std::size_t min_leaf_instances = 2;
  double confidence = 0.25;
  bool pruned = true;

  void validate() const {
    if (min_leaf_instances < 1) throw DataError("min_leaf_instances must be >= 1");
    if (!(confidence > 0 && confidence <= 0.5)) throw DataError("confidence must lie in (0, 0.5]");
  }

  bool operator==(const J48Params&) const = default;
};

/// Upper confidence bound on the error count of a node that misclassifies
/// `errors` of `n` training records: n times the upper limit of the normal
/// approximation (Wilson score form) to the binomial error rate, with
/// z the (1 - confidence) quantile of the standard normal.
inline double pessimistic_errors(double n, double errors, double confidence) {
  if (n <= 0) return 0.0;
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - confidence);
  const double f = errors / n;
  const double z2 = z * z;
  const double spread = std::sqrt(std::max(0.0, f / n - f * f / n + z2 / (4.0 * n * n)));
  const double upper = (f + z2 / (2.0 * n) + z * spread) / (1.0 + z2 / n);
  return upper * n;
}

namespace detail {

struct J48Grower {
  const LabeledDataset& ds;
  const J48Params& p;

  Node grow(std::span<const std::size_t> indices) const {
    Node node;
    node.distribution = class_counts(ds, indices);
    node.instances = static_cast<double>(indices.size());
    if (node.distribution.is_pure() || indices.size() < 2 * p.min_leaf_instances) return node;

    const auto candidates = node_candidates(ds, indices, node.distribution, p.min_leaf_instances);
    if (candidates.empty()) return node;

    // Only candidates whose gain reaches the mean gain compete on gain ratio.
    double mean_gain = 0.0;
    for (const auto& c : candidates) mean_gain += c.gain;
    mean_gain /= static_cast<double>(candidates.size());

    const SplitCandidate* best = nullptr;
    double best_ratio = 0.0;
    for (const auto& c : candidates) {
      if (c.gain <= kTieTolerance || c.gain < mean_gain - kTieTolerance) continue;
      if (c.split_info <= kMinSplitInfo) continue;
      const double ratio = c.gain / c.split_info;
      if (!best || ratio > best_ratio + kTieTolerance) {
        best = &c;
        best_ratio = ratio;
      }
    }
    if (!best) return node;

    node.split = best->split;
    const auto parts = partition(ds, indices, best->split);
    for (const auto& part : parts) {
      if (part.empty()) {
        Node empty;
        empty.distribution = node.distribution;
        node.children.push_back(std::move(empty));
      } else {
        node.children.push_back(grow(part));
      }
    }
    return node;
  }
};

struct PessimisticPruner {
  const LabeledDataset& ds;
  double confidence;

  // Returns the pessimistic error estimate of the (possibly pruned) subtree.
  double prune(Node& node, std::span<const std::size_t> indices) const {
    const auto counts = class_counts(ds, indices);
    const double n = counts.total();

    if (node.is_leaf()) {
      const auto predicted = node.distribution.majority();
      return pessimistic_errors(n, n - counts.counts[predicted], confidence);
    }

    const auto parts = partition(ds, indices, node);
    double subtree = 0.0;
    for (std::size_t b = 0; b < node.children.size(); ++b) subtree += prune(node.children[b], parts[b]);

    const double as_leaf = pessimistic_errors(n, n - counts.counts[counts.majority()], confidence);
    if (as_leaf <= subtree + 1e-9) {
      node.make_leaf();
      if (n > 0) node.distribution = counts;
      node.instances = n;
      return as_leaf;
    }
    return subtree;
  }
};

}  // namespace detail

/// Bottom-up error-based pruning: a subtree becomes a leaf when the leaf's
/// pessimistic error on the node's training records is no larger than the
/// sum over the subtree's leaves. No subtree raising.
inline Tree prune_pessimistic(Tree tree, const LabeledDataset& ds, double confidence) {
  if (!(confidence > 0 && confidence <= 0.5)) throw DataError("confidence must lie in (0, 0.5]");
  const auto idx = all_indices(ds);
  detail::PessimisticPruner{ds, confidence}.prune(tree.root, idx);
  return tree;
}

inline Tree train_j48(const LabeledDataset& ds, const J48Params& p = {}) {
  p.validate();
  if (ds.empty()) throw DataError("cannot train on an empty dataset");
  ds.require_labeled();
  const auto idx = all_indices(ds);
  Tree tree{ds.header(), detail::J48Grower{ds, p}.grow(idx)};
  if (p.pruned) tree = prune_pessimistic(std::move(tree), ds, p.confidence);
  return tree;
}

}  // namespace regdev
