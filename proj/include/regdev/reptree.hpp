#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/folds.hpp"
#include "regdev/impurity.hpp"
#include "regdev/tree.hpp"

namespace regdev {

/// Information-gain tree with reduced-error pruning on a held-out fold.
struct REPTreeParams {
  std::size_t pruning_folds = 3;
  std::uint64_t seed = 1;
  std::size_t min_leaf_instances = 2;
  bool pruned = true;

  void validate() const {
    if (min_leaf_instances < 1) throw DataError("min_leaf_instances must be >= 1");
    if (pruned && pruning_folds < 2) throw DataError("pruning_folds must be >= 2 when pruning");
  }

  bool operator==(const REPTreeParams&) const = default;
};

namespace detail {

struct RepGrower {
  const LabeledDataset& ds;
  std::size_t min_leaf;

  Node grow(std::span<const std::size_t> indices) const {
    Node node;
    node.distribution = class_counts(ds, indices);
    node.instances = static_cast<double>(indices.size());
    if (node.distribution.is_pure() || indices.size() < 2 * min_leaf) return node;

    const auto candidates = node_candidates(ds, indices, node.distribution, min_leaf);
    const SplitCandidate* best = nullptr;
    for (const auto& c : candidates) {
      if (c.gain <= kTieTolerance) continue;
      if (!best || c.gain > best->gain + kTieTolerance) best = &c;
    }
    if (!best) return node;

    node.split = best->split;
    for (const auto& part : partition(ds, indices, best->split)) {
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

inline std::size_t leaf_errors(const Node& leaf, const LabeledDataset& ds, std::span<const std::size_t> indices) {
  std::size_t errors = 0;
  for (auto i : indices) {
    const auto& r = ds[i];
    if (argmax(leaf_probabilities(leaf, r)) != *r.label) ++errors;
  }
  return errors;
}

// Returns the prune-set error count of the (possibly collapsed) subtree.
inline std::size_t reduced_error_prune(Node& node, const LabeledDataset& ds, std::span<const std::size_t> indices) {
  if (node.is_leaf()) return leaf_errors(node, ds, indices);
  const auto parts = partition(ds, indices, node);
  std::size_t subtree = 0;
  for (std::size_t b = 0; b < node.children.size(); ++b) subtree += reduced_error_prune(node.children[b], ds, parts[b]);

  const auto majority = node.distribution.majority();
  std::size_t as_leaf = 0;
  for (auto i : indices) as_leaf += *ds[i].label != majority;
  if (as_leaf <= subtree) {
    node.make_leaf();
    node.nb.reset();
    return as_leaf;
  }
  return subtree;
}

}  // namespace detail

/// Bottom-up: a subtree is replaced by a leaf predicting the node's training
/// majority whenever that does not increase misclassifications on `prune_set`.
inline Tree reduced_error_prune(Tree tree, const LabeledDataset& prune_set) {
  if (prune_set.empty()) throw DataError("reduced-error pruning needs a non-empty pruning set");
  if (!(prune_set.header() == tree.header)) throw DataError("pruning set schema differs from the tree's");
  prune_set.require_labeled();
  const auto idx = all_indices(prune_set);
  detail::reduced_error_prune(tree.root, prune_set, idx);
  return tree;
}

/// Misclassification count of `tree` on `ds`.
inline std::size_t count_errors(const Tree& tree, const LabeledDataset& ds) {
  std::size_t errors = 0;
  for (const auto& r : ds.records()) errors += predict(tree, r).label != *r.label;
  return errors;
}

/// One stratified fold (1/pruning_folds of the records, drawn with `seed`) is
/// held out and the tree grows on the rest; pruned trees then apply
/// reduced-error pruning on the held-out fold. Unpruned trees grow on the same
/// records, so both variants share one grown tree. Unpruned training on fewer
/// than pruning_folds records (or with pruning_folds < 2) grows on everything.
inline Tree train_reptree(const LabeledDataset& ds, const REPTreeParams& p = {}) {
  p.validate();
  if (ds.empty()) throw DataError("cannot train on an empty dataset");
  ds.require_labeled();

  const bool can_hold_out = p.pruning_folds >= 2 && ds.size() >= p.pruning_folds;
  if (!can_hold_out) {
    if (p.pruned) {
      throw DataError("need at least " + std::to_string(p.pruning_folds) + " records to hold out a pruning fold");
    }
    const auto idx = all_indices(ds);
    return Tree{ds.header(), detail::RepGrower{ds, p.min_leaf_instances}.grow(idx)};
  }
  const auto folds = stratified_kfold(ds, p.pruning_folds, p.seed);
  const auto& holdout = folds.front();
  if (holdout.empty()) throw DataError("pruning holdout is empty");
  const auto grow_set = complement(folds, 0);

  Tree tree{ds.header(), detail::RepGrower{ds, p.min_leaf_instances}.grow(grow_set)};
  if (p.pruned) detail::reduced_error_prune(tree.root, ds, holdout);
  return tree;
}

}  // namespace regdev
