#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/tree.hpp"

namespace regdev {

// Two gains closer than this are treated as tied, and the earlier candidate
// (smaller attribute index, then smaller threshold) is kept.
inline constexpr double kTieTolerance = 1e-12;

// Gain-ratio denominators at or below this mark a degenerate split.
inline constexpr double kMinSplitInfo = 1e-10;

/// Shannon entropy in bits; 0 log 0 = 0.
inline double entropy(std::span<const double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (!(total > 0)) throw DomainError("entropy of an empty distribution");
  double h = 0.0;
  for (double c : counts) {
    if (c > 0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

inline double entropy(const ClassDistribution& d) { return entropy(d.counts); }

inline std::vector<std::size_t> all_indices(const LabeledDataset& ds) {
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

inline ClassDistribution class_counts(const LabeledDataset& ds, std::span<const std::size_t> indices) {
  ClassDistribution d(ds.num_classes());
  for (auto i : indices) {
    const auto& r = ds[i];
    if (!r.label) throw DataError("record " + std::to_string(i) + " has no class label");
    d.add(*r.label);
  }
  return d;
}

/// Class counts per branch of `split`.
inline std::vector<ClassDistribution> branch_counts(const LabeledDataset& ds, std::span<const std::size_t> indices,
                                                    const Split& split) {
  std::vector<ClassDistribution> out(split.branches(), ClassDistribution(ds.num_classes()));
  for (auto i : indices) {
    const auto& r = ds[i];
    if (!r.label) throw DataError("record " + std::to_string(i) + " has no class label");
    const auto b = split.branch(r);
    if (b >= out.size()) throw DataError("record value outside the split's branches");
    out[b].add(*r.label);
  }
  return out;
}

inline double information_gain(const ClassDistribution& parent, std::span<const ClassDistribution> branches) {
  const double n = parent.total();
  double remainder = 0.0;
  for (const auto& b : branches) {
    const double nb = b.total();
    if (nb > 0) remainder += nb / n * entropy(b);
  }
  return entropy(parent) - remainder;
}

inline double split_info(std::span<const ClassDistribution> branches) {
  double n = 0.0;
  for (const auto& b : branches) n += b.total();
  double h = 0.0;
  for (const auto& b : branches) {
    const double nb = b.total();
    if (nb > 0) h -= nb / n * std::log2(nb / n);
  }
  return h;
}

/// nullopt marks a degenerate split (split information ~ 0): inadmissible.
inline std::optional<double> gain_ratio(const ClassDistribution& parent, std::span<const ClassDistribution> branches) {
  const double si = split_info(branches);
  if (si <= kMinSplitInfo) return std::nullopt;
  return information_gain(parent, branches) / si;
}

inline double information_gain(const LabeledDataset& ds, const Split& split) {
  if (ds.empty()) throw DataError("information gain of an empty dataset");
  const auto idx = all_indices(ds);
  const auto branches = branch_counts(ds, idx, split);
  return information_gain(class_counts(ds, idx), branches);
}

inline double split_info(const LabeledDataset& ds, const Split& split) {
  if (ds.empty()) throw DataError("split information of an empty dataset");
  return split_info(branch_counts(ds, all_indices(ds), split));
}

inline std::optional<double> gain_ratio(const LabeledDataset& ds, const Split& split) {
  if (ds.empty()) throw DataError("gain ratio of an empty dataset");
  const auto idx = all_indices(ds);
  return gain_ratio(class_counts(ds, idx), branch_counts(ds, idx, split));
}

struct ThresholdChoice {
  double threshold = 0.0;
  double gain = 0.0;
};

/// Best binary cut of a numeric attribute by information gain over `indices`.
/// Candidates are midpoints between adjacent distinct values that leave at
/// least `min_leaf` records on each side; ties keep the smallest threshold.
inline std::optional<ThresholdChoice> best_numeric_threshold(const LabeledDataset& ds,
                                                             std::span<const std::size_t> indices,
                                                             std::size_t attribute, std::size_t min_leaf = 1) {
  if (!ds.schema().at(attribute).is_numeric()) throw DataError("threshold search on a nominal attribute");
  if (indices.size() < 2) return std::nullopt;
  min_leaf = std::max<std::size_t>(min_leaf, 1);

  std::vector<std::size_t> order(indices.begin(), indices.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ds[a].values[attribute] < ds[b].values[attribute]; });

  const auto parent = class_counts(ds, order);
  const double parent_entropy = entropy(parent);
  const double n = static_cast<double>(order.size());
  std::vector<ClassDistribution> sides{ClassDistribution(ds.num_classes()), parent};

  std::optional<ThresholdChoice> best;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const auto k = *ds[order[i]].label;
    sides[0].add(k);
    sides[1].add(k, -1.0);
    const double lo = ds[order[i]].values[attribute];
    const double hi = ds[order[i + 1]].values[attribute];
    if (!(lo < hi)) continue;
    const std::size_t left = i + 1;
    if (left < min_leaf || order.size() - left < min_leaf) continue;

    double remainder = 0.0;
    for (const auto& s : sides) remainder += s.total() / n * entropy(s);
    const double gain = parent_entropy - remainder;
    if (!best || gain > best->gain + kTieTolerance) {
      double theta = lo + (hi - lo) / 2.0;
      if (!(theta < hi)) theta = lo;
      best = ThresholdChoice{theta, gain};
    }
  }
  return best;
}

inline std::optional<ThresholdChoice> best_numeric_threshold(const LabeledDataset& ds, std::size_t attribute) {
  if (ds.empty()) return std::nullopt;
  return best_numeric_threshold(ds, all_indices(ds), attribute, 1);
}

/// One admissible-or-not split candidate at a node.
struct SplitCandidate {
  Split split;
  std::vector<ClassDistribution> branches;
  double gain = 0.0;
  double split_info = 0.0;
};

/// For every attribute, the candidate split at a node: the best-gain
/// threshold for numeric attributes, the label-wise split for nominal ones.
/// Candidates that do not send at least `min_leaf` records to two or more
/// branches are dropped.
inline std::vector<SplitCandidate> node_candidates(const LabeledDataset& ds, std::span<const std::size_t> indices,
                                                   const ClassDistribution& parent, std::size_t min_leaf) {
  std::vector<SplitCandidate> out;
  for (std::size_t a = 0; a < ds.schema().size(); ++a) {
    Split split;
    if (ds.schema()[a].is_numeric()) {
      const auto t = best_numeric_threshold(ds, indices, a, min_leaf);
      if (!t) continue;
      split = Split::numeric(a, t->threshold);
    } else {
      split = Split::nominal(a, ds.schema()[a].labels.size());
    }
    auto branches = branch_counts(ds, indices, split);
    const auto big = std::count_if(branches.begin(), branches.end(),
                                   [&](const ClassDistribution& b) { return b.total() >= static_cast<double>(min_leaf); });
    if (big < 2) continue;
    SplitCandidate c{split, std::move(branches), 0.0, 0.0};
    c.gain = information_gain(parent, c.branches);
    c.split_info = split_info(c.branches);
    out.push_back(std::move(c));
  }
  return out;
}

/// Partition of `indices` by the children of `n`, following predict's routing.
inline std::vector<std::vector<std::size_t>> partition(const LabeledDataset& ds, std::span<const std::size_t> indices,
                                                       const Node& n) {
  std::vector<std::vector<std::size_t>> parts(n.children.size());
  for (auto i : indices) parts[route(n, ds[i])].push_back(i);
  return parts;
}

/// Partition by split outcome (used while growing, before children exist).
inline std::vector<std::vector<std::size_t>> partition(const LabeledDataset& ds, std::span<const std::size_t> indices,
                                                       const Split& split) {
  std::vector<std::vector<std::size_t>> parts(split.branches());
  for (auto i : indices) parts.at(split.branch(ds[i])).push_back(i);
  return parts;
}

}  // namespace regdev
