#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/folds.hpp"
#include "regdev/learner.hpp"
#include "regdev/tree.hpp"

namespace regdev {

/// Rows are actual classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t num_classes) : k_(num_classes), cells_(num_classes * num_classes, 0) {}

  static ConfusionMatrix from_rows(const std::vector<std::vector<std::size_t>>& rows) {
    ConfusionMatrix cm(rows.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (rows[a].size() != rows.size()) throw DataError("confusion matrix must be square");
      for (std::size_t p = 0; p < rows.size(); ++p) cm.cells_[a * cm.k_ + p] = rows[a][p];
    }
    return cm;
  }

  std::size_t size() const { return k_; }
  std::size_t at(std::size_t actual, std::size_t predicted) const { return cells_.at(actual * k_ + predicted); }
  void add(std::size_t actual, std::size_t predicted, std::size_t count = 1) {
    if (actual >= k_ || predicted >= k_) throw DataError("class index outside the confusion matrix");
    cells_[actual * k_ + predicted] += count;
  }

  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : cells_) t += c;
    return t;
  }
  std::size_t trace() const {
    std::size_t t = 0;
    for (std::size_t k = 0; k < k_; ++k) t += at(k, k);
    return t;
  }
  std::size_t row_total(std::size_t actual) const {
    std::size_t t = 0;
    for (std::size_t p = 0; p < k_; ++p) t += at(actual, p);
    return t;
  }
  std::size_t column_total(std::size_t predicted) const {
    std::size_t t = 0;
    for (std::size_t a = 0; a < k_; ++a) t += at(a, predicted);
    return t;
  }

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::size_t> cells_;
};

/// Percent of records on the diagonal.
inline double accuracy(const ConfusionMatrix& cm) {
  const auto n = cm.total();
  if (n == 0) throw DataError("accuracy of an empty confusion matrix");
  return 100.0 * static_cast<double>(cm.trace()) / static_cast<double>(n);
}

/// Cohen's kappa. Defined as 0 when chance agreement is 1 (a single class
/// on both margins).
inline double kappa(const ConfusionMatrix& cm) {
  const auto n = cm.total();
  if (n == 0) throw DataError("kappa of an empty confusion matrix");
  // Chance agreement compared exactly in integers before dividing.
  unsigned long long chance = 0;
  for (std::size_t k = 0; k < cm.size(); ++k) {
    chance += static_cast<unsigned long long>(cm.row_total(k)) * cm.column_total(k);
  }
  const auto n2 = static_cast<unsigned long long>(n) * n;
  if (chance == n2) return 0.0;
  const double po = static_cast<double>(cm.trace()) / static_cast<double>(n);
  const double pe = static_cast<double>(chance) / static_cast<double>(n2);
  return (po - pe) / (1.0 - pe);
}

struct ScoredPrediction {
  std::vector<double> probabilities;
  std::size_t actual = 0;
};

struct ErrorSummary {
  double mae = 0.0;
  double rmse = 0.0;
};

/// Mean absolute and root mean squared difference between predicted class
/// probabilities and the one-hot actual class, over all N x K components.
inline ErrorSummary mae_rmse(std::span<const ScoredPrediction> predictions) {
  if (predictions.empty()) throw DataError("no predictions to score");
  const auto K = predictions.front().probabilities.size();
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (const auto& p : predictions) {
    if (p.probabilities.size() != K || p.actual >= K) throw DataError("prediction vector length mismatch");
    for (std::size_t k = 0; k < K; ++k) {
      const double d = p.probabilities[k] - (k == p.actual ? 1.0 : 0.0);
      abs_sum += std::abs(d);
      sq_sum += d * d;
    }
  }
  const double count = static_cast<double>(predictions.size() * K);
  return {abs_sum / count, std::sqrt(sq_sum / count)};
}

struct EvalReport {
  std::string learner;
  std::vector<std::string> class_labels;
  double accuracy = 0.0;  // percent
  double kappa = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
  ConfusionMatrix confusion;
  std::size_t folds = 0;
  std::uint64_t seed = 0;

  bool operator==(const EvalReport&) const = default;
};

inline EvalReport make_report(std::string learner, const Header& header, const ConfusionMatrix& cm,
                              std::span<const ScoredPrediction> scored, std::size_t folds, std::uint64_t seed) {
  EvalReport r;
  r.learner = std::move(learner);
  r.class_labels = header.class_attribute.labels;
  r.confusion = cm;
  r.accuracy = accuracy(cm);
  r.kappa = kappa(cm);
  const auto err = mae_rmse(scored);
  r.mae = err.mae;
  r.rmse = err.rmse;
  r.folds = folds;
  r.seed = seed;
  return r;
}

/// Stratified k-fold cross-validation: train on k-1 folds, predict the held
/// out fold, and pool every prediction into one report. Folds are processed
/// in index order.
inline EvalReport cross_validate(const Learner& learner, const LabeledDataset& ds, std::size_t k, std::uint64_t seed) {
  ds.require_labeled();
  const auto folds = stratified_kfold(ds, k, seed);
  ConfusionMatrix cm(ds.num_classes());
  std::vector<ScoredPrediction> scored;
  scored.reserve(ds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train_idx = complement(folds, f);
    const auto tree = learner.train(ds.subset(train_idx));
    for (auto i : folds[f]) {
      const auto& rec = ds[i];
      auto p = predict(tree, rec);
      cm.add(*rec.label, p.label);
      scored.push_back({std::move(p.probabilities), *rec.label});
    }
  }
  return make_report(learner.name(), ds.header(), cm, scored, k, seed);
}

/// Cross-validation reports for several learners on the same folds.
struct Comparison {
  std::vector<EvalReport> reports;
  std::size_t best = 0;  // highest accuracy, first on ties

  const EvalReport& best_report() const { return reports.at(best); }
};

inline Comparison compare_learners(const LabeledDataset& ds, std::size_t k, std::uint64_t seed,
                                   std::span<const Learner> learners) {
  if (learners.empty()) throw DataError("no learners to compare");
  Comparison c;
  for (const auto& l : learners) c.reports.push_back(cross_validate(l, ds, k, seed));
  for (std::size_t i = 1; i < c.reports.size(); ++i) {
    if (c.reports[i].accuracy > c.reports[c.best].accuracy) c.best = i;
  }
  return c;
}

}  // namespace regdev
