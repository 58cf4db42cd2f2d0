#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "regdev/dataset.hpp"
#include "regdev/error.hpp"

namespace regdev {

inline constexpr double kVarianceFloor = 1e-9;

struct GaussianEstimate {
  double mean = 0.0;
  double variance = kVarianceFloor;

  bool operator==(const GaussianEstimate&) const = default;
};

/// Naive Bayes with Gaussian numeric conditionals and add-one smoothing on the
/// class priors and nominal label frequencies.
///
/// A class with no training records has no defined Gaussian, so its
/// likelihood is taken as zero: its posterior is 0 on every record.
struct NBModel {
  std::vector<AttributeKind> kinds;
  std::vector<std::size_t> class_counts;
  std::vector<double> priors;                                 // [class]
  std::vector<std::vector<GaussianEstimate>> gaussians;       // [class][attribute], numeric attributes
  std::vector<std::vector<std::vector<double>>> frequencies;  // [class][attribute][label], nominal attributes

  std::size_t num_classes() const { return priors.size(); }

  bool operator==(const NBModel&) const = default;
};

inline NBModel fit_nb(const LabeledDataset& ds, std::span<const std::size_t> indices) {
  if (indices.empty()) throw DataError("naive Bayes needs at least one training record");
  const std::size_t K = ds.num_classes();
  const std::size_t A = ds.schema().size();

  NBModel m;
  m.kinds.reserve(A);
  for (const auto& a : ds.schema()) m.kinds.push_back(a.kind);
  m.class_counts.assign(K, 0);
  m.gaussians.assign(K, std::vector<GaussianEstimate>(A));
  m.frequencies.assign(K, std::vector<std::vector<double>>(A));

  std::vector<std::vector<double>> sums(K, std::vector<double>(A, 0.0));
  std::vector<std::vector<std::vector<double>>> label_counts(K, std::vector<std::vector<double>>(A));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < A; ++j) {
      if (ds.schema()[j].is_nominal()) label_counts[k][j].assign(ds.schema()[j].labels.size(), 0.0);
    }
  }
  for (auto i : indices) {
    const auto& r = ds[i];
    if (!r.label) throw DataError("naive Bayes training record has no class label");
    const auto k = *r.label;
    ++m.class_counts[k];
    for (std::size_t j = 0; j < A; ++j) {
      if (m.kinds[j] == AttributeKind::numeric) {
        sums[k][j] += r.values[j];
      } else {
        label_counts[k][j][static_cast<std::size_t>(r.values[j])] += 1.0;
      }
    }
  }

  const double n = static_cast<double>(indices.size());
  m.priors.resize(K);
  for (std::size_t k = 0; k < K; ++k) m.priors[k] = (static_cast<double>(m.class_counts[k]) + 1.0) / (n + static_cast<double>(K));

  // Two-pass variance around the class mean.
  std::vector<std::vector<double>> squares(K, std::vector<double>(A, 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < A; ++j) {
      if (m.class_counts[k] > 0) m.gaussians[k][j].mean = sums[k][j] / static_cast<double>(m.class_counts[k]);
    }
  }
  for (auto i : indices) {
    const auto& r = ds[i];
    const auto k = *r.label;
    for (std::size_t j = 0; j < A; ++j) {
      if (m.kinds[j] != AttributeKind::numeric) continue;
      const double d = r.values[j] - m.gaussians[k][j].mean;
      squares[k][j] += d * d;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < A; ++j) {
      if (m.kinds[j] == AttributeKind::numeric) {
        const double var = m.class_counts[k] > 0 ? squares[k][j] / static_cast<double>(m.class_counts[k]) : 0.0;
        m.gaussians[k][j].variance = std::max(var, kVarianceFloor);
      } else {
        const auto L = label_counts[k][j].size();
        auto& freq = m.frequencies[k][j];
        freq.resize(L);
        for (std::size_t l = 0; l < L; ++l) {
          freq[l] = (label_counts[k][j][l] + 1.0) / (static_cast<double>(m.class_counts[k]) + static_cast<double>(L));
        }
      }
    }
  }
  return m;
}

inline NBModel fit_nb(const LabeledDataset& ds) {
  std::vector<std::size_t> all(ds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return fit_nb(ds, all);
}

/// Normalized posterior over classes, computed in log space.
inline std::vector<double> predict_nb(const NBModel& m, const Record& rec) {
  const std::size_t K = m.num_classes();
  if (rec.values.size() != m.kinds.size()) throw DataError("record does not match the naive Bayes schema");

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_post(K, kNegInf);
  for (std::size_t k = 0; k < K; ++k) {
    if (m.class_counts[k] == 0) continue;
    double lp = std::log(m.priors[k]);
    for (std::size_t j = 0; j < m.kinds.size(); ++j) {
      const double x = rec.values[j];
      if (m.kinds[j] == AttributeKind::numeric) {
        const auto& g = m.gaussians[k][j];
        const double d = x - g.mean;
        lp += -0.5 * std::log(2.0 * std::numbers::pi * g.variance) - d * d / (2.0 * g.variance);
      } else {
        const auto& freq = m.frequencies[k][j];
        const auto l = static_cast<std::size_t>(x);
        // Labels outside the training label set get the smoothed zero-count mass.
        lp += std::log(l < freq.size() ? freq[l] : 1.0 / (static_cast<double>(m.class_counts[k]) + static_cast<double>(freq.size())));
      }
    }
    log_post[k] = lp;
  }

  const double top = *std::max_element(log_post.begin(), log_post.end());
  std::vector<double> post(K, 0.0);
  if (top == kNegInf) return post;  // unreachable for fitted models
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    post[k] = log_post[k] == kNegInf ? 0.0 : std::exp(log_post[k] - top);
    sum += post[k];
  }
  for (auto& p : post) p /= sum;
  return post;
}

}  // namespace regdev
