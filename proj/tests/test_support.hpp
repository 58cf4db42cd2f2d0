#pragma once

// Generators and independent oracles shared by the test suites. The oracles
// deliberately avoid the library's own split math and routing.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regdev/regdev.hpp"

namespace regdev::testing {

inline Header numeric_header(std::size_t attributes, std::size_t classes) {
  Header h;
  for (std::size_t a = 0; a < attributes; ++a) h.attributes.push_back(Attribute::numeric("x" + std::to_string(a)));
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < classes; ++k) labels.push_back("c" + std::to_string(k));
  h.class_attribute = Attribute::nominal("class", labels);
  return h;
}

/// Random numeric dataset. Values are drawn from `levels` integer levels so
/// duplicate values (and tied thresholds) are common.
inline LabeledDataset random_dataset(Rng& rng, std::size_t n, std::size_t attributes, std::size_t classes,
                                     std::size_t levels = 6) {
  LabeledDataset ds(numeric_header(attributes, classes));
  for (std::size_t i = 0; i < n; ++i) {
    Record r;
    for (std::size_t a = 0; a < attributes; ++a) r.values.push_back(static_cast<double>(rng.below(levels)));
    r.label = static_cast<std::size_t>(rng.below(classes));
    ds.add(std::move(r));
  }
  return ds;
}

/// Class is c0 when x0 <= cut, c1 otherwise; other attributes are noise.
inline LabeledDataset threshold_dataset(Rng& rng, std::size_t n, std::size_t attributes, double cut = 0.5) {
  LabeledDataset ds(numeric_header(attributes, 2));
  for (std::size_t i = 0; i < n; ++i) {
    Record r;
    for (std::size_t a = 0; a < attributes; ++a) r.values.push_back(rng.uniform());
    r.label = r.values[0] <= cut ? 0 : 1;
    ds.add(std::move(r));
  }
  return ds;
}

namespace oracle {

inline double entropy(const std::vector<double>& counts) {
  double n = 0;
  for (double c : counts) n += c;
  double h = 0;
  for (double c : counts) {
    if (c > 0) h += -(c / n) * (std::log(c / n) / std::log(2.0));
  }
  return h;
}

/// Counts[branch][class] by direct recount.
inline std::vector<std::vector<double>> partition_counts(const LabeledDataset& ds, std::size_t attribute,
                                                         std::optional<double> threshold, std::size_t arity) {
  std::vector<std::vector<double>> counts(arity, std::vector<double>(ds.num_classes(), 0.0));
  for (const auto& r : ds.records()) {
    std::size_t b;
    if (threshold) {
      b = r.values[attribute] > *threshold ? 1 : 0;
    } else {
      b = static_cast<std::size_t>(r.values[attribute]);
    }
    counts[b][*r.label] += 1;
  }
  return counts;
}

inline double gain(const std::vector<std::vector<double>>& counts) {
  std::vector<double> parent(counts.front().size(), 0.0);
  double n = 0;
  for (const auto& b : counts) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      parent[k] += b[k];
      n += b[k];
    }
  }
  double rest = 0;
  for (const auto& b : counts) {
    double nb = 0;
    for (double c : b) nb += c;
    if (nb > 0) rest += nb / n * entropy(b);
  }
  return entropy(parent) - rest;
}

inline double split_info(const std::vector<std::vector<double>>& counts) {
  std::vector<double> sizes;
  for (const auto& b : counts) {
    double nb = 0;
    for (double c : b) nb += c;
    sizes.push_back(nb);
  }
  return entropy(sizes);
}

struct Cut {
  double threshold;
  double gain;
};

/// Exhaustive scan over every midpoint of adjacent distinct values, keeping
/// the first (smallest) threshold among gains within 1e-12 of the best.
inline std::optional<Cut> best_cut(const LabeledDataset& ds, std::size_t attribute, std::size_t min_leaf = 1) {
  std::vector<double> values;
  for (const auto& r : ds.records()) values.push_back(r.values[attribute]);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::optional<Cut> best;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double theta = (values[i] + values[i + 1]) / 2.0;
    const auto counts = partition_counts(ds, attribute, theta, 2);
    double left = 0;
    double right = 0;
    for (double c : counts[0]) left += c;
    for (double c : counts[1]) right += c;
    if (left < static_cast<double>(min_leaf) || right < static_cast<double>(min_leaf)) continue;
    const double g = gain(counts);
    if (!best || g > best->gain + 1e-12) best = Cut{theta, g};
  }
  return best;
}

/// Independent recursive router: follows splits without library helpers.
inline const Node& route(const Node& n, const Record& r) {
  if (!n.split) return n;
  std::size_t b;
  if (n.split->kind == Split::Kind::numeric) {
    b = r.values[n.split->attribute] <= n.split->threshold ? 0 : 1;
  } else {
    b = static_cast<std::size_t>(r.values[n.split->attribute]);
  }
  return oracle::route(n.children.at(b), r);
}

inline std::size_t majority(const std::vector<double>& counts) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  return best;
}

inline std::size_t training_errors(const Tree& t, const LabeledDataset& ds) {
  std::size_t e = 0;
  for (const auto& r : ds.records()) e += majority(oracle::route(t.root, r).distribution.counts) != *r.label;
  return e;
}

}  // namespace oracle

/// Synthetic panel: `districts` districts plus one province whose value per
/// indicator and year is the sum over districts. All values positive.
inline std::vector<klassen::PanelEntry> synthetic_panel(std::size_t districts, std::size_t indicators,
                                                        std::uint64_t seed, int year0 = 2006) {
  Rng rng(seed);
  std::vector<klassen::PanelEntry> out;
  std::map<std::pair<std::string, int>, double> province;
  for (std::size_t d = 0; d < districts; ++d) {
    for (std::size_t i = 0; i < indicators; ++i) {
      const double base = 100.0 + 900.0 * rng.uniform();
      const double growth = 0.9 + 0.3 * rng.uniform();
      const std::string ind = "ind" + std::to_string(i);
      for (int t = 0; t < 2; ++t) {
        const double v = std::round(t == 0 ? base : base * growth);
        out.push_back({klassen::Level::district, "D" + std::to_string(d), ind, year0 + t, v});
        province[{ind, year0 + t}] += v;
      }
    }
  }
  for (std::size_t i = 0; i < indicators; ++i) {
    const std::string ind = "ind" + std::to_string(i);
    for (int t = 0; t < 2; ++t) {
      out.push_back({klassen::Level::province, "PROV", ind, year0 + t, province[{ind, year0 + t}]});
    }
  }
  return out;
}

inline klassen::GdpPanel panel_of(const std::vector<klassen::PanelEntry>& entries) {
  return klassen::GdpPanel(entries);
}

}  // namespace regdev::testing
