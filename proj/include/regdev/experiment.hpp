#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/eval.hpp"
#include "regdev/klassen.hpp"
#include "regdev/learner.hpp"

namespace regdev {

/// A named set of Klassen rows (one region's labeled indicators).
struct ExperimentSource {
  std::string name;
  std::vector<klassen::KlassenRow> rows;
};

/// Train on the union of `train` (in the listed order), test on `test`.
struct ExperimentSpec {
  std::string id;
  std::vector<ExperimentSource> train;
  ExperimentSource test;
  bool pruned = true;
};

enum class Preset { P1, P2, P3, P4 };

inline std::optional<Preset> parse_preset(std::string_view s) {
  if (s == "P1") return Preset::P1;
  if (s == "P2") return Preset::P2;
  if (s == "P3") return Preset::P3;
  if (s == "P4") return Preset::P4;
  return std::nullopt;
}

inline std::string_view to_string(Preset p) {
  constexpr std::array<std::string_view, 4> names = {"P1", "P2", "P3", "P4"};
  return names[static_cast<std::size_t>(p)];
}

/// The four cross-region pairings over regions A and B:
///   P1 trains on B and tests on A, P2 trains on A and tests on B,
///   P3 trains on A then B and tests on A, P4 trains on A then B and tests on B.
inline ExperimentSpec make_preset(Preset p, const ExperimentSource& a, const ExperimentSource& b, bool pruned) {
  ExperimentSpec s;
  s.id = std::string(to_string(p));
  s.pruned = pruned;
  switch (p) {
    case Preset::P1: s.train = {b}; s.test = a; break;
    case Preset::P2: s.train = {a}; s.test = b; break;
    case Preset::P3: s.train = {a, b}; s.test = a; break;
    case Preset::P4: s.train = {a, b}; s.test = b; break;
  }
  return s;
}

struct DistrictResult {
  std::string district;
  klassen::Quadrant klassen = klassen::Quadrant::K4;    // majority of the Klassen labels
  klassen::Quadrant predicted = klassen::Quadrant::K4;  // majority of the predictions
};

struct ExperimentResult {
  std::string id;
  std::string learner;
  bool pruned = true;
  std::size_t test_size = 0;
  double accuracy = 0.0;  // percent agreement with the Klassen labels
  ConfusionMatrix confusion;
  std::array<std::size_t, 4> quadrant_distribution{};  // predicted records per quadrant
  std::vector<DistrictResult> per_district;            // order of first appearance
};

inline ExperimentResult run_experiment(const ExperimentSpec& spec, const Learner& learner) {
  if (spec.train.empty()) throw DataError("experiment " + spec.id + " has no training source");
  if (spec.test.rows.empty()) throw DataError("experiment " + spec.id + " has an empty test set");

  std::vector<klassen::KlassenRow> train_rows;
  for (const auto& src : spec.train) train_rows.insert(train_rows.end(), src.rows.begin(), src.rows.end());
  if (train_rows.empty()) throw DataError("experiment " + spec.id + " has an empty training set");

  const auto configured = learner.with_pruned(spec.pruned);
  const auto tree = configured.train(klassen::to_dataset(train_rows));
  const auto test = klassen::to_dataset(spec.test.rows);
  if (!(test.header() == tree.header)) throw DataError("train and test schemas differ");

  ExperimentResult out;
  out.id = spec.id;
  out.learner = configured.name();
  out.pruned = spec.pruned;
  out.test_size = test.size();
  out.confusion = ConfusionMatrix(test.num_classes());

  std::vector<std::string> districts;
  std::vector<std::vector<klassen::Quadrant>> actual_by_district;
  std::vector<std::vector<klassen::Quadrant>> predicted_by_district;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto p = predict(tree, test[i]).label;
    out.confusion.add(*test[i].label, p);
    ++out.quadrant_distribution[p];

    const auto& row = spec.test.rows[i];
    auto it = std::find(districts.begin(), districts.end(), row.district);
    const auto d = static_cast<std::size_t>(it - districts.begin());
    if (it == districts.end()) {
      districts.push_back(row.district);
      actual_by_district.emplace_back();
      predicted_by_district.emplace_back();
    }
    actual_by_district[d].push_back(row.quadrant);
    predicted_by_district[d].push_back(static_cast<klassen::Quadrant>(p));
  }
  out.accuracy = accuracy(out.confusion);
  for (std::size_t d = 0; d < districts.size(); ++d) {
    out.per_district.push_back({districts[d], klassen::aggregate_district(actual_by_district[d]),
                                klassen::aggregate_district(predicted_by_district[d])});
  }
  return out;
}

}  // namespace regdev
