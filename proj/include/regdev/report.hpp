#pragma once

#include <algorithm>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "regdev/csv.hpp"
#include "regdev/eval.hpp"
#include "regdev/experiment.hpp"
#include "regdev/klassen.hpp"

namespace regdev::report {

using Table = std::vector<std::vector<std::string>>;

/// Left-aligned first column, right-aligned others, two spaces between.
inline std::string render_text(const Table& t) {
  std::vector<std::size_t> width;
  for (const auto& row : t) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : t) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      const std::string pad(width[c] - row[c].size(), ' ');
      line += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

inline std::string render_csv(const Table& t) {
  std::string out;
  for (const auto& row : t) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += csv::quote(row[c]);
    }
    out += "\n";
  }
  return out;
}

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// Class counts in the quadrant-by-dataset layout.
inline Table class_distribution_table(const std::vector<std::string>& labels,
                                      const std::vector<std::string>& dataset_names,
                                      const std::vector<std::vector<std::size_t>>& counts) {
  Table t;
  std::vector<std::string> head = {"class"};
  head.insert(head.end(), dataset_names.begin(), dataset_names.end());
  t.push_back(head);
  std::vector<std::size_t> totals(dataset_names.size(), 0);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    std::vector<std::string> row = {labels[k]};
    for (std::size_t d = 0; d < counts.size(); ++d) {
      row.push_back(std::to_string(counts[d][k]));
      totals[d] += counts[d][k];
    }
    t.push_back(row);
  }
  std::vector<std::string> total_row = {"total"};
  for (auto v : totals) total_row.push_back(std::to_string(v));
  t.push_back(total_row);
  return t;
}

/// Four metric rows (accuracy, kappa, MAE, RMSE) by one column per learner.
/// `decimals` < 0 writes full precision.
inline Table comparison_table(const Comparison& c, int decimals = 4) {
  auto num = [&](double v, int d) { return decimals < 0 ? csv::format_number(v) : fixed(v, d); };
  Table t;
  std::vector<std::string> head = {"metric"};
  for (const auto& r : c.reports) head.push_back(r.learner);
  t.push_back(head);
  std::vector<std::string> acc = {"Classification accuracy (%)"};
  std::vector<std::string> kap = {"Kappa"};
  std::vector<std::string> mae = {"Mean absolute error"};
  std::vector<std::string> rmse = {"Root mean squared error"};
  for (const auto& r : c.reports) {
    acc.push_back(num(r.accuracy, 2));
    kap.push_back(num(r.kappa, decimals));
    mae.push_back(num(r.mae, decimals));
    rmse.push_back(num(r.rmse, decimals));
  }
  t.push_back(acc);
  t.push_back(kap);
  t.push_back(mae);
  t.push_back(rmse);
  return t;
}

inline Table confusion_table(const EvalReport& r) {
  Table t;
  std::vector<std::string> head = {"actual \\ predicted"};
  head.insert(head.end(), r.class_labels.begin(), r.class_labels.end());
  t.push_back(head);
  for (std::size_t a = 0; a < r.confusion.size(); ++a) {
    std::vector<std::string> row = {r.class_labels[a]};
    for (std::size_t p = 0; p < r.confusion.size(); ++p) row.push_back(std::to_string(r.confusion.at(a, p)));
    t.push_back(row);
  }
  return t;
}

inline std::string comparison_text(const Comparison& c) {
  std::string out = render_text(comparison_table(c));
  out += "Best by accuracy: " + c.best_report().learner + "\n";
  for (const auto& r : c.reports) {
    out += "\nConfusion matrix (" + r.learner + ", " + std::to_string(r.folds) + " folds, seed " +
           std::to_string(r.seed) + ")\n";
    out += render_text(confusion_table(r));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["learner"] = r.learner;
  j["folds"] = r.folds;
  j["seed"] = r.seed;
  j["accuracy"] = r.accuracy;
  j["kappa"] = r.kappa;
  j["mae"] = r.mae;
  j["rmse"] = r.rmse;
  j["class_labels"] = r.class_labels;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < r.confusion.size(); ++a) {
    std::vector<std::size_t> row;
    for (std::size_t p = 0; p < r.confusion.size(); ++p) row.push_back(r.confusion.at(a, p));
    rows.push_back(row);
  }
  j["confusion"] = std::move(rows);
  return j;
}

inline nlohmann::ordered_json to_json(const Comparison& c) {
  nlohmann::ordered_json j;
  j["best"] = c.best_report().learner;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : c.reports) j["reports"].push_back(to_json(r));
  return j;
}

/// Accuracy per experiment: one row per pruning mode, one column per id.
inline Table experiment_accuracy_table(std::span<const ExperimentResult> results) {
  std::vector<std::string> ids;
  for (const auto& r : results) {
    if (std::find(ids.begin(), ids.end(), r.id) == ids.end()) ids.push_back(r.id);
  }
  Table t;
  std::vector<std::string> head = {""};
  head.insert(head.end(), ids.begin(), ids.end());
  t.push_back(head);
  for (bool pruned : {true, false}) {
    std::vector<std::string> row = {pruned ? "Pruning" : "Un-pruned"};
    bool any = false;
    for (const auto& id : ids) {
      std::string cell = "-";
      for (const auto& r : results) {
        if (r.id == id && r.pruned == pruned) {
          cell = fixed(r.accuracy, 2) + "%";
          any = true;
        }
      }
      row.push_back(cell);
    }
    if (any) t.push_back(row);
  }
  return t;
}

/// Predicted records per quadrant, one column per (pruning mode, experiment).
inline Table quadrant_distribution_table(std::span<const ExperimentResult> results) {
  Table t;
  std::vector<const ExperimentResult*> order;
  for (bool pruned : {false, true}) {
    for (const auto& r : results) {
      if (r.pruned == pruned) order.push_back(&r);
    }
  }
  std::vector<std::string> head = {"quadrant"};
  for (const auto* r : order) head.push_back(std::string(r->pruned ? "pruned " : "unpruned ") + r->id);
  t.push_back(head);
  for (std::size_t q = 0; q < 4; ++q) {
    std::vector<std::string> row = {std::string(klassen::kQuadrantNames[q])};
    for (const auto* r : order) row.push_back(std::to_string(r->quadrant_distribution[q]));
    t.push_back(row);
  }
  std::vector<std::string> total = {"total"};
  for (const auto* r : order) total.push_back(std::to_string(r->test_size));
  t.push_back(total);
  return t;
}

/// Per-district classes for one test region: the Klassen class and the
/// predicted class of each run, all aggregated over indicators by majority.
inline Table district_table(std::span<const ExperimentResult> runs_on_same_test) {
  Table t;
  if (runs_on_same_test.empty()) return t;
  std::vector<std::string> head = {"district", "Klassen"};
  for (const auto& r : runs_on_same_test) head.push_back(r.learner + (r.pruned ? "-pruning" : "-no-pruning"));
  t.push_back(head);
  const auto& first = runs_on_same_test.front();
  for (std::size_t d = 0; d < first.per_district.size(); ++d) {
    std::vector<std::string> row = {first.per_district[d].district,
                                    std::string(klassen::to_string(first.per_district[d].klassen))};
    for (const auto& r : runs_on_same_test) row.push_back(std::string(klassen::to_string(r.per_district.at(d).predicted)));
    t.push_back(row);
  }
  return t;
}

inline nlohmann::ordered_json to_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["learner"] = r.learner;
  j["pruned"] = r.pruned;
  j["test_size"] = r.test_size;
  j["accuracy"] = r.accuracy;
  nlohmann::ordered_json dist;
  for (std::size_t q = 0; q < 4; ++q) dist[std::string(klassen::kQuadrantNames[q])] = r.quadrant_distribution[q];
  j["quadrant_distribution"] = std::move(dist);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < r.confusion.size(); ++a) {
    std::vector<std::size_t> row;
    for (std::size_t p = 0; p < r.confusion.size(); ++p) row.push_back(r.confusion.at(a, p));
    rows.push_back(row);
  }
  j["confusion"] = std::move(rows);
  nlohmann::ordered_json districts = nlohmann::ordered_json::array();
  for (const auto& d : r.per_district) {
    districts.push_back({{"district", d.district},
                         {"klassen", klassen::to_string(d.klassen)},
                         {"predicted", klassen::to_string(d.predicted)},
                         {"aggregated", true}});
  }
  j["per_district"] = std::move(districts);
  return j;
}

}  // namespace regdev::report
