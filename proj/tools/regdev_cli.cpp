// regdev: Klassen labeling, tree training, cross-validation and cross-region
// experiments from the command line.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 internal error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "regdev/regdev.hpp"

namespace {

namespace fs = std::filesystem;
using regdev::DataError;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

struct Context {
  std::string command_line;
  std::uint64_t seed = 1;

  std::string header() const {
    return std::string("# regdev ") + regdev::kVersion + "\n# command: " + command_line +
           "\n# seed: " + std::to_string(seed) + "\n";
  }

  nlohmann::ordered_json provenance() const {
    return {{"tool", std::string("regdev ") + regdev::kVersion}, {"command", command_line}, {"seed", seed}};
  }
};

std::string join_command(int argc, char** argv) {
  std::string out = "regdev";
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    const bool plain = !arg.empty() && arg.find_first_of(" \t\"'\n") == std::string::npos;
    out += " " + (plain ? arg : "'" + arg + "'");
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write-then-rename so readers never observe a partial file.
void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
    if (!out.flush()) throw DataError("failed writing '" + path + "'");
  }
  fs::rename(tmp, path);
}

// Prefixes errors with the file name.
template <typename F>
auto with_file(const std::string& path, F&& parse) {
  try {
    return parse(read_file(path));
  } catch (const DataError& e) {
    const std::string msg = e.what();
    if (msg.rfind("cannot open", 0) == 0) throw;
    throw DataError(path + ": " + msg);
  }
}

regdev::LabeledDataset load_labeled(const std::string& path) {
  return with_file(path, [](const std::string& text) {
    regdev::CsvOptions opts;
    opts.class_labels = regdev::klassen::quadrant_labels();
    // Non-Klassen class labels fall back to inference.
    try {
      return regdev::parse_csv(text, opts);
    } catch (const DataError& e) {
      if (std::string(e.what()).find("not in the declared label set") == std::string::npos) throw;
      return regdev::parse_csv(text, regdev::CsvOptions{});
    }
  });
}

struct LearnerFlags {
  std::string name = "j48";
  bool pruned = true;
  std::size_t min_leaf = 2;
  double confidence = 0.25;
  std::size_t pruning_folds = 3;
  std::size_t min_split = 30;
  double min_error_reduction = 0.05;
  std::size_t utility_folds = 5;

  void add_to(CLI::App* app, bool single_learner) {
    if (single_learner) {
      app->add_option("--learner", name, "j48, nbtree or reptree")
          ->check(CLI::IsMember({"j48", "nbtree", "reptree"}))
          ->capture_default_str();
    }
    app->add_option("--min-leaf", min_leaf, "j48/reptree: minimum records per leaf")->capture_default_str();
    app->add_option("--confidence", confidence, "j48: pruning confidence factor")->capture_default_str();
    app->add_option("--pruning-folds", pruning_folds, "reptree: 1/n of the data is held out for pruning")
        ->capture_default_str();
    app->add_option("--min-split", min_split, "nbtree: minimum records to consider a split")->capture_default_str();
    app->add_option("--min-error-reduction", min_error_reduction, "nbtree: minimum relative error reduction")
        ->capture_default_str();
    app->add_option("--utility-folds", utility_folds, "nbtree: folds for the node utility")->capture_default_str();
  }

  regdev::Learner make(const std::string& learner, std::uint64_t seed) const {
    if (learner == "j48") return regdev::Learner(regdev::J48Params{min_leaf, confidence, pruned});
    if (learner == "nbtree") {
      return regdev::Learner(regdev::NBTreeParams{min_split, min_error_reduction, utility_folds});
    }
    if (learner == "reptree") return regdev::Learner(regdev::REPTreeParams{pruning_folds, seed, min_leaf, pruned});
    throw CLI::ValidationError("--learner", "unknown learner '" + learner + "'");
  }
};

void add_pruning_flags(CLI::App* app, bool& pruned, bool& explicit_choice) {
  auto* p = app->add_flag_callback("--pruned", [&] { pruned = true; explicit_choice = true; }, "prune the tree");
  auto* u = app->add_flag_callback("--unpruned", [&] { pruned = false; explicit_choice = true; }, "do not prune");
  p->excludes(u);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------- label

struct LabelCmd {
  std::string districts_path;
  std::string province_path;
  std::string years;
  std::string mapping = "table1";
  std::string out;

  int run(const Context& ctx) const {
    const auto parts = split_list(years);
    if (parts.size() != 2) throw CLI::ValidationError("--years", "expected 't-1,t', e.g. 2006,2007");
    regdev::klassen::YearPair pair;
    try {
      pair = {std::stoi(parts[0]), std::stoi(parts[1])};
    } catch (const std::exception&) {
      throw CLI::ValidationError("--years", "years must be integers");
    }

    const auto districts = with_file(districts_path, [](const std::string& t) { return regdev::klassen::parse_panel_csv(t); });
    const auto& province_file = province_path.empty() ? districts_path : province_path;
    const auto province = with_file(province_file, [](const std::string& t) { return regdev::klassen::parse_panel_csv(t); });
    if (districts.empty()) throw DataError(districts_path + ": panel has no entries");

    const auto labeled = regdev::klassen::label_panel(districts, province, pair, *regdev::klassen::parse_mapping(mapping));
    write_file(out + ".labeled.csv", ctx.header() + regdev::write_csv(labeled.dataset));
    write_file(out + ".rows.csv", ctx.header() + regdev::klassen::write_rows_csv(labeled.rows));

    const auto counts = regdev::class_distribution(labeled.dataset);
    const auto table = regdev::report::class_distribution_table(labeled.dataset.class_attribute().labels,
                                                                {fs::path(out).filename().string()}, {counts});
    const std::string text = ctx.header() + "mapping: " + mapping + "\n" + regdev::report::render_text(table);
    write_file(out + ".distribution.txt", text);
    std::cout << text;
    return 0;
  }
};

// ---------------------------------------------------------------- train

struct TrainCmd {
  std::string data;
  LearnerFlags flags;
  bool explicit_pruning = false;
  std::string out;

  int run(const Context& ctx) const {
    const auto ds = load_labeled(data);
    const auto learner = flags.make(flags.name, ctx.seed);
    regdev::Model model{learner, learner.train(ds), ctx.provenance()};
    write_file(out + ".model.json", regdev::write_model(model));
    write_file(out + ".tree.txt", ctx.header() + regdev::export_text(model.tree));
    write_file(out + ".tree.dot", "// regdev " + std::string(regdev::kVersion) + "\n// command: " + ctx.command_line +
                                      "\n// seed: " + std::to_string(ctx.seed) + "\n" + regdev::export_dot(model.tree));
    std::cout << ctx.header() << "learner: " << learner.name() << "\n"
              << "leaves: " << regdev::num_leaves(model.tree) << "\n"
              << "depth: " << regdev::depth(model.tree) << "\n\n"
              << regdev::export_text(model.tree);
    return 0;
  }
};

// ---------------------------------------------------------------- evaluate / compare

struct CompareCmd {
  std::string data;
  std::string learners = "j48,nbtree,reptree";
  LearnerFlags flags;
  std::size_t k = 10;
  std::string out;

  int run(const Context& ctx, bool single) const {
    const auto ds = load_labeled(data);
    std::vector<regdev::Learner> list;
    if (single) {
      list.push_back(flags.make(flags.name, ctx.seed));
    } else {
      for (const auto& name : split_list(learners)) list.push_back(flags.make(name, ctx.seed));
    }
    if (list.empty()) throw CLI::ValidationError("--learners", "no learners given");

    const auto cmp = regdev::compare_learners(ds, k, ctx.seed, list);
    const std::string text = ctx.header() + "folds: " + std::to_string(k) + "\n" + regdev::report::comparison_text(cmp);
    std::cout << text;
    if (!out.empty()) {
      write_file(out + ".txt", text);
      write_file(out + ".csv", ctx.header() + regdev::report::render_csv(regdev::report::comparison_table(cmp, -1)));
      auto j = regdev::report::to_json(cmp);
      j["generator"] = ctx.provenance();
      write_file(out + ".json", j.dump(2) + "\n");
    }
    return 0;
  }
};

// ---------------------------------------------------------------- experiment

struct ExperimentCmd {
  std::string region_a;
  std::string region_b;
  std::string id = "all";
  std::vector<std::string> train;
  std::string test;
  LearnerFlags flags;
  bool explicit_pruning = false;
  std::string out;

  static regdev::ExperimentSource load_source(const std::string& path) {
    return {fs::path(path).stem().string(),
            with_file(path, [](const std::string& t) { return regdev::klassen::parse_rows_csv(t); })};
  }

  int run(const Context& ctx) const {
    std::vector<bool> modes;
    if (explicit_pruning) {
      modes.push_back(flags.pruned);
    } else {
      modes = {true, false};
    }
    const auto learner = flags.make(flags.name, ctx.seed);

    // Each group shares one test source and yields one per-district table.
    std::vector<std::vector<regdev::ExperimentSpec>> groups;
    if (!train.empty() || !test.empty()) {
      if (train.empty() || test.empty()) throw CLI::ValidationError("--train/--test", "custom runs need both");
      std::vector<regdev::ExperimentSource> sources;
      for (const auto& t : train) sources.push_back(load_source(t));
      const auto test_source = load_source(test);
      groups.emplace_back();
      for (bool pruned : modes) groups.back().push_back({id == "all" ? "custom" : id, sources, test_source, pruned});
    } else {
      if (region_a.empty() || region_b.empty()) {
        throw CLI::ValidationError("--region-a/--region-b", "preset experiments need both regions");
      }
      const auto a = load_source(region_a);
      const auto b = load_source(region_b);
      std::vector<regdev::Preset> presets;
      if (id == "all") {
        presets = {regdev::Preset::P1, regdev::Preset::P2, regdev::Preset::P3, regdev::Preset::P4};
      } else {
        const auto p = regdev::parse_preset(id);
        if (!p) throw CLI::ValidationError("--id", "expected P1, P2, P3, P4 or all");
        presets = {*p};
      }
      for (auto p : presets) {
        groups.emplace_back();
        for (bool pruned : modes) groups.back().push_back(regdev::make_preset(p, a, b, pruned));
      }
    }

    std::vector<regdev::ExperimentResult> results;
    std::vector<std::vector<regdev::ExperimentResult>> grouped;
    for (const auto& g : groups) {
      grouped.emplace_back();
      for (const auto& spec : g) {
        grouped.back().push_back(regdev::run_experiment(spec, learner));
        results.push_back(grouped.back().back());
      }
    }

    namespace rep = regdev::report;
    std::string text = ctx.header() + "learner: " + learner.name() + "\n\nAccuracy against Klassen labels\n" +
                       rep::render_text(rep::experiment_accuracy_table(results)) +
                       "\nPredicted quadrant distribution\n" + rep::render_text(rep::quadrant_distribution_table(results));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      text += "\nPer-district classes, " + groups[g].front().id + " (test: " + groups[g].front().test.name +
              "; aggregated by majority over indicators)\n" + rep::render_text(rep::district_table(grouped[g]));
    }
    std::cout << text;
    if (!out.empty()) {
      write_file(out + ".txt", text);
      write_file(out + ".accuracy.csv", ctx.header() + rep::render_csv(rep::experiment_accuracy_table(results)));
      write_file(out + ".distribution.csv", ctx.header() + rep::render_csv(rep::quadrant_distribution_table(results)));
      nlohmann::ordered_json j;
      j["generator"] = ctx.provenance();
      j["results"] = nlohmann::ordered_json::array();
      for (const auto& r : results) j["results"].push_back(rep::to_json(r));
      write_file(out + ".json", j.dump(2) + "\n");
    }
    return 0;
  }
};

// ---------------------------------------------------------------- predict

struct PredictCmd {
  std::string model_path;
  std::string data;
  std::string out;

  int run(const Context& ctx) const {
    const auto model = with_file(model_path, [](const std::string& t) { return regdev::read_model(t); });
    const auto ds = with_file(data, [&](const std::string& t) { return regdev::parse_csv_as(t, model.tree.header); });

    std::string text = ctx.header() + "class";
    for (const auto& label : model.tree.header.class_attribute.labels) text += "," + regdev::csv::quote("p_" + label);
    text += "\n";
    for (const auto& r : ds.records()) {
      const auto p = regdev::predict(model.tree, r);
      text += regdev::csv::quote(model.tree.header.class_name(p.label));
      for (double v : p.probabilities) text += "," + regdev::csv::format_number(v);
      text += "\n";
    }
    if (out.empty()) {
      std::cout << text;
    } else {
      write_file(out, text);
    }
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regional development classification with decision trees"};
  app.set_version_flag("--version", std::string("regdev ") + regdev::kVersion);
  app.require_subcommand(1);

  Context ctx;
  ctx.command_line = join_command(argc, argv);

  LabelCmd label;
  auto* label_app = app.add_subcommand("label", "Compute Klassen features and quadrant labels from GDP panels");
  label_app->add_option("--panel-districts", label.districts_path, "district panel CSV (level,region,indicator,year,value)")
      ->required();
  label_app->add_option("--panel-province", label.province_path, "province panel CSV (default: the district file)");
  label_app->add_option("--years", label.years, "year pair t-1,t")->required();
  label_app->add_option("--mapping", label.mapping, "quadrant layout")
      ->check(CLI::IsMember({"table1", "prose"}))
      ->capture_default_str();
  label_app->add_option("--out", label.out, "output prefix")->required();

  TrainCmd train;
  auto* train_app = app.add_subcommand("train", "Train one tree and write the model, text and DOT renderings");
  train_app->add_option("--data", train.data, "labeled CSV")->required();
  train.flags.add_to(train_app, true);
  add_pruning_flags(train_app, train.flags.pruned, train.explicit_pruning);
  train_app->add_option("--seed", ctx.seed, "random seed")->capture_default_str();
  train_app->add_option("--out", train.out, "output prefix")->required();

  CompareCmd evaluate;
  bool evaluate_explicit = false;
  auto* evaluate_app = app.add_subcommand("evaluate", "Stratified cross-validation of one learner");
  evaluate_app->add_option("--data", evaluate.data, "labeled CSV")->required();
  evaluate.flags.add_to(evaluate_app, true);
  add_pruning_flags(evaluate_app, evaluate.flags.pruned, evaluate_explicit);
  evaluate_app->add_option("--k", evaluate.k, "number of folds")->capture_default_str();
  evaluate_app->add_option("--seed", ctx.seed, "random seed")->capture_default_str();
  evaluate_app->add_option("--out", evaluate.out, "output prefix for .txt/.csv/.json reports");

  CompareCmd compare;
  bool compare_explicit = false;
  auto* compare_app = app.add_subcommand("compare", "Cross-validate several learners side by side");
  compare_app->add_option("--data", compare.data, "labeled CSV")->required();
  compare_app->add_option("--learners", compare.learners, "comma-separated learners")->capture_default_str();
  compare.flags.add_to(compare_app, false);
  add_pruning_flags(compare_app, compare.flags.pruned, compare_explicit);
  compare_app->add_option("--k", compare.k, "number of folds")->capture_default_str();
  compare_app->add_option("--seed", ctx.seed, "random seed")->capture_default_str();
  compare_app->add_option("--out", compare.out, "output prefix for .txt/.csv/.json reports");

  ExperimentCmd experiment;
  auto* experiment_app = app.add_subcommand("experiment", "Cross-region train/test runs (P1-P4 or custom)");
  experiment_app->add_option("--region-a", experiment.region_a, "Klassen row CSV of region A");
  experiment_app->add_option("--region-b", experiment.region_b, "Klassen row CSV of region B");
  experiment_app->add_option("--id", experiment.id, "P1, P2, P3, P4 or all")->capture_default_str();
  experiment_app->add_option("--train", experiment.train, "custom run: training Klassen row CSV(s)");
  experiment_app->add_option("--test", experiment.test, "custom run: test Klassen row CSV");
  experiment.flags.add_to(experiment_app, true);
  add_pruning_flags(experiment_app, experiment.flags.pruned, experiment.explicit_pruning);
  experiment_app->add_option("--seed", ctx.seed, "random seed")->capture_default_str();
  experiment_app->add_option("--out", experiment.out, "output prefix for report files");

  PredictCmd predict;
  auto* predict_app = app.add_subcommand("predict", "Classify records with a saved model");
  predict_app->add_option("--model", predict.model_path, "model JSON")->required();
  predict_app->add_option("--data", predict.data, "CSV with the model's attribute columns")->required();
  predict_app->add_option("--out", predict.out, "output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (label_app->parsed()) return label.run(ctx);
    if (train_app->parsed()) return train.run(ctx);
    if (evaluate_app->parsed()) return evaluate.run(ctx, true);
    if (compare_app->parsed()) return compare.run(ctx, false);
    if (experiment_app->parsed()) return experiment.run(ctx);
    if (predict_app->parsed()) return predict.run(ctx);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const regdev::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const regdev::DomainError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
