#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include <json.hpp>

#include "regdev/dataset.hpp"
#include "regdev/j48.hpp"
#include "regdev/nbtree.hpp"
#include "regdev/reptree.hpp"
#include "regdev/tree.hpp"

namespace regdev {

/// One of the three tree learners together with its parameters.
class Learner {
 public:
  using Params = std::variant<J48Params, NBTreeParams, REPTreeParams>;

  Learner() = default;
  explicit Learner(Params params) : params_(std::move(params)) {}

  static std::optional<Learner> from_name(std::string_view name) {
    if (name == "j48") return Learner(J48Params{});
    if (name == "nbtree") return Learner(NBTreeParams{});
    if (name == "reptree") return Learner(REPTreeParams{});
    return std::nullopt;
  }

  const Params& params() const { return params_; }

  std::string name() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, J48Params>) return "j48";
          else if constexpr (std::is_same_v<T, NBTreeParams>) return "nbtree";
          else return "reptree";
        },
        params_);
  }

  Tree train(const LabeledDataset& ds) const {
    return std::visit(
        [&](const auto& p) -> Tree {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, J48Params>) return train_j48(ds, p);
          else if constexpr (std::is_same_v<T, NBTreeParams>) return train_nbtree(ds, p);
          else return train_reptree(ds, p);
        },
        params_);
  }

  /// Same learner with pruning switched on or off. NBTree has no pruning
  /// switch and is returned unchanged.
  Learner with_pruned(bool pruned) const {
    Learner out = *this;
    if (auto* j = std::get_if<J48Params>(&out.params_)) j->pruned = pruned;
    if (auto* r = std::get_if<REPTreeParams>(&out.params_)) r->pruned = pruned;
    return out;
  }

  bool has_pruning() const { return !std::holds_alternative<NBTreeParams>(params_); }

  Learner with_seed(std::uint64_t seed) const {
    Learner out = *this;
    if (auto* r = std::get_if<REPTreeParams>(&out.params_)) r->seed = seed;
    return out;
  }

  nlohmann::ordered_json params_json() const {
    nlohmann::ordered_json j;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, J48Params>) {
            j["min_leaf_instances"] = p.min_leaf_instances;
            j["confidence"] = p.confidence;
            j["pruned"] = p.pruned;
          } else if constexpr (std::is_same_v<T, NBTreeParams>) {
            j["min_split_instances"] = p.min_split_instances;
            j["min_relative_error_reduction"] = p.min_relative_error_reduction;
            j["utility_folds"] = p.utility_folds;
          } else {
            j["pruning_folds"] = p.pruning_folds;
            j["seed"] = p.seed;
            j["min_leaf_instances"] = p.min_leaf_instances;
            j["pruned"] = p.pruned;
          }
        },
        params_);
    return j;
  }

  /// Inverse of params_json for a learner of the given name. Missing keys keep
  /// their defaults.
  static Learner from_json(std::string_view name, const nlohmann::ordered_json& j) {
    auto learner = from_name(name);
    if (!learner) throw DataError("unknown learner '" + std::string(name) + "'");
    std::visit(
        [&](auto& p) {
          using T = std::decay_t<decltype(p)>;
          auto read = [&](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
          };
          if constexpr (std::is_same_v<T, J48Params>) {
            read("min_leaf_instances", p.min_leaf_instances);
            read("confidence", p.confidence);
            read("pruned", p.pruned);
          } else if constexpr (std::is_same_v<T, NBTreeParams>) {
            read("min_split_instances", p.min_split_instances);
            read("min_relative_error_reduction", p.min_relative_error_reduction);
            read("utility_folds", p.utility_folds);
          } else {
            read("pruning_folds", p.pruning_folds);
            read("seed", p.seed);
            read("min_leaf_instances", p.min_leaf_instances);
            read("pruned", p.pruned);
          }
          p.validate();
        },
        learner->params_);
    return *learner;
  }

  bool operator==(const Learner&) const = default;

 private:
  Params params_ = J48Params{};
};

}  // namespace regdev
