#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/learner.hpp"
#include "regdev/naive_bayes.hpp"
#include "regdev/tree.hpp"

namespace regdev {

inline constexpr int kModelFormatVersion = 1;

/// A trained tree plus the learner configuration that produced it.
struct Model {
  Learner learner;
  Tree tree;
  nlohmann::ordered_json provenance;  // optional free-form metadata, written as "generator"
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson attribute_to_json(const Attribute& a) {
  ojson j;
  j["name"] = a.name;
  j["kind"] = a.is_numeric() ? "numeric" : "nominal";
  if (a.is_nominal()) j["labels"] = a.labels;
  return j;
}

inline Attribute attribute_from_json(const ojson& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "numeric") return Attribute::numeric(j.at("name").get<std::string>());
  if (kind == "nominal") {
    return Attribute::nominal(j.at("name").get<std::string>(), j.at("labels").get<std::vector<std::string>>());
  }
  throw DataError("unknown attribute kind '" + kind + "'");
}

inline ojson nb_to_json(const NBModel& m) {
  ojson j;
  j["class_counts"] = m.class_counts;
  j["priors"] = m.priors;
  ojson per_class = ojson::array();
  for (std::size_t k = 0; k < m.num_classes(); ++k) {
    ojson attrs = ojson::array();
    for (std::size_t a = 0; a < m.kinds.size(); ++a) {
      if (m.kinds[a] == AttributeKind::numeric) {
        attrs.push_back({{"mean", m.gaussians[k][a].mean}, {"variance", m.gaussians[k][a].variance}});
      } else {
        attrs.push_back({{"frequencies", m.frequencies[k][a]}});
      }
    }
    per_class.push_back(std::move(attrs));
  }
  j["conditionals"] = std::move(per_class);
  return j;
}

inline NBModel nb_from_json(const ojson& j, const Header& h) {
  NBModel m;
  for (const auto& a : h.attributes) m.kinds.push_back(a.kind);
  m.class_counts = j.at("class_counts").get<std::vector<std::size_t>>();
  m.priors = j.at("priors").get<std::vector<double>>();
  const auto K = h.num_classes();
  const auto& cond = j.at("conditionals");
  if (m.class_counts.size() != K || m.priors.size() != K || cond.size() != K) {
    throw DataError("naive Bayes leaf does not match the class count");
  }
  m.gaussians.assign(K, std::vector<GaussianEstimate>(m.kinds.size()));
  m.frequencies.assign(K, std::vector<std::vector<double>>(m.kinds.size()));
  for (std::size_t k = 0; k < K; ++k) {
    if (cond[k].size() != m.kinds.size()) throw DataError("naive Bayes leaf does not match the schema");
    for (std::size_t a = 0; a < m.kinds.size(); ++a) {
      if (m.kinds[a] == AttributeKind::numeric) {
        m.gaussians[k][a] = {cond[k][a].at("mean").get<double>(), cond[k][a].at("variance").get<double>()};
      } else {
        m.frequencies[k][a] = cond[k][a].at("frequencies").get<std::vector<double>>();
      }
    }
  }
  return m;
}

inline ojson node_to_json(const Node& n, const Header& h) {
  ojson j;
  j["instances"] = n.instances;
  j["distribution"] = n.distribution.counts;
  if (n.nb) j["naive_bayes"] = nb_to_json(*n.nb);
  if (n.split) {
    ojson s;
    s["attribute"] = n.split->attribute;
    s["name"] = h.attributes.at(n.split->attribute).name;
    if (n.split->kind == Split::Kind::numeric) {
      s["kind"] = "numeric";
      s["threshold"] = n.split->threshold;
    } else {
      s["kind"] = "nominal";
      s["arity"] = n.split->arity;
    }
    j["split"] = std::move(s);
    ojson children = ojson::array();
    for (const auto& c : n.children) children.push_back(node_to_json(c, h));
    j["children"] = std::move(children);
  }
  return j;
}

inline Node node_from_json(const ojson& j, const Header& h, std::size_t depth) {
  if (depth > 10000) throw DataError("model tree is implausibly deep");
  Node n;
  n.instances = j.at("instances").get<double>();
  n.distribution.counts = j.at("distribution").get<std::vector<double>>();
  if (n.distribution.size() != h.num_classes()) throw DataError("node distribution does not match the class count");
  if (j.contains("naive_bayes")) n.nb = nb_from_json(j.at("naive_bayes"), h);
  if (j.contains("split")) {
    const auto& s = j.at("split");
    const auto attr = s.at("attribute").get<std::size_t>();
    if (attr >= h.num_attributes()) throw DataError("split references an unknown attribute");
    const auto kind = s.at("kind").get<std::string>();
    if (kind == "numeric") {
      if (!h.attributes[attr].is_numeric()) throw DataError("numeric split on a nominal attribute");
      n.split = Split::numeric(attr, s.at("threshold").get<double>());
    } else if (kind == "nominal") {
      if (!h.attributes[attr].is_nominal()) throw DataError("nominal split on a numeric attribute");
      n.split = Split::nominal(attr, s.at("arity").get<std::size_t>());
    } else {
      throw DataError("unknown split kind '" + kind + "'");
    }
    for (const auto& c : j.at("children")) n.children.push_back(node_from_json(c, h, depth + 1));
    if (n.children.size() != n.split->branches()) throw DataError("child count does not match split arity");
  }
  return n;
}

}  // namespace detail

inline nlohmann::ordered_json model_to_json(const Model& m) {
  detail::ojson j;
  j["format_version"] = kModelFormatVersion;
  j["learner"] = m.learner.name();
  j["params"] = m.learner.params_json();
  if (!m.provenance.is_null()) j["generator"] = m.provenance;
  detail::ojson schema = detail::ojson::array();
  for (const auto& a : m.tree.header.attributes) schema.push_back(detail::attribute_to_json(a));
  j["schema"] = std::move(schema);
  j["class"] = detail::attribute_to_json(m.tree.header.class_attribute);
  j["root"] = detail::node_to_json(m.tree.root, m.tree.header);
  return j;
}

inline std::string write_model(const Model& m) { return model_to_json(m).dump(2) + "\n"; }

/// Throws DataError on malformed documents or unsupported versions.
inline Model read_model(std::string_view text) {
  try {
    const auto j = detail::ojson::parse(text);
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
      throw DataError("unsupported model format_version " + j.at("format_version").dump());
    }
    Model m;
    m.learner = Learner::from_json(j.at("learner").get<std::string>(), j.at("params"));
    for (const auto& a : j.at("schema")) m.tree.header.attributes.push_back(detail::attribute_from_json(a));
    m.tree.header.class_attribute = detail::attribute_from_json(j.at("class"));
    m.tree.header.validate();
    m.tree.root = detail::node_from_json(j.at("root"), m.tree.header, 0);
    if (j.contains("generator")) m.provenance = j.at("generator");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace regdev
