#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "regdev/csv.hpp"
#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/naive_bayes.hpp"

namespace regdev {

/// Per-class weights.
struct ClassDistribution {
  std::vector<double> counts;

  ClassDistribution() = default;
  explicit ClassDistribution(std::size_t num_classes) : counts(num_classes, 0.0) {}
  explicit ClassDistribution(std::vector<double> c) : counts(std::move(c)) {}

  std::size_t size() const { return counts.size(); }
  double total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }
  void add(std::size_t k, double weight = 1.0) { counts.at(k) += weight; }

  // First maximum, so ties go to the smaller class index.
  std::size_t majority() const {
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }

  bool is_pure() const {
    return std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) <= 1;
  }

  std::vector<double> probabilities() const {
    const double t = total();
    std::vector<double> p(counts.size(), 0.0);
    if (t <= 0) return p;
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = counts[k] / t;
    return p;
  }

  bool operator==(const ClassDistribution&) const = default;
};

/// Numeric splits are binary (value <= threshold goes to branch 0); nominal
/// splits have one branch per label.
struct Split {
  enum class Kind { numeric, nominal };

  std::size_t attribute = 0;
  Kind kind = Kind::numeric;
  double threshold = 0.0;
  std::size_t arity = 2;

  static Split numeric(std::size_t attribute, double threshold) { return {attribute, Kind::numeric, threshold, 2}; }
  static Split nominal(std::size_t attribute, std::size_t labels) { return {attribute, Kind::nominal, 0.0, labels}; }

  std::size_t branches() const { return arity; }

  // For nominal splits this is the label index and may be out of range for
  // labels the split has never seen; callers decide how to route those.
  std::size_t branch(const Record& r) const {
    const double v = r.values.at(attribute);
    if (kind == Kind::numeric) return v <= threshold ? 0 : 1;
    return static_cast<std::size_t>(v);
  }

  bool operator==(const Split&) const = default;
};

struct Node {
  ClassDistribution distribution;  // training class counts (parent's, for an empty branch)
  double instances = 0.0;          // training records that reached this node
  std::optional<Split> split;
  std::vector<Node> children;
  std::optional<NBModel> nb;

  bool is_leaf() const { return !split.has_value(); }

  void make_leaf() {
    split.reset();
    children.clear();
  }

  bool operator==(const Node&) const = default;
};

/// A trained classifier: the schema it was trained on plus the root node.
struct Tree {
  Header header;
  Node root;

  bool operator==(const Tree&) const = default;
};

/// Child index for `r` at internal node `n`. Nominal labels with no training
/// records at this node go to the child with the most training records.
inline std::size_t route(const Node& n, const Record& r) {
  const std::size_t b = n.split->branch(r);
  if (b < n.children.size() && (n.split->kind == Split::Kind::numeric || n.children[b].instances > 0)) return b;
  std::size_t best = 0;
  for (std::size_t c = 1; c < n.children.size(); ++c) {
    if (n.children[c].instances > n.children[best].instances) best = c;
  }
  return best;
}

inline const Node& leaf_for(const Node& root, const Record& r) {
  const Node* n = &root;
  while (!n->is_leaf()) n = &n->children[route(*n, r)];
  return *n;
}

/// Class probabilities at a leaf: NB posterior when the leaf carries a model,
/// relative class frequencies otherwise.
inline std::vector<double> leaf_probabilities(const Node& leaf, const Record& r) {
  if (leaf.nb) return predict_nb(*leaf.nb, r);
  auto p = leaf.distribution.probabilities();
  if (!p.empty() && leaf.distribution.total() <= 0) std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
  return p;
}

inline std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

struct Prediction {
  std::size_t label = 0;
  std::vector<double> probabilities;
};

inline Prediction predict(const Tree& tree, const Record& r) {
  if (r.values.size() != tree.header.num_attributes()) {
    throw DataError("record has " + std::to_string(r.values.size()) + " values, model expects " +
                    std::to_string(tree.header.num_attributes()));
  }
  Prediction p;
  p.probabilities = leaf_probabilities(leaf_for(tree.root, r), r);
  p.label = argmax(p.probabilities);
  return p;
}

inline std::size_t num_leaves(const Node& n) {
  if (n.is_leaf()) return 1;
  std::size_t total = 0;
  for (const auto& c : n.children) total += num_leaves(c);
  return total;
}

inline std::size_t depth(const Node& n) {
  std::size_t d = 0;
  for (const auto& c : n.children) d = std::max(d, 1 + depth(c));
  return d;
}

inline std::size_t num_nodes(const Node& n) {
  std::size_t total = 1;
  for (const auto& c : n.children) total += num_nodes(c);
  return total;
}

inline std::size_t num_leaves(const Tree& t) { return num_leaves(t.root); }
inline std::size_t depth(const Tree& t) { return depth(t.root); }

namespace detail {

inline std::string branch_label(const Header& h, const Split& s, std::size_t b) {
  const auto& a = h.attributes.at(s.attribute);
  if (s.kind == Split::Kind::numeric) return (b == 0 ? "<= " : "> ") + csv::format_number(s.threshold);
  return "= " + (b < a.labels.size() ? a.labels[b] : std::to_string(b));
}

inline std::string leaf_summary(const Header& h, const Node& n) {
  std::string s = h.class_name(n.distribution.majority()) + " [";
  for (std::size_t k = 0; k < n.distribution.counts.size(); ++k) {
    if (k) s += ", ";
    s += csv::format_number(n.distribution.counts[k]);
  }
  s += "]";
  if (n.nb) s += " (naive Bayes)";
  return s;
}

inline void render_text(const Header& h, const Node& n, std::size_t indent, std::string& out) {
  for (std::size_t b = 0; b < n.children.size(); ++b) {
    for (std::size_t i = 0; i < indent; ++i) out += "|   ";
    out += h.attributes[n.split->attribute].name + " " + branch_label(h, *n.split, b);
    const auto& child = n.children[b];
    if (child.is_leaf()) {
      out += ": " + leaf_summary(h, child) + "\n";
    } else {
      out += "\n";
      render_text(h, child, indent + 1, out);
    }
  }
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

inline std::size_t render_dot(const Header& h, const Node& n, std::size_t& next_id, std::string& out) {
  const std::size_t id = next_id++;
  if (n.is_leaf()) {
    out += "  n" + std::to_string(id) + " [label=\"" + dot_escape(leaf_summary(h, n)) + "\", shape=box];\n";
    return id;
  }
  out += "  n" + std::to_string(id) + " [label=\"" + dot_escape(h.attributes[n.split->attribute].name) +
         "\", shape=ellipse];\n";
  for (std::size_t b = 0; b < n.children.size(); ++b) {
    const std::size_t child = render_dot(h, n.children[b], next_id, out);
    out += "  n" + std::to_string(id) + " -> n" + std::to_string(child) + " [label=\"" +
           dot_escape(branch_label(h, *n.split, b)) + "\"];\n";
  }
  return id;
}

}  // namespace detail

/// Indented rule listing, one line per branch; a single-leaf tree is one line.
inline std::string export_text(const Tree& t) {
  if (t.root.is_leaf()) return ": " + detail::leaf_summary(t.header, t.root) + "\n";
  std::string out;
  detail::render_text(t.header, t.root, 0, out);
  return out;
}

/// Graphviz digraph, nodes numbered in preorder.
inline std::string export_dot(const Tree& t) {
  std::string out = "digraph tree {\n";
  std::size_t next_id = 0;
  detail::render_dot(t.header, t.root, next_id, out);
  out += "}\n";
  return out;
}

}  // namespace regdev
