#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "regdev/csv.hpp"
#include "regdev/error.hpp"

namespace regdev {

enum class AttributeKind { numeric, nominal };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::numeric;
  std::vector<std::string> labels;  // nominal only

  static Attribute numeric(std::string name) { return {std::move(name), AttributeKind::numeric, {}}; }
  static Attribute nominal(std::string name, std::vector<std::string> labels) {
    return {std::move(name), AttributeKind::nominal, std::move(labels)};
  }

  bool is_numeric() const { return kind == AttributeKind::numeric; }
  bool is_nominal() const { return kind == AttributeKind::nominal; }

  std::optional<std::size_t> label_index(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) return i;
    }
    return std::nullopt;
  }

  bool operator==(const Attribute&) const = default;
};

/// Predictor attributes plus the nominal class attribute.
struct Header {
  std::vector<Attribute> attributes;
  Attribute class_attribute = Attribute::nominal("class", {});

  std::size_t num_attributes() const { return attributes.size(); }
  std::size_t num_classes() const { return class_attribute.labels.size(); }
  const std::string& class_name(std::size_t k) const { return class_attribute.labels.at(k); }

  std::optional<std::size_t> attribute_index(std::string_view name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      if (attributes[i].name == name) return i;
    }
    return std::nullopt;
  }

  // Throws DataError when names collide or label sets are malformed.
  void validate() const {
    std::set<std::string_view> names;
    auto check = [&](const Attribute& a) {
      if (a.name.empty()) throw DataError("attribute with empty name");
      if (!names.insert(a.name).second) throw DataError("duplicate attribute name '" + a.name + "'");
      if (a.is_nominal()) {
        if (a.labels.empty()) throw DataError("nominal attribute '" + a.name + "' has no labels");
        std::set<std::string_view> seen;
        for (const auto& l : a.labels) {
          if (!seen.insert(l).second) {
            throw DataError("nominal attribute '" + a.name + "' repeats label '" + l + "'");
          }
        }
      } else if (!a.labels.empty()) {
        throw DataError("numeric attribute '" + a.name + "' declares labels");
      }
    };
    for (const auto& a : attributes) check(a);
    if (!class_attribute.is_nominal()) throw DataError("class attribute must be nominal");
    check(class_attribute);
  }

  bool operator==(const Header&) const = default;
};

/// One instance. Nominal values are stored as the label index (as a double),
/// numeric values as themselves.
struct Record {
  std::vector<double> values;
  std::optional<std::size_t> label;

  bool operator==(const Record&) const = default;
};

class LabeledDataset {
 public:
  LabeledDataset() = default;

  explicit LabeledDataset(Header header, std::vector<Record> records = {}) : header_(std::move(header)) {
    header_.validate();
    records_.reserve(records.size());
    for (auto& r : records) add(std::move(r));
  }

  const Header& header() const { return header_; }
  const std::vector<Attribute>& schema() const { return header_.attributes; }
  const Attribute& class_attribute() const { return header_.class_attribute; }
  std::size_t num_classes() const { return header_.num_classes(); }

  std::span<const Record> records() const { return records_; }
  const Record& operator[](std::size_t i) const { return records_[i]; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  void add(Record r) {
    check_record(r);
    records_.push_back(std::move(r));
  }

  bool fully_labeled() const {
    return std::all_of(records_.begin(), records_.end(), [](const Record& r) { return r.label.has_value(); });
  }

  void require_labeled() const {
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (!records_[i].label) throw DataError("record " + std::to_string(i) + " has no class label");
    }
  }

  LabeledDataset subset(std::span<const std::size_t> indices) const {
    LabeledDataset out;
    out.header_ = header_;
    out.records_.reserve(indices.size());
    for (auto i : indices) out.records_.push_back(records_.at(i));
    return out;
  }

  /// Throws DataError when `r` does not conform to the header.
  void check_record(const Record& r) const {
    if (r.values.size() != header_.attributes.size()) {
      throw DataError("record has " + std::to_string(r.values.size()) + " values, schema has " +
                      std::to_string(header_.attributes.size()));
    }
    for (std::size_t j = 0; j < r.values.size(); ++j) {
      const double v = r.values[j];
      if (!std::isfinite(v)) throw DataError("non-finite value for attribute '" + header_.attributes[j].name + "'");
      const auto& a = header_.attributes[j];
      if (a.is_nominal() && (v < 0 || v != std::floor(v) || v >= static_cast<double>(a.labels.size()))) {
        throw DataError("value outside label set of attribute '" + a.name + "'");
      }
    }
    if (r.label && *r.label >= header_.num_classes()) {
      throw DataError("class label index out of range");
    }
  }

  bool operator==(const LabeledDataset&) const = default;

 private:
  Header header_;
  std::vector<Record> records_;
};

/// Per-class counts aligned with the class attribute's label order.
inline std::vector<std::size_t> class_distribution(const LabeledDataset& ds) {
  ds.require_labeled();
  std::vector<std::size_t> counts(ds.num_classes(), 0);
  for (const auto& r : ds.records()) ++counts[*r.label];
  return counts;
}

/// (records where pred holds, records where it does not), order preserved.
inline std::pair<LabeledDataset, LabeledDataset> split_by_predicate(
    const LabeledDataset& ds, const std::function<bool(const Record&)>& pred) {
  std::vector<std::size_t> yes;
  std::vector<std::size_t> no;
  for (std::size_t i = 0; i < ds.size(); ++i) (pred(ds[i]) ? yes : no).push_back(i);
  return {ds.subset(yes), ds.subset(no)};
}

/// Concatenates datasets with identical headers.
inline LabeledDataset concatenate(std::span<const LabeledDataset> parts) {
  if (parts.empty()) throw DataError("nothing to concatenate");
  LabeledDataset out(parts.front().header());
  for (const auto& p : parts) {
    if (!(p.header() == out.header())) throw DataError("cannot concatenate datasets with different schemas");
    for (const auto& r : p.records()) out.add(r);
  }
  return out;
}

struct CsvOptions {
  char delimiter = ',';
  std::string class_column = "class";
  // When set, fixes the class label set and its order. Otherwise the
  // observed labels are used, sorted.
  std::optional<std::vector<std::string>> class_labels;
};

namespace detail {

inline std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

inline void reject_missing(const std::string& token, std::size_t line, const std::string& column) {
  if (token.empty() || token == "?") {
    throw DataError(at_line(line) + "missing value in column '" + column + "'");
  }
}

inline std::vector<csv::Row> read_table(std::string_view text, char delimiter) {
  auto rows = csv::read_rows(text, delimiter);
  if (rows.empty()) throw DataError("empty input: a header row is required");
  const auto width = rows.front().fields.size();
  for (const auto& row : rows) {
    if (row.fields.size() != width) {
      throw DataError(at_line(row.line) + "expected " + std::to_string(width) + " fields, found " +
                      std::to_string(row.fields.size()));
    }
  }
  return rows;
}

}  // namespace detail

/// Parses a headed CSV table, inferring each column's kind: numeric when every
/// token parses as a number, nominal otherwise (labels sorted).
inline LabeledDataset parse_csv(std::string_view text, const CsvOptions& options = {}) {
  const auto rows = detail::read_table(text, options.delimiter);
  const auto& names = rows.front().fields;

  std::optional<std::size_t> class_col;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] == options.class_column) class_col = c;
  }
  if (!class_col) throw DataError("class column '" + options.class_column + "' not found in header");

  const std::size_t width = names.size();
  std::vector<bool> numeric(width, true);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < width; ++c) {
      const auto& tok = rows[i].fields[c];
      detail::reject_missing(tok, rows[i].line, names[c]);
      if (numeric[c] && !csv::parse_number(tok)) numeric[c] = false;
    }
  }
  numeric[*class_col] = false;

  Header header;
  std::vector<std::size_t> column_of;  // attribute index -> column
  for (std::size_t c = 0; c < width; ++c) {
    if (c == *class_col) continue;
    column_of.push_back(c);
    if (numeric[c]) {
      header.attributes.push_back(Attribute::numeric(names[c]));
    } else {
      std::set<std::string> labels;
      for (std::size_t i = 1; i < rows.size(); ++i) labels.insert(rows[i].fields[c]);
      header.attributes.push_back(Attribute::nominal(names[c], {labels.begin(), labels.end()}));
    }
  }
  if (options.class_labels) {
    header.class_attribute = Attribute::nominal(names[*class_col], *options.class_labels);
  } else {
    std::set<std::string> labels;
    for (std::size_t i = 1; i < rows.size(); ++i) labels.insert(rows[i].fields[*class_col]);
    if (labels.empty()) throw DataError("no records: class label set cannot be inferred");
    header.class_attribute = Attribute::nominal(names[*class_col], {labels.begin(), labels.end()});
  }
  header.validate();

  LabeledDataset ds(header);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    Record rec;
    rec.values.reserve(column_of.size());
    for (std::size_t j = 0; j < column_of.size(); ++j) {
      const auto& tok = row.fields[column_of[j]];
      const auto& attr = header.attributes[j];
      if (attr.is_numeric()) {
        const double v = *csv::parse_number(tok);
        if (!std::isfinite(v)) {
          throw DataError(detail::at_line(row.line) + "non-finite number '" + tok + "' in column '" + attr.name + "'");
        }
        rec.values.push_back(v);
      } else {
        rec.values.push_back(static_cast<double>(*attr.label_index(tok)));
      }
    }
    const auto& cls = row.fields[*class_col];
    const auto k = header.class_attribute.label_index(cls);
    if (!k) throw DataError(detail::at_line(row.line) + "class label '" + cls + "' not in the declared label set");
    rec.label = *k;
    ds.add(std::move(rec));
  }
  return ds;
}

/// Parses a CSV table against a fixed header (e.g. a trained model's schema).
/// Every attribute column must be present by name; the class column is
/// optional, and records are unlabeled without it. Other columns are an error.
inline LabeledDataset parse_csv_as(std::string_view text, const Header& header, char delimiter = ',') {
  const auto rows = detail::read_table(text, delimiter);
  const auto& names = rows.front().fields;

  std::vector<std::optional<std::size_t>> column_of(header.num_attributes());
  std::optional<std::size_t> class_col;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] == header.class_attribute.name) {
      class_col = c;
      continue;
    }
    const auto a = header.attribute_index(names[c]);
    if (!a) throw DataError("schema mismatch: unexpected column '" + names[c] + "'");
    if (column_of[*a]) throw DataError("schema mismatch: duplicate column '" + names[c] + "'");
    column_of[*a] = c;
  }
  for (std::size_t a = 0; a < header.num_attributes(); ++a) {
    if (!column_of[a]) throw DataError("schema mismatch: missing column '" + header.attributes[a].name + "'");
  }

  LabeledDataset ds(header);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    Record rec;
    for (std::size_t a = 0; a < header.num_attributes(); ++a) {
      const auto& attr = header.attributes[a];
      const auto& tok = row.fields[*column_of[a]];
      detail::reject_missing(tok, row.line, attr.name);
      if (attr.is_numeric()) {
        const auto v = csv::parse_number(tok);
        if (!v) throw DataError(detail::at_line(row.line) + "'" + tok + "' is not a number (column '" + attr.name + "')");
        if (!std::isfinite(*v)) throw DataError(detail::at_line(row.line) + "non-finite number in column '" + attr.name + "'");
        rec.values.push_back(*v);
      } else {
        const auto k = attr.label_index(tok);
        if (!k) throw DataError(detail::at_line(row.line) + "label '" + tok + "' not declared for '" + attr.name + "'");
        rec.values.push_back(static_cast<double>(*k));
      }
    }
    if (class_col) {
      const auto& tok = row.fields[*class_col];
      detail::reject_missing(tok, row.line, header.class_attribute.name);
      const auto k = header.class_attribute.label_index(tok);
      if (!k) throw DataError(detail::at_line(row.line) + "class label '" + tok + "' not declared");
      rec.label = *k;
    }
    ds.add(std::move(rec));
  }
  return ds;
}

/// Header row then one row per record; the class column is last. Numbers are
/// written in shortest round-trip form. The class column is omitted when no
/// record is labeled.
inline std::string write_csv(const LabeledDataset& ds, char delimiter = ',') {
  const bool with_class =
      ds.empty() || std::any_of(ds.records().begin(), ds.records().end(), [](const Record& r) { return r.label.has_value(); });
  std::string out;
  auto sep = [&](bool first) {
    if (!first) out.push_back(delimiter);
  };
  for (std::size_t j = 0; j < ds.schema().size(); ++j) {
    sep(j == 0);
    out += csv::quote(ds.schema()[j].name, delimiter);
  }
  if (with_class) {
    sep(ds.schema().empty());
    out += csv::quote(ds.class_attribute().name, delimiter);
  }
  out.push_back('\n');
  for (const auto& r : ds.records()) {
    for (std::size_t j = 0; j < r.values.size(); ++j) {
      sep(j == 0);
      const auto& a = ds.schema()[j];
      out += a.is_numeric() ? csv::format_number(r.values[j])
                            : csv::quote(a.labels[static_cast<std::size_t>(r.values[j])], delimiter);
    }
    if (with_class) {
      sep(r.values.empty());
      if (r.label) out += csv::quote(ds.class_attribute().labels[*r.label], delimiter);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace regdev
