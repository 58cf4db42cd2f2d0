#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "regdev/csv.hpp"
#include "regdev/dataset.hpp"
#include "regdev/error.hpp"

namespace regdev::klassen {

// Klassen typology: each region is compared with its province on growth
// (r_i vs r) and on contribution share (y_i vs y), giving four quadrants.
enum class Quadrant : std::uint8_t { K1 = 0, K2 = 1, K3 = 2, K4 = 3 };

inline constexpr std::array<std::string_view, 4> kQuadrantNames = {"K1", "K2", "K3", "K4"};

inline std::string_view to_string(Quadrant q) { return kQuadrantNames[static_cast<std::size_t>(q)]; }

inline std::optional<Quadrant> parse_quadrant(std::string_view s) {
  for (std::size_t i = 0; i < kQuadrantNames.size(); ++i) {
    if (kQuadrantNames[i] == s) return static_cast<Quadrant>(i);
  }
  return std::nullopt;
}

inline std::vector<std::string> quadrant_labels() { return {kQuadrantNames.begin(), kQuadrantNames.end()}; }

/// Which of the two published quadrant layouts to apply.
///  - table1: K1 = faster growth with lower share, K3 = faster growth with higher share.
///  - prose:  the textbook layout, K1 and K3 swapped.
/// Both agree on K2 (slower, higher share) and K4 (slower, lower share).
enum class Mapping { table1, prose };

inline std::string_view to_string(Mapping m) { return m == Mapping::table1 ? "table1" : "prose"; }

inline std::optional<Mapping> parse_mapping(std::string_view s) {
  if (s == "table1") return Mapping::table1;
  if (s == "prose") return Mapping::prose;
  return std::nullopt;
}

/// Year-over-year growth in percent.
inline double growth_rate(double current, double previous) {
  if (!(previous > 0)) throw DomainError("growth rate needs a positive previous value");
  return (current - previous) / previous * 100.0;
}

/// Two-year share of an indicator in the two-year total, in percent.
inline double contribution(double current, double previous, double total_current, double total_previous) {
  const double denom = total_current + total_previous;
  if (!(denom > 0)) throw DomainError("contribution needs a positive two-year total");
  return (current + previous) / denom * 100.0;
}

// Ties on either axis count as "not greater".
inline Quadrant classify_quadrant(double r_i, double r, double y_i, double y, Mapping mapping = Mapping::table1) {
  if (!std::isfinite(r_i) || !std::isfinite(r) || !std::isfinite(y_i) || !std::isfinite(y)) {
    throw DomainError("quadrant classification needs finite inputs");
  }
  const bool faster = r_i > r;
  const bool larger = y_i > y;
  if (faster && larger) return mapping == Mapping::table1 ? Quadrant::K3 : Quadrant::K1;
  if (faster) return mapping == Mapping::table1 ? Quadrant::K1 : Quadrant::K3;
  if (larger) return Quadrant::K2;
  return Quadrant::K4;
}

/// Majority vote; ties go to the lower quadrant index.
inline Quadrant aggregate_district(std::span<const Quadrant> quadrants) {
  if (quadrants.empty()) throw DomainError("cannot aggregate an empty quadrant list");
  std::array<std::size_t, 4> votes{};
  for (auto q : quadrants) ++votes[static_cast<std::size_t>(q)];
  const auto best = std::max_element(votes.begin(), votes.end());  // first maximum
  return static_cast<Quadrant>(best - votes.begin());
}

enum class Level { district, province };

inline std::string_view to_string(Level l) { return l == Level::district ? "district" : "province"; }

struct PanelEntry {
  Level level = Level::district;
  std::string region;
  std::string indicator;
  int year = 0;
  double value = 0.0;
};

/// Long-form GDP values keyed by (level, region, indicator, year). Regions and
/// indicators keep their order of first appearance.
class GdpPanel {
 public:
  GdpPanel() = default;

  explicit GdpPanel(std::span<const PanelEntry> entries) {
    for (const auto& e : entries) add(e);
  }

  void add(const PanelEntry& e) {
    if (e.region.empty() || e.indicator.empty()) throw DataError("panel entry with empty region or indicator");
    if (!std::isfinite(e.value) || e.value < 0) {
      throw DataError("panel value for " + e.region + "/" + e.indicator + "/" + std::to_string(e.year) +
                      " must be finite and non-negative");
    }
    const Key key{e.level, e.region, e.indicator, e.year};
    if (!values_.emplace(key, e.value).second) {
      throw DataError("duplicate panel entry " + std::string(to_string(e.level)) + "/" + e.region + "/" +
                      e.indicator + "/" + std::to_string(e.year));
    }
    remember(regions_, {e.level, e.region});
    remember(indicators_, e.indicator);
    if (std::find(years_.begin(), years_.end(), e.year) == years_.end()) years_.push_back(e.year);
  }

  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::string>& indicators() const { return indicators_; }
  const std::vector<int>& years() const { return years_; }

  std::vector<std::string> regions(Level level) const {
    std::vector<std::string> out;
    for (const auto& [l, name] : regions_) {
      if (l == level) out.push_back(name);
    }
    return out;
  }

  std::optional<double> value(Level level, const std::string& region, const std::string& indicator, int year) const {
    const auto it = values_.find(Key{level, region, indicator, year});
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  /// Value that must exist; throws DataError naming the missing key otherwise.
  double at(Level level, const std::string& region, const std::string& indicator, int year) const {
    const auto v = value(level, region, indicator, year);
    if (!v) {
      throw DataError("panel is missing " + std::string(to_string(level)) + "/" + region + "/" + indicator + "/" +
                      std::to_string(year));
    }
    return *v;
  }

  /// Sum over all panel indicators for one region and year.
  double total(Level level, const std::string& region, int year) const {
    double sum = 0.0;
    for (const auto& ind : indicators_) sum += at(level, region, ind, year);
    return sum;
  }

  /// Throws unless every (region, year) present carries every indicator.
  void require_rectangular() const {
    for (const auto& [level, region] : regions_) {
      for (int year : years_) {
        std::size_t present = 0;
        for (const auto& ind : indicators_) present += value(level, region, ind, year).has_value();
        if (present != 0 && present != indicators_.size()) {
          throw DataError("panel is not rectangular: " + region + " in " + std::to_string(year) + " has " +
                          std::to_string(present) + " of " + std::to_string(indicators_.size()) + " indicators");
        }
      }
    }
  }

 private:
  using Key = std::tuple<Level, std::string, std::string, int>;

  template <typename T>
  static void remember(std::vector<T>& seen, const T& item) {
    if (std::find(seen.begin(), seen.end(), item) == seen.end()) seen.push_back(item);
  }

  std::map<Key, double> values_;
  std::vector<std::pair<Level, std::string>> regions_;
  std::vector<std::string> indicators_;
  std::vector<int> years_;
};

/// Reads `level,region,indicator,year,value` rows (any column order).
inline GdpPanel parse_panel_csv(std::string_view text, char delimiter = ',') {
  const auto rows = csv::read_rows(text, delimiter);
  if (rows.empty()) throw DataError("empty panel file");
  const auto& head = rows.front().fields;
  auto column = [&](std::string_view name) {
    const auto it = std::find(head.begin(), head.end(), name);
    if (it == head.end()) throw DataError("panel header lacks column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - head.begin());
  };
  const auto c_level = column("level");
  const auto c_region = column("region");
  const auto c_indicator = column("indicator");
  const auto c_year = column("year");
  const auto c_value = column("value");

  GdpPanel panel;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = "line " + std::to_string(row.line) + ": ";
    if (row.fields.size() != head.size()) {
      throw DataError(where + "expected " + std::to_string(head.size()) + " fields, found " +
                      std::to_string(row.fields.size()));
    }
    PanelEntry e;
    const auto& level = row.fields[c_level];
    if (level == "district") {
      e.level = Level::district;
    } else if (level == "province") {
      e.level = Level::province;
    } else {
      throw DataError(where + "level must be 'district' or 'province', got '" + level + "'");
    }
    e.region = row.fields[c_region];
    e.indicator = row.fields[c_indicator];
    const auto year = csv::parse_number(row.fields[c_year]);
    if (!year || *year != std::floor(*year) || std::abs(*year) > 1e6) {
      throw DataError(where + "year '" + row.fields[c_year] + "' is not an integer");
    }
    e.year = static_cast<int>(*year);
    const auto value = csv::parse_number(row.fields[c_value]);
    if (!value) throw DataError(where + "value '" + row.fields[c_value] + "' is not a number");
    e.value = *value;
    try {
      panel.add(e);
    } catch (const DataError& err) {
      throw DataError(where + err.what());
    }
  }
  return panel;
}

inline std::string write_panel_csv(std::span<const PanelEntry> entries) {
  std::string out = "level,region,indicator,year,value\n";
  for (const auto& e : entries) {
    out += std::string(to_string(e.level)) + "," + csv::quote(e.region) + "," + csv::quote(e.indicator) + "," +
           std::to_string(e.year) + "," + csv::format_number(e.value) + "\n";
  }
  return out;
}

struct YearPair {
  int previous = 0;
  int current = 0;
};

struct KlassenRow {
  std::string district;
  std::string indicator;
  YearPair years;
  double r_i = 0.0;
  double r = 0.0;
  double y_i = 0.0;
  double y = 0.0;
  Quadrant quadrant = Quadrant::K4;
};

/// Schema of every labeled Klassen dataset: four numeric features, class K1..K4.
inline Header klassen_header() {
  Header h;
  h.attributes = {Attribute::numeric("r_i"), Attribute::numeric("r"), Attribute::numeric("y_i"),
                  Attribute::numeric("y")};
  h.class_attribute = Attribute::nominal("class", quadrant_labels());
  return h;
}

inline LabeledDataset to_dataset(std::span<const KlassenRow> rows) {
  LabeledDataset ds(klassen_header());
  for (const auto& row : rows) {
    ds.add(Record{{row.r_i, row.r, row.y_i, row.y}, static_cast<std::size_t>(row.quadrant)});
  }
  return ds;
}

struct LabeledPanel {
  LabeledDataset dataset;
  std::vector<KlassenRow> rows;
};

/// One row per (district, indicator): district growth and contribution for
/// that indicator against the province's, plus the resulting quadrant.
inline LabeledPanel label_panel(const GdpPanel& districts, const GdpPanel& province, YearPair years,
                                Mapping mapping = Mapping::table1) {
  districts.require_rectangular();
  province.require_rectangular();

  const auto district_names = districts.regions(Level::district);
  if (district_names.empty()) throw DataError("district panel has no district-level regions");
  const auto province_names = province.regions(Level::province);
  if (province_names.size() != 1) {
    throw DataError("province panel must hold exactly one province-level region, found " +
                    std::to_string(province_names.size()));
  }
  const auto& prov = province_names.front();

  const auto& indicators = districts.indicators();
  {
    auto a = indicators;
    auto b = province.indicators();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw DataError("district and province panels use different indicator sets");
  }

  const double prov_total_now = province.total(Level::province, prov, years.current);
  const double prov_total_before = province.total(Level::province, prov, years.previous);

  LabeledPanel out{LabeledDataset(klassen_header()), {}};
  out.rows.reserve(district_names.size() * indicators.size());
  for (const auto& district : district_names) {
    const double total_now = districts.total(Level::district, district, years.current);
    const double total_before = districts.total(Level::district, district, years.previous);
    for (const auto& ind : indicators) {
      const double now = districts.at(Level::district, district, ind, years.current);
      const double before = districts.at(Level::district, district, ind, years.previous);
      const double p_now = province.at(Level::province, prov, ind, years.current);
      const double p_before = province.at(Level::province, prov, ind, years.previous);

      KlassenRow row;
      row.district = district;
      row.indicator = ind;
      row.years = years;
      try {
        row.r_i = growth_rate(now, before);
        row.r = growth_rate(p_now, p_before);
        row.y_i = contribution(now, before, total_now, total_before);
        row.y = contribution(p_now, p_before, prov_total_now, prov_total_before);
      } catch (const DomainError& e) {
        throw DataError(district + "/" + ind + ": " + e.what());
      }
      row.quadrant = classify_quadrant(row.r_i, row.r, row.y_i, row.y, mapping);
      out.dataset.add(Record{{row.r_i, row.r, row.y_i, row.y}, static_cast<std::size_t>(row.quadrant)});
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

/// `district,indicator,r_i,r,y_i,y,class`
inline std::string write_rows_csv(std::span<const KlassenRow> rows) {
  std::string out = "district,indicator,r_i,r,y_i,y,class\n";
  for (const auto& row : rows) {
    out += csv::quote(row.district) + "," + csv::quote(row.indicator) + "," + csv::format_number(row.r_i) + "," +
           csv::format_number(row.r) + "," + csv::format_number(row.y_i) + "," + csv::format_number(row.y) + "," +
           std::string(to_string(row.quadrant)) + "\n";
  }
  return out;
}

/// Inverse of write_rows_csv. Year information is not part of the file.
inline std::vector<KlassenRow> parse_rows_csv(std::string_view text) {
  const auto rows = csv::read_rows(text);
  if (rows.empty()) throw DataError("empty Klassen row file");
  const auto& head = rows.front().fields;
  const std::vector<std::string> expected = {"district", "indicator", "r_i", "r", "y_i", "y", "class"};
  if (head != expected) throw DataError("Klassen row file header must be district,indicator,r_i,r,y_i,y,class");

  std::vector<KlassenRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    const std::string where = "line " + std::to_string(rows[i].line) + ": ";
    if (f.size() != expected.size()) throw DataError(where + "expected 7 fields");
    KlassenRow row;
    row.district = f[0];
    row.indicator = f[1];
    double* targets[] = {&row.r_i, &row.r, &row.y_i, &row.y};
    for (std::size_t c = 0; c < 4; ++c) {
      const auto v = csv::parse_number(f[2 + c]);
      if (!v || !std::isfinite(*v)) throw DataError(where + "'" + f[2 + c] + "' is not a finite number");
      *targets[c] = *v;
    }
    const auto q = parse_quadrant(f[6]);
    if (!q) throw DataError(where + "class must be one of K1..K4");
    row.quadrant = *q;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace regdev::klassen
