#include "popabm/census.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "popabm/csv.hpp"
#include "popabm/errors.hpp"

namespace popabm {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::P: return "P";
    case Metric::B: return "B";
    case Metric::D: return "D";
    case Metric::E: return "E";
    case Metric::I: return "I";
    case Metric::ImIn: return "IM_IN";
    case Metric::ImOut: return "IM_OUT";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics)
    if (metric_name(m) == name) return m;
  throw InputError("unknown census metric '" + std::string(name) + "'");
}

RealCensus to_real(const Census& census) {
  RealCensus out;
  for (Metric m : kAllMetrics)
    for (const auto& [k, v] : census.cells(m)) out.set(m, k, static_cast<double>(v));
  return out;
}

AgeClassScheme::AgeClassScheme(std::vector<int> lower_bounds) : lower_(std::move(lower_bounds)) {
  if (lower_.empty() || lower_.front() != 0) throw InputError("age classes must start at age 0");
  for (std::size_t i = 1; i < lower_.size(); ++i)
    if (lower_[i] <= lower_[i - 1]) throw InputError("age class bounds must be strictly increasing");
}

AgeClassScheme AgeClassScheme::single_years(int max_age) {
  std::vector<int> b(static_cast<std::size_t>(max_age) + 1);
  for (int a = 0; a <= max_age; ++a) b[static_cast<std::size_t>(a)] = a;
  return AgeClassScheme(std::move(b));
}

AgeClassScheme AgeClassScheme::twenty_year() { return AgeClassScheme({0, 20, 40, 60, 80}); }

AgeClassScheme AgeClassScheme::parse(std::string_view spec) {
  std::vector<int> b;
  for (const auto& f : csv::split(spec, ',')) {
    try {
      b.push_back(std::stoi(f));
    } catch (const std::exception&) {
      throw InputError("malformed age class list '" + std::string(spec) + "'");
    }
  }
  return AgeClassScheme(std::move(b));
}

int AgeClassScheme::class_of(int age) const {
  const auto it = std::upper_bound(lower_.begin(), lower_.end(), age);
  return static_cast<int>(it - lower_.begin()) - 1;
}

std::string AgeClassScheme::label(std::size_t index) const {
  const int lo = lower_.at(index);
  if (index + 1 == lower_.size()) return std::to_string(lo) + "+";
  return std::to_string(lo) + "-" + std::to_string(lower_[index + 1] - 1);
}

std::optional<std::size_t> AgeClassScheme::find_label(std::string_view label) const {
  for (std::size_t i = 0; i < lower_.size(); ++i)
    if (this->label(i) == label) return i;
  return std::nullopt;
}

template <class T>
CensusTable<T> aggregate(const CensusTable<T>& census, const AgeClassScheme& scheme, const RegionHierarchy* regions,
                         RegionLevel level) {
  CensusTable<T> out;
  for (Metric m : kAllMetrics) {
    for (const auto& [k, v] : census.cells(m)) {
      CensusKey key{k.year, k.region, k.sex, scheme.class_of(k.age)};
      if (regions && regions->contains(k.region)) {
        if (const auto anc = regions->ancestor_at(regions->id(k.region), level)) key.region = regions->code(*anc);
      }
      out.add(m, key, v);
    }
  }
  return out;
}

template Census aggregate(const Census&, const AgeClassScheme&, const RegionHierarchy*, RegionLevel);
template RealCensus aggregate(const RealCensus&, const AgeClassScheme&, const RegionHierarchy*, RegionLevel);

namespace {

template <class T>
void write_rows(std::ostream& out, const CensusTable<T>& census, const AgeClassScheme* scheme) {
  out << "metric,year,region,sex," << (scheme ? "age_class" : "age") << ",count\n";
  for (Metric m : kAllMetrics) {
    for (const auto& [k, v] : census.cells(m)) {
      out << metric_name(m) << ',' << k.year << ',' << k.region << ',' << sex_code(k.sex) << ',';
      if (scheme) {
        out << scheme->label(static_cast<std::size_t>(k.age));
      } else {
        out << k.age;
      }
      if constexpr (std::is_integral_v<T>) {
        out << ',' << v << '\n';
      } else {
        out << ',' << csv::format_number(v) << '\n';
      }
    }
  }
}

template <class T>
void write_file(const std::filesystem::path& path, const CensusTable<T>& census) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_rows(out, census, static_cast<const AgeClassScheme*>(nullptr));
}

}  // namespace

void write_census_csv(std::ostream& out, const Census& census) { write_rows(out, census, nullptr); }
void write_census_csv(std::ostream& out, const RealCensus& census) { write_rows(out, census, nullptr); }
void write_census_csv(const std::filesystem::path& path, const Census& census) { write_file(path, census); }
void write_census_csv(const std::filesystem::path& path, const RealCensus& census) { write_file(path, census); }

void write_aggregated_csv(std::ostream& out, const RealCensus& aggregated, const AgeClassScheme& scheme) {
  write_rows(out, aggregated, &scheme);
}

RealCensus read_census_csv(const std::filesystem::path& path, const AgeClassScheme* scheme) {
  const auto table = csv::Table::read(path);
  const auto c_m = table.column("metric");
  const auto c_y = table.column("year");
  const auto c_r = table.column("region");
  const auto c_s = table.column("sex");
  const auto c_c = table.column("count");
  const bool by_class = table.has_column("age_class");
  if (by_class && !scheme) throw InputError(path.string() + ": aggregated census needs an age class scheme");
  const auto c_a = by_class ? table.column("age_class") : table.column("age");
  RealCensus out;
  for (const auto& row : table.rows()) {
    CensusKey key;
    key.year = static_cast<int>(table.integer(row, c_y));
    key.region = row.fields[c_r];
    const auto& s = row.fields[c_s];
    if (s == "m") {
      key.sex = Sex::Male;
    } else if (s == "f") {
      key.sex = Sex::Female;
    } else {
      throw InputError(table.where(row) + ": sex must be m or f");
    }
    if (by_class) {
      const auto idx = scheme->find_label(row.fields[c_a]);
      if (!idx) throw InputError(table.where(row) + ": unknown age class '" + row.fields[c_a] + "'");
      key.age = static_cast<int>(*idx);
    } else {
      key.age = static_cast<int>(table.integer(row, c_a));
      if (key.age < 0) throw InputError(table.where(row) + ": negative age");
    }
    const double v = table.number(row, c_c);
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError(table.where(row) + ": count must be non-negative");
    out.add(parse_metric(row.fields[c_m]), key, v);
  }
  return out;
}

}  // namespace popabm
