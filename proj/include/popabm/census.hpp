#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "popabm/region.hpp"
#include "popabm/types.hpp"

namespace popabm {

enum class Metric : int { P = 0, B, D, E, I, ImIn, ImOut };
inline constexpr int kMetricCount = 7;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics{Metric::P, Metric::B, Metric::D, Metric::E,
                                                              Metric::I, Metric::ImIn, Metric::ImOut};

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

struct CensusKey {
  int year = 0;
  std::string region;
  Sex sex = Sex::Male;
  int age = 0;  // single age, or age-class index in aggregated tables

  friend auto operator<=>(const CensusKey&, const CensusKey&) = default;
  friend bool operator==(const CensusKey&, const CensusKey&) = default;
};

// Sparse counts per metric. Absent cells read as zero.
template <class T>
class CensusTable {
 public:
  using Cells = std::map<CensusKey, T>;

  T get(Metric m, const CensusKey& key) const {
    const auto& c = cells_[static_cast<std::size_t>(m)];
    const auto it = c.find(key);
    return it == c.end() ? T{} : it->second;
  }
  void add(Metric m, const CensusKey& key, T value) { cells_[static_cast<std::size_t>(m)][key] += value; }
  void set(Metric m, const CensusKey& key, T value) { cells_[static_cast<std::size_t>(m)][key] = value; }

  const Cells& cells(Metric m) const { return cells_[static_cast<std::size_t>(m)]; }
  Cells& cells(Metric m) { return cells_[static_cast<std::size_t>(m)]; }

  // Sum over every cell of metric m in `year`.
  T total(Metric m, int year) const {
    T sum{};
    for (const auto& [k, v] : cells(m))
      if (k.year == year) sum += v;
    return sum;
  }

  friend bool operator==(const CensusTable&, const CensusTable&) = default;

 private:
  std::array<Cells, kMetricCount> cells_;
};

using Census = CensusTable<std::int64_t>;
using RealCensus = CensusTable<double>;

RealCensus to_real(const Census& census);

// Ordered, contiguous age intervals starting at 0; the last is open-ended.
class AgeClassScheme {
 public:
  explicit AgeClassScheme(std::vector<int> lower_bounds);
  static AgeClassScheme single_years(int max_age);
  // {[0,19],[20,39],[40,59],[60,79],80+}
  static AgeClassScheme twenty_year();
  // Parses "0,20,40,60,80" style lower bounds.
  static AgeClassScheme parse(std::string_view spec);

  std::size_t size() const { return lower_.size(); }
  int class_of(int age) const;
  std::string label(std::size_t index) const;
  std::optional<std::size_t> find_label(std::string_view label) const;
  const std::vector<int>& lower_bounds() const { return lower_; }

 private:
  std::vector<int> lower_;
};

// Sums cells into age classes and, when a hierarchy is given, into regions at
// `level`. Regions coarser than `level` or unknown to the hierarchy keep their
// code.
template <class T>
CensusTable<T> aggregate(const CensusTable<T>& census, const AgeClassScheme& scheme,
                         const RegionHierarchy* regions = nullptr,
                         RegionLevel level = RegionLevel::Country);

// metric,year,region,sex,age,count
void write_census_csv(std::ostream& out, const Census& census);
void write_census_csv(std::ostream& out, const RealCensus& census);
void write_census_csv(const std::filesystem::path& path, const Census& census);
void write_census_csv(const std::filesystem::path& path, const RealCensus& census);
// metric,year,region,sex,age_class,count with class labels from `scheme`.
void write_aggregated_csv(std::ostream& out, const RealCensus& aggregated, const AgeClassScheme& scheme);

// Reads either layout; age_class labels are mapped through `scheme`.
RealCensus read_census_csv(const std::filesystem::path& path, const AgeClassScheme* scheme = nullptr);

}  // namespace popabm
