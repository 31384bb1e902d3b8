#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "popabm/migration.hpp"
#include "popabm/region.hpp"
#include "popabm/types.hpp"

namespace popabm {

enum class ParamKind { Death, Emigration, Birth, InternalMigration, Immigration };

std::string_view kind_name(ParamKind kind);
ParamKind parse_kind(std::string_view name);
constexpr bool is_probability(ParamKind kind) { return kind != ParamKind::Immigration; }

// One CSV row. `sex` empty means the row applies to both sexes ("all").
struct ParameterEntry {
  int year = 0;
  std::string region;
  std::optional<Sex> sex;
  int age = 0;
  double value = 0.0;
};

// Dense (year, region, sex, age) lookup at one regional resolution level.
// Probabilities for the demographic event kinds, integer counts for
// immigration. Immutable after construction.
class ParameterTable {
 public:
  // Verifies that every (year, region, sex, age) cell of the declared domain
  // is present: contiguous years, every region that appears, both sexes, and
  // ages 0..max age that appears.
  static ParameterTable build(ParamKind kind, const RegionHierarchy& regions,
                              std::span<const ParameterEntry> entries, std::string_view source = {});

  static ParameterTable constant(ParamKind kind, const RegionHierarchy& regions, RegionLevel level,
                                 int first_year, int last_year, int max_age, double value);

  ParamKind kind() const { return kind_; }
  RegionLevel level() const { return level_; }
  int first_year() const { return first_year_; }
  int last_year() const { return last_year_; }
  int max_age() const { return max_age_; }
  const std::vector<RegionId>& rows() const { return rows_; }

  bool covers_year(int year) const { return year >= first_year_ && year <= last_year_; }
  // True when the region or one of its ancestors is a row of this table.
  bool covers_region(RegionId region) const;

  // Ages above max_age read the max_age row. Throws CoverageError for
  // uncovered years or regions.
  double lookup(int year, RegionId region, Sex sex, int age) const;
  double lookup(const RegionHierarchy& regions, int year, std::string_view region_code, Sex sex,
                int age) const {
    return lookup(year, regions.id(region_code), sex, age);
  }

  // Direct cell access by table row (index into rows()).
  double& cell(int year, std::size_t row, Sex sex, int age);

  std::vector<ParameterEntry> entries(const RegionHierarchy& regions) const;

 private:
  std::size_t index(int year, std::size_t row, Sex sex, int age) const;

  ParamKind kind_ = ParamKind::Death;
  RegionLevel level_ = RegionLevel::Country;
  int first_year_ = 0;
  int last_year_ = -1;
  int max_age_ = 0;
  std::vector<RegionId> rows_;
  std::vector<int> row_of_region_;  // indexed by RegionId; -1 when unmapped
  std::vector<double> values_;
};

// Every table a run can consult. A missing probability table disables that
// event kind; a missing immigration table means no immigration.
struct ParameterSet {
  std::optional<ParameterTable> death;
  std::optional<ParameterTable> emigration;
  std::optional<ParameterTable> birth;
  std::optional<ParameterTable> internal_migration;
  std::optional<ParameterTable> immigration;
  std::optional<DestinationModel> destinations;

  const ParameterTable* table(ParamKind kind) const;
  std::optional<ParameterTable>& slot(ParamKind kind);
};

// Reads kind,year,region,sex,age,value. All kinds may share one file.
std::vector<ParameterTable> read_parameter_csv(const std::filesystem::path& path,
                                               const RegionHierarchy& regions);
void write_parameter_csv(const std::filesystem::path& path,
                         std::span<const ParameterTable* const> tables,
                         const RegionHierarchy& regions);
void write_parameter_rows(std::ostream& out, ParamKind kind, std::span<const ParameterEntry> rows,
                          bool header);

}  // namespace popabm
