#include "popabm/parameter_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "popabm/csv.hpp"
#include "popabm/errors.hpp"

namespace popabm {

std::string_view kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::Death: return "death";
    case ParamKind::Emigration: return "emigration";
    case ParamKind::Birth: return "birth";
    case ParamKind::InternalMigration: return "internal_migration";
    case ParamKind::Immigration: return "immigration";
  }
  return "?";
}

ParamKind parse_kind(std::string_view name) {
  for (auto k : {ParamKind::Death, ParamKind::Emigration, ParamKind::Birth,
                 ParamKind::InternalMigration, ParamKind::Immigration}) {
    if (kind_name(k) == name) return k;
  }
  throw InputError("unknown parameter kind '" + std::string(name) + "'");
}

namespace {

void check_value(ParamKind kind, double value, const std::string& where) {
  if (!std::isfinite(value)) throw InputError(where + ": non-finite value");
  if (is_probability(kind)) {
    if (value < 0.0 || value > 1.0) {
      throw InputError(where + ": probability " + csv::format_number(value) + " outside [0,1]");
    }
  } else if (value < 0.0 || value != std::floor(value)) {
    throw InputError(where + ": immigration count must be a non-negative integer");
  }
}

std::vector<int> map_regions(const RegionHierarchy& regions, RegionLevel level,
                             const std::vector<RegionId>& rows) {
  std::vector<int> row_of(regions.size(), -1);
  for (std::size_t id = 0; id < regions.size(); ++id) {
    const auto anc = regions.ancestor_at(static_cast<RegionId>(id), level);
    if (!anc) continue;
    const auto it = std::find(rows.begin(), rows.end(), *anc);
    if (it != rows.end()) row_of[id] = static_cast<int>(it - rows.begin());
  }
  return row_of;
}

}  // namespace

ParameterTable ParameterTable::build(ParamKind kind, const RegionHierarchy& regions,
                                     std::span<const ParameterEntry> entries, std::string_view source) {
  const std::string src = source.empty() ? std::string(kind_name(kind)) : std::string(source);
  if (entries.empty()) throw InputError(src + ": no rows for kind " + std::string(kind_name(kind)));

  ParameterTable t;
  t.kind_ = kind;
  int lo = entries.front().year, hi = lo, max_age = 0;
  std::set<RegionId> seen;
  std::optional<RegionLevel> level;
  for (const auto& e : entries) {
    lo = std::min(lo, e.year);
    hi = std::max(hi, e.year);
    if (e.age < 0) throw InputError(src + ": negative age");
    max_age = std::max(max_age, e.age);
    const RegionId id = regions.id(e.region);
    if (level && *level != regions.level(id)) {
      throw InputError(src + ": " + std::string(kind_name(kind)) +
                       " rows mix regional resolution levels (" + e.region + ")");
    }
    level = regions.level(id);
    seen.insert(id);
  }
  t.level_ = *level;
  t.first_year_ = lo;
  t.last_year_ = hi;
  t.max_age_ = max_age;
  t.rows_.assign(seen.begin(), seen.end());
  t.row_of_region_ = map_regions(regions, t.level_, t.rows_);
  const std::size_t cells = static_cast<std::size_t>(hi - lo + 1) * t.rows_.size() * kSexCount *
                            static_cast<std::size_t>(max_age + 1);
  t.values_.assign(cells, 0.0);
  std::vector<char> filled(cells, 0);

  for (const auto& e : entries) {
    check_value(kind, e.value, src);
    const auto row = static_cast<std::size_t>(t.row_of_region_[static_cast<std::size_t>(regions.id(e.region))]);
    for (Sex s : {Sex::Male, Sex::Female}) {
      if (e.sex && *e.sex != s) continue;
      const auto idx = t.index(e.year, row, s, e.age);
      if (filled[idx]) {
        throw InputError(src + ": duplicate " + std::string(kind_name(kind)) + " cell year " +
                         std::to_string(e.year) + " region " + e.region + " sex " +
                         std::string(sex_code(s)) + " age " + std::to_string(e.age));
      }
      t.values_[idx] = e.value;
      filled[idx] = 1;
    }
  }
  for (int y = lo; y <= hi; ++y) {
    for (std::size_t r = 0; r < t.rows_.size(); ++r) {
      for (Sex s : {Sex::Male, Sex::Female}) {
        for (int a = 0; a <= max_age; ++a) {
          if (!filled[t.index(y, r, s, a)]) {
            throw CoverageError(src + ": " + std::string(kind_name(kind)) + " table has no value for year " +
                                std::to_string(y) + " region " + regions.code(t.rows_[r]) + " sex " +
                                std::string(sex_code(s)) + " age " + std::to_string(a));
          }
        }
      }
    }
  }
  return t;
}

ParameterTable ParameterTable::constant(ParamKind kind, const RegionHierarchy& regions,
                                        RegionLevel level, int first_year, int last_year, int max_age,
                                        double value) {
  if (last_year < first_year || max_age < 0) throw InputError("empty parameter domain");
  check_value(kind, value, std::string(kind_name(kind)));
  ParameterTable t;
  t.kind_ = kind;
  t.level_ = level;
  t.first_year_ = first_year;
  t.last_year_ = last_year;
  t.max_age_ = max_age;
  t.rows_ = regions.regions_at(level);
  if (t.rows_.empty()) throw InputError("no regions at level " + std::string(level_name(level)));
  t.row_of_region_ = map_regions(regions, level, t.rows_);
  t.values_.assign(static_cast<std::size_t>(last_year - first_year + 1) * t.rows_.size() * kSexCount *
                       static_cast<std::size_t>(max_age + 1),
                   value);
  return t;
}

bool ParameterTable::covers_region(RegionId region) const {
  return region >= 0 && static_cast<std::size_t>(region) < row_of_region_.size() &&
         row_of_region_[static_cast<std::size_t>(region)] >= 0;
}

std::size_t ParameterTable::index(int year, std::size_t row, Sex sex, int age) const {
  return ((static_cast<std::size_t>(year - first_year_) * rows_.size() + row) * kSexCount +
          static_cast<std::size_t>(index_of(sex))) *
             static_cast<std::size_t>(max_age_ + 1) +
         static_cast<std::size_t>(age);
}

double ParameterTable::lookup(int year, RegionId region, Sex sex, int age) const {
  if (!covers_year(year)) {
    throw CoverageError(std::string(kind_name(kind_)) + " table covers years " +
                        std::to_string(first_year_) + ".." + std::to_string(last_year_) +
                        ", queried " + std::to_string(year));
  }
  if (!covers_region(region)) {
    throw CoverageError(std::string(kind_name(kind_)) + " table does not cover region id " +
                        std::to_string(region));
  }
  const auto row = static_cast<std::size_t>(row_of_region_[static_cast<std::size_t>(region)]);
  return values_[index(year, row, sex, std::clamp(age, 0, max_age_))];
}

double& ParameterTable::cell(int year, std::size_t row, Sex sex, int age) {
  if (!covers_year(year) || row >= rows_.size() || age < 0 || age > max_age_) {
    throw CoverageError("parameter cell outside table domain");
  }
  return values_[index(year, row, sex, age)];
}

std::vector<ParameterEntry> ParameterTable::entries(const RegionHierarchy& regions) const {
  std::vector<ParameterEntry> out;
  out.reserve(values_.size());
  for (int y = first_year_; y <= last_year_; ++y)
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (Sex s : {Sex::Male, Sex::Female})
        for (int a = 0; a <= max_age_; ++a)
          out.push_back({y, regions.code(rows_[r]), s, a, values_[index(y, r, s, a)]});
  return out;
}

const ParameterTable* ParameterSet::table(ParamKind kind) const {
  const std::optional<ParameterTable>* t = nullptr;
  switch (kind) {
    case ParamKind::Death: t = &death; break;
    case ParamKind::Emigration: t = &emigration; break;
    case ParamKind::Birth: t = &birth; break;
    case ParamKind::InternalMigration: t = &internal_migration; break;
    case ParamKind::Immigration: t = &immigration; break;
  }
  return t && t->has_value() ? &**t : nullptr;
}

std::optional<ParameterTable>& ParameterSet::slot(ParamKind kind) {
  switch (kind) {
    case ParamKind::Death: return death;
    case ParamKind::Emigration: return emigration;
    case ParamKind::Birth: return birth;
    case ParamKind::InternalMigration: return internal_migration;
    case ParamKind::Immigration: break;
  }
  return immigration;
}

std::vector<ParameterTable> read_parameter_csv(const std::filesystem::path& path,
                                               const RegionHierarchy& regions) {
  const auto table = csv::Table::read(path);
  const auto c_kind = table.column("kind");
  const auto c_year = table.column("year");
  const auto c_region = table.column("region");
  const auto c_sex = table.column("sex");
  const auto c_age = table.column("age");
  const auto c_value = table.column("value");

  std::map<ParamKind, std::vector<ParameterEntry>> by_kind;
  for (const auto& row : table.rows()) {
    ParameterEntry e;
    ParamKind kind;
    try {
      kind = parse_kind(row.fields[c_kind]);
      if (!regions.contains(row.fields[c_region])) {
        throw InputError("unknown region code '" + row.fields[c_region] + "'");
      }
    } catch (const InputError& err) {
      throw InputError(table.where(row) + ": " + err.what());
    }
    e.year = static_cast<int>(table.integer(row, c_year));
    e.region = row.fields[c_region];
    const auto& sex = row.fields[c_sex];
    if (sex == "m") e.sex = Sex::Male;
    else if (sex == "f") e.sex = Sex::Female;
    else if (sex != "all") throw InputError(table.where(row) + ": sex must be m, f or all");
    e.age = static_cast<int>(table.integer(row, c_age));
    e.value = table.number(row, c_value);
    check_value(kind, e.value, table.where(row));
    by_kind[kind].push_back(std::move(e));
  }
  std::vector<ParameterTable> out;
  for (const auto& [kind, entries] : by_kind) {
    out.push_back(ParameterTable::build(kind, regions, entries, path.string()));
  }
  return out;
}

void write_parameter_rows(std::ostream& out, ParamKind kind, std::span<const ParameterEntry> rows,
                          bool header) {
  if (header) out << "kind,year,region,sex,age,value\n";
  for (const auto& e : rows) {
    out << kind_name(kind) << ',' << e.year << ',' << e.region << ','
        << (e.sex ? sex_code(*e.sex) : std::string_view("all")) << ',' << e.age << ','
        << csv::format_number(e.value) << '\n';
  }
}

void write_parameter_csv(const std::filesystem::path& path,
                         std::span<const ParameterTable* const> tables,
                         const RegionHierarchy& regions) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  bool header = true;
  for (const auto* t : tables) {
    if (!t) continue;
    const auto rows = t->entries(regions);
    write_parameter_rows(out, t->kind(), rows, header);
    header = false;
  }
  if (header) out << "kind,year,region,sex,age,value\n";
}

}  // namespace popabm
