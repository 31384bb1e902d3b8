#include "popabm/region.hpp"

#include <fstream>

#include "popabm/csv.hpp"
#include "popabm/errors.hpp"

namespace popabm {

std::string_view level_name(RegionLevel level) {
  switch (level) {
    case RegionLevel::Country: return "country";
    case RegionLevel::FederalState: return "federal-state";
    case RegionLevel::District: return "district";
    case RegionLevel::Municipality: return "municipality";
  }
  return "?";
}

RegionLevel parse_level(std::string_view name) {
  for (auto l : {RegionLevel::Country, RegionLevel::FederalState, RegionLevel::District,
                 RegionLevel::Municipality}) {
    if (level_name(l) == name) return l;
  }
  throw InputError("unknown region level '" + std::string(name) + "'");
}

RegionId RegionHierarchy::add(std::string code, RegionLevel level, std::string_view parent) {
  if (code.empty()) throw InputError("empty region code");
  if (index_.contains(code)) throw InputError("duplicate region code " + code);
  RegionId parent_id = -1;
  if (!parent.empty()) {
    parent_id = id(parent);
    if (static_cast<int>(levels_[static_cast<std::size_t>(parent_id)]) >= static_cast<int>(level)) {
      throw InputError("region " + code + " must be finer than its parent " + std::string(parent));
    }
  } else if (level != RegionLevel::Country) {
    throw InputError("region " + code + " needs a parent");
  }
  const auto new_id = static_cast<RegionId>(codes_.size());
  index_.emplace(code, new_id);
  codes_.push_back(std::move(code));
  levels_.push_back(level);
  parents_.push_back(parent_id);
  return new_id;
}

RegionHierarchy RegionHierarchy::flat(std::string country, const std::vector<std::string>& codes,
                                      RegionLevel level) {
  RegionHierarchy h;
  h.add(country, RegionLevel::Country);
  for (const auto& c : codes) h.add(c, level, country);
  return h;
}

RegionHierarchy RegionHierarchy::read_csv(const std::filesystem::path& path) {
  const auto table = csv::Table::read(path);
  const auto c_code = table.column("code");
  const auto c_level = table.column("level");
  const auto c_parent = table.column("parent");
  RegionHierarchy h;
  for (const auto& row : table.rows()) {
    try {
      h.add(row.fields[c_code], parse_level(row.fields[c_level]), row.fields[c_parent]);
    } catch (const InputError& e) {
      throw InputError(table.where(row) + ": " + e.what());
    }
  }
  return h;
}

void RegionHierarchy::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "code,level,parent\n";
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    out << codes_[i] << ',' << level_name(levels_[i]) << ','
        << (parents_[i] >= 0 ? codes_[static_cast<std::size_t>(parents_[i])] : std::string()) << '\n';
  }
}

bool RegionHierarchy::contains(std::string_view code) const {
  return index_.contains(std::string(code));
}

RegionId RegionHierarchy::id(std::string_view code) const {
  const auto it = index_.find(std::string(code));
  if (it == index_.end()) throw InputError("unknown region code '" + std::string(code) + "'");
  return it->second;
}

std::optional<RegionId> RegionHierarchy::parent(RegionId id) const {
  const RegionId p = parents_.at(static_cast<std::size_t>(id));
  if (p < 0) return std::nullopt;
  return p;
}

std::optional<RegionId> RegionHierarchy::ancestor_at(RegionId id, RegionLevel level) const {
  RegionId cur = id;
  while (true) {
    const auto l = levels_.at(static_cast<std::size_t>(cur));
    if (l == level) return cur;
    if (static_cast<int>(l) < static_cast<int>(level)) return std::nullopt;
    const RegionId p = parents_[static_cast<std::size_t>(cur)];
    if (p < 0) return std::nullopt;
    cur = p;
  }
}

std::vector<RegionId> RegionHierarchy::regions_at(RegionLevel level) const {
  std::vector<RegionId> out;
  for (std::size_t i = 0; i < levels_.size(); ++i)
    if (levels_[i] == level) out.push_back(static_cast<RegionId>(i));
  return out;
}

}  // namespace popabm
