#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "popabm/types.hpp"

namespace popabm {

enum class RegionLevel : int { Country = 0, FederalState = 1, District = 2, Municipality = 3 };

std::string_view level_name(RegionLevel level);
RegionLevel parse_level(std::string_view name);

// Administrative tree (country > federal state > district > municipality).
// Parameter tables may be defined at any level; lookups walk upward from an
// agent's region to the table's level.
class RegionHierarchy {
 public:
  // Parent must already exist unless level is Country.
  RegionId add(std::string code, RegionLevel level, std::string_view parent = {});

  // Country plus one child per code at `level`, handy for small scenarios.
  static RegionHierarchy flat(std::string country, const std::vector<std::string>& codes,
                              RegionLevel level = RegionLevel::FederalState);
  // CSV with columns code,level,parent.
  static RegionHierarchy read_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;

  std::size_t size() const { return codes_.size(); }
  bool contains(std::string_view code) const;
  // Throws InputError for unknown codes.
  RegionId id(std::string_view code) const;
  const std::string& code(RegionId id) const { return codes_.at(static_cast<std::size_t>(id)); }
  RegionLevel level(RegionId id) const { return levels_.at(static_cast<std::size_t>(id)); }
  std::optional<RegionId> parent(RegionId id) const;

  // The region itself or its ancestor at `level`; nullopt when the region is
  // coarser than `level`.
  std::optional<RegionId> ancestor_at(RegionId id, RegionLevel level) const;

  std::vector<RegionId> regions_at(RegionLevel level) const;

 private:
  std::vector<std::string> codes_;
  std::vector<RegionLevel> levels_;
  std::vector<RegionId> parents_;  // -1 for roots
  std::unordered_map<std::string, RegionId> index_;
};

}  // namespace popabm
