#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "popabm/calendar.hpp"
#include "popabm/world.hpp"

namespace popabm {

// Flat "key = value" text. '#' starts a comment; keys must be unique.
class KeyValues {
 public:
  static KeyValues parse(std::istream& in, const std::string& source);
  static KeyValues read(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  // Keys that were never read; used to reject typos.
  std::vector<std::string> unused() const;
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> used_;
};

InternalMigrationMode parse_im_mode(const std::string& text);
std::string im_mode_name(InternalMigrationMode mode);

struct RunConfig {
  Date start;
  Date end;
  MacroStep step;
  std::uint64_t seed = 1;
  int runs = 9;
  int workers = 1;
  InternalMigrationMode im_mode = InternalMigrationMode::None;
  int max_age = 100;
  double male_fraction = 0.5;
  // Paths as written in the file; see resolve().
  std::string regions;
  std::string params;
  std::string population;
  std::string immigration;
  std::string migration;
  std::string reference;
  std::string out_dir = "out";
  std::filesystem::path base_dir;  // directory of the config file

  static RunConfig parse(std::istream& in, const std::string& source, std::filesystem::path base_dir = {});
  static RunConfig read(const std::filesystem::path& path);
  std::string serialize() const;
  // Relative paths are taken relative to the config file's directory.
  std::filesystem::path resolve(const std::string& path) const;
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// region,sex,age,count
std::vector<PopulationCell> read_population_csv(const std::filesystem::path& path, const RegionHierarchy& regions);
void write_population_csv(const std::filesystem::path& path, const std::vector<PopulationCell>& cells,
                          const RegionHierarchy& regions);

}  // namespace popabm
