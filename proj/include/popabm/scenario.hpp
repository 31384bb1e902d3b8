#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "popabm/calendar.hpp"
#include "popabm/config.hpp"
#include "popabm/parameter_table.hpp"
#include "popabm/types.hpp"

namespace popabm {

// Value per age: either one constant or "lo-hi:v,lo-hi:v" with 0 elsewhere.
class AgeProfile {
 public:
  static AgeProfile parse(const std::string& text);
  static AgeProfile constant(double v) { return AgeProfile({{0, 1 << 30, v}}); }
  double at(int age) const;
  std::string to_string() const;

 private:
  struct Band {
    int lo, hi;
    double value;
  };
  explicit AgeProfile(std::vector<Band> bands) : bands_(std::move(bands)) {}
  std::vector<Band> bands_;
};

struct ScenarioSpec {
  std::string country = "AT";
  std::vector<std::string> regions{"AT-1", "AT-2", "AT-3"};
  Date start = Date::from_ymd(2020, 1, 1);
  Date end = Date::from_ymd(2030, 1, 1);
  std::string step = "1y";
  int max_age = 100;
  double male_fraction = 0.5;
  AgeProfile initial = AgeProfile::parse("0-89:185");  // agents per (region, sex, age)
  AgeProfile death = AgeProfile::parse("0-0:0.003,1-39:0.0005,40-64:0.004,65-79:0.02,80-100:0.1");
  AgeProfile emigration = AgeProfile::parse("0-100:0.004");
  AgeProfile birth = AgeProfile::parse("18-42:0.055");
  AgeProfile internal_migration = AgeProfile::parse("0-100:0.02");
  AgeProfile immigration = AgeProfile::parse("20-29:3");  // per (year, region, sex, age)
  InternalMigrationMode im_mode = InternalMigrationMode::FullRegional;
  std::uint64_t seed = 1;
  int runs = 9;
  double ipf_tol = 1e-9;
  int ipf_max_sweeps = 1000;

  static ScenarioSpec read(const std::filesystem::path& path);
  static ScenarioSpec parse(std::istream& in, const std::string& source);
  void validate() const;
};

struct ScenarioFiles {
  RunConfig config;
  std::filesystem::path config_path;
  int ipf_sweeps = 0;
  double ipf_residual = 0.0;
};

// Writes regions.csv, params.csv, immigration.csv, population.csv, the
// three migration marginals, the IPF-fitted migration_tensor.csv,
// reference_census.csv (expected values from the cohort projection) and
// run.cfg into `dir`.
ScenarioFiles generate_scenario(const ScenarioSpec& spec, const std::filesystem::path& dir);

}  // namespace popabm
