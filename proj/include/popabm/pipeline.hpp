#pragma once

#include <iosfwd>
#include <vector>

#include "popabm/census.hpp"
#include "popabm/config.hpp"
#include "popabm/parameter_table.hpp"
#include "popabm/region.hpp"

namespace popabm {

struct RunInputs {
  RegionHierarchy regions;
  ParameterSet params;
  std::vector<PopulationCell> population;
};

// Reads every file a config references. Death, emigration and birth tables
// are required; internal migration only under full-regional mode.
RunInputs load_inputs(const RunConfig& config);

WorldConfig world_config(const RunConfig& config, std::uint64_t seed);

// Runs config.runs simulations with seeds seed, seed + 1, ... and reports
// each macro step to `log` when given.
std::vector<Census> run_ensemble(const RunConfig& config, const RunInputs& inputs, std::ostream* log = nullptr);

// run_ensemble plus census_run_NNN.csv and census_mean.csv in the output
// directory.
std::vector<Census> simulate(const RunConfig& config, std::ostream& log);

}  // namespace popabm
