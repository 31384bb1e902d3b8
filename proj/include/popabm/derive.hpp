#pragma once

#include <string>
#include <vector>

#include "popabm/census.hpp"
#include "popabm/parameter_table.hpp"

namespace popabm {

// Census metric holding the event counts for a probability kind.
Metric metric_for(ParamKind kind);

struct DerivedParams {
  std::vector<ParameterEntry> entries;  // full (year, region, sex, age) grid
  std::vector<std::string> issues;      // one message per problematic cell
};

// Farr probabilities per (year, region, sex, age) from a census. Years are
// those with a population snapshot, excluding the last one when more than
// one exists. P_avg is the mean of the adjacent snapshots, or the
// start-of-year count when the next snapshot is missing. Births are divided
// by the female population; male birth rows are zero.
// Cells with events but no population, or with events reaching twice the
// population, are reported in `issues` and set to 0 or 1 respectively;
// with strict = true the first such cell throws InputError instead.
DerivedParams derive_params(const RealCensus& census, ParamKind kind, bool strict = false);

}  // namespace popabm
