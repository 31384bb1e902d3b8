#pragma once

#include <span>

#include "popabm/census.hpp"
#include "popabm/parameter_table.hpp"
#include "popabm/region.hpp"
#include "popabm/world.hpp"

namespace popabm {

struct ProjectionSetup {
  Date start;
  Date end;
  int max_age = 100;
  double male_fraction = 0.5;
  InternalMigrationMode im_mode = InternalMigrationMode::None;
};

// Expected census of the agent model, computed by cohort bookkeeping rather
// than by sampling. Mass is tracked per (segment start, birthdate, sex, age)
// and region; within a life-year segment event days are uniform, so event,
// survival and relocation totals reduce to sums of low-order polynomials in
// the day offset.
RealCensus project_expected(const ProjectionSetup& setup, const ParameterSet& params,
                            const RegionHierarchy& regions, std::span<const PopulationCell> population);

}  // namespace popabm
