#include "popabm/derive.hpp"

#include <algorithm>
#include <set>

#include "popabm/errors.hpp"
#include "popabm/farr.hpp"

namespace popabm {

Metric metric_for(ParamKind kind) {
  switch (kind) {
    case ParamKind::Death: return Metric::D;
    case ParamKind::Emigration: return Metric::E;
    case ParamKind::Birth: return Metric::B;
    case ParamKind::InternalMigration: return Metric::ImOut;
    case ParamKind::Immigration: break;
  }
  throw InputError("immigration counts are not derived as probabilities");
}

DerivedParams derive_params(const RealCensus& census, ParamKind kind, bool strict) {
  const Metric metric = metric_for(kind);
  std::set<int> years;
  std::set<std::string> regions;
  int max_age = -1;
  for (const auto& [k, v] : census.cells(Metric::P)) {
    years.insert(k.year);
    regions.insert(k.region);
    max_age = std::max(max_age, k.age);
  }
  if (years.empty()) throw InputError("census has no population snapshots");
  for (const auto& [k, v] : census.cells(metric)) {
    if (v > 0.0 && !regions.count(k.region)) {
      throw InputError("census has " + std::string(kind_name(kind)) + " events in region " + k.region +
                       " but no population there");
    }
    max_age = std::max(max_age, k.age);
  }
  const std::set<int> snapshots = years;
  if (years.size() > 1) years.erase(std::prev(years.end()));

  DerivedParams out;
  for (int y : years) {
    for (const auto& r : regions) {
      for (Sex s : {Sex::Male, Sex::Female}) {
        for (int a = 0; a <= max_age; ++a) {
          ParameterEntry e{y, r, s, a, 0.0};
          const double x = census.get(metric, {y, r, s, a});
          if (kind == ParamKind::Birth && s == Sex::Male) {
            out.entries.push_back(e);
            continue;
          }
          const double p0 = census.get(Metric::P, {y, r, s, a});
          const bool has_next = snapshots.count(y + 1) > 0;
          const double p_avg = has_next ? 0.5 * (p0 + census.get(Metric::P, {y + 1, r, s, a})) : p0;
          const std::string cell = "year " + std::to_string(y) + " region " + r + " sex " +
                                   std::string(sex_code(s)) + " age " + std::to_string(a);
          if (x > 0.0 && p_avg <= 0.0) {
            const std::string msg = "empty cell: " + std::to_string(x) + " " + std::string(kind_name(kind)) +
                                    " events but no population at " + cell;
            if (strict) throw InputError(msg);
            out.issues.push_back(msg);
          } else if (x >= 2.0 * p_avg && x > 0.0) {
            const std::string msg = "events reach twice the population at " + cell;
            if (strict) throw InputError(msg);
            out.issues.push_back(msg);
            e.value = 1.0;
          } else {
            e.value = farr_probability(x, p_avg);
          }
          out.entries.push_back(e);
        }
      }
    }
  }
  return out;
}

}  // namespace popabm
