#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "popabm/census.hpp"

namespace popabm {

// Cell-wise mean over runs; cells absent from a run count as zero.
RealCensus ensemble_mean(std::span<const RealCensus> runs);

// Linear interpolation between order statistics (h = (n-1) q).
double sample_quantile(std::vector<double> values, double q);

// Cell-wise quantile censuses. Throws InputError for fewer than two runs.
std::pair<RealCensus, RealCensus> quantile_band(std::span<const RealCensus> runs, double q_lo = 0.05,
                                                double q_hi = 0.95);

struct Extrema {
  double e_min = 0.0;
  double e_max = 0.0;
};

// Signed relative deviation (sim - data) / max(1, data), minimised and
// maximised over the series.
Extrema deviation_extrema(std::span<const double> sim, std::span<const double> data);

struct ReportRow {
  std::string region;     // "all" for every region
  std::string sex;        // "all", "m", "f"
  std::string age_class;  // "all" or a class label
  double e_min = 0.0;
  double e_min_lo = 0.0;
  double e_min_hi = 0.0;
  double e_max = 0.0;
  double e_max_lo = 0.0;
  double e_max_hi = 0.0;
};

struct DeviationReport {
  int first_year = 0;
  int last_year = 0;
  std::vector<ReportRow> rows;
  std::vector<std::string> gaps;  // reference coverage problems, not fatal
};

// Population deviation report over the years both sides cover. Row blocks:
// overall, per sex, per age class, per region, per region and age class.
// Point values use the ensemble mean; the confidence pairs apply the same
// metric to the 5 % and 95 % quantile censuses and are sorted ascending.
// With a single run the pairs collapse onto the point value.
DeviationReport deviation_report(std::span<const RealCensus> runs, const RealCensus& reference,
                                 const AgeClassScheme& scheme, double q_lo = 0.05, double q_hi = 0.95);

// region,sex,age_class,e_min,e_min_ci_lo,e_min_ci_hi,e_max,e_max_ci_lo,e_max_ci_hi
void write_report_csv(std::ostream& out, const DeviationReport& report);
void write_report_csv(const std::filesystem::path& path, const DeviationReport& report);

}  // namespace popabm
