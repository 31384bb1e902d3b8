#include "popabm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "popabm/csv.hpp"
#include "popabm/errors.hpp"

namespace popabm {

RealCensus ensemble_mean(std::span<const RealCensus> runs) {
  if (runs.empty()) throw InputError("ensemble is empty");
  RealCensus sum;
  for (const auto& r : runs)
    for (Metric m : kAllMetrics)
      for (const auto& [k, v] : r.cells(m)) sum.add(m, k, v);
  const double n = static_cast<double>(runs.size());
  for (Metric m : kAllMetrics)
    for (auto& [k, v] : sum.cells(m)) v /= n;
  return sum;
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile level outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::pair<RealCensus, RealCensus> quantile_band(std::span<const RealCensus> runs, double q_lo, double q_hi) {
  if (runs.size() < 2) throw InputError("quantile band needs at least two runs");
  RealCensus lower, upper;
  for (Metric m : kAllMetrics) {
    std::set<CensusKey> keys;
    for (const auto& r : runs)
      for (const auto& [k, v] : r.cells(m)) keys.insert(k);
    std::vector<double> values(runs.size());
    for (const auto& k : keys) {
      for (std::size_t i = 0; i < runs.size(); ++i) values[i] = runs[i].get(m, k);
      lower.set(m, k, sample_quantile(values, q_lo));
      upper.set(m, k, sample_quantile(values, q_hi));
    }
  }
  return {std::move(lower), std::move(upper)};
}

Extrema deviation_extrema(std::span<const double> sim, std::span<const double> data) {
  if (sim.empty()) throw InputError("deviation over an empty year range");
  if (sim.size() != data.size()) throw InputError("simulated and reference series differ in length");
  Extrema e{INFINITY, -INFINITY};
  for (std::size_t i = 0; i < sim.size(); ++i) {
    const double r = (sim[i] - data[i]) / std::max(1.0, data[i]);
    e.e_min = std::min(e.e_min, r);
    e.e_max = std::max(e.e_max, r);
  }
  return e;
}

namespace {

struct Group {
  std::string region = "all";
  std::optional<Sex> sex;
  std::optional<int> age_class;
};

// Population series of one group over [y0, y1].
std::vector<double> series(const RealCensus& census, const AgeClassScheme& scheme, const Group& g, int y0, int y1) {
  std::vector<double> out(static_cast<std::size_t>(y1 - y0 + 1), 0.0);
  for (const auto& [k, v] : census.cells(Metric::P)) {
    if (k.year < y0 || k.year > y1) continue;
    if (g.region != "all" && k.region != g.region) continue;
    if (g.sex && k.sex != *g.sex) continue;
    if (g.age_class && scheme.class_of(k.age) != *g.age_class) continue;
    out[static_cast<std::size_t>(k.year - y0)] += v;
  }
  return out;
}

std::pair<double, double> sorted(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

DeviationReport deviation_report(std::span<const RealCensus> runs, const RealCensus& reference,
                                 const AgeClassScheme& scheme, double q_lo, double q_hi) {
  const RealCensus mean = ensemble_mean(runs);
  std::optional<std::pair<RealCensus, RealCensus>> band;
  if (runs.size() >= 2) band = quantile_band(runs, q_lo, q_hi);

  std::set<int> sim_years, ref_years;
  std::set<std::string> sim_regions, ref_regions;
  for (const auto& [k, v] : mean.cells(Metric::P)) {
    sim_years.insert(k.year);
    sim_regions.insert(k.region);
  }
  for (const auto& [k, v] : reference.cells(Metric::P)) {
    ref_years.insert(k.year);
    ref_regions.insert(k.region);
  }
  DeviationReport report;
  for (int y : sim_years)
    if (!ref_years.count(y)) report.gaps.push_back("reference has no population for year " + std::to_string(y));
  for (const auto& r : sim_regions)
    if (!ref_regions.count(r)) report.gaps.push_back("reference has no population for region " + r);
  std::vector<int> common;
  std::set_intersection(sim_years.begin(), sim_years.end(), ref_years.begin(), ref_years.end(),
                        std::back_inserter(common));
  if (common.empty()) {
    report.gaps.push_back("no year is covered by both the ensemble and the reference");
    return report;
  }
  report.first_year = common.front();
  report.last_year = common.back();
  for (std::size_t i = 1; i < common.size(); ++i) {
    if (common[i] != common[i - 1] + 1) {
      for (int y = common[i - 1] + 1; y < common[i]; ++y)
        report.gaps.push_back("year " + std::to_string(y) + " missing on one side");
    }
  }

  std::vector<Group> groups;
  groups.push_back({});
  groups.push_back({"all", Sex::Male, {}});
  groups.push_back({"all", Sex::Female, {}});
  for (std::size_t c = 0; c < scheme.size(); ++c) groups.push_back({"all", {}, static_cast<int>(c)});
  for (const auto& r : sim_regions) {
    if (!ref_regions.count(r)) continue;
    groups.push_back({r, {}, {}});
    for (std::size_t c = 0; c < scheme.size(); ++c) groups.push_back({r, {}, static_cast<int>(c)});
  }

  const int y0 = report.first_year, y1 = report.last_year;
  auto restrict = [&](std::vector<double> v) {
    std::vector<double> out;
    for (int y : common) out.push_back(v[static_cast<std::size_t>(y - y0)]);
    return out;
  };
  for (const auto& g : groups) {
    const auto data = restrict(series(reference, scheme, g, y0, y1));
    const auto point = deviation_extrema(restrict(series(mean, scheme, g, y0, y1)), data);
    ReportRow row;
    row.region = g.region;
    row.sex = g.sex ? std::string(sex_code(*g.sex)) : "all";
    row.age_class = g.age_class ? scheme.label(static_cast<std::size_t>(*g.age_class)) : "all";
    row.e_min = point.e_min;
    row.e_max = point.e_max;
    if (band) {
      const auto lo = deviation_extrema(restrict(series(band->first, scheme, g, y0, y1)), data);
      const auto hi = deviation_extrema(restrict(series(band->second, scheme, g, y0, y1)), data);
      std::tie(row.e_min_lo, row.e_min_hi) = sorted(lo.e_min, hi.e_min);
      std::tie(row.e_max_lo, row.e_max_hi) = sorted(lo.e_max, hi.e_max);
    } else {
      row.e_min_lo = row.e_min_hi = row.e_min;
      row.e_max_lo = row.e_max_hi = row.e_max;
    }
    report.rows.push_back(row);
  }
  return report;
}

void write_report_csv(std::ostream& out, const DeviationReport& report) {
  out << "region,sex,age_class,e_min,e_min_ci_lo,e_min_ci_hi,e_max,e_max_ci_lo,e_max_ci_hi\n";
  for (const auto& r : report.rows) {
    out << r.region << ',' << r.sex << ',' << r.age_class;
    for (double v : {r.e_min, r.e_min_lo, r.e_min_hi, r.e_max, r.e_max_lo, r.e_max_hi})
      out << ',' << csv::format_number(v);
    out << '\n';
  }
}

void write_report_csv(const std::filesystem::path& path, const DeviationReport& report) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_report_csv(out, report);
}

}  // namespace popabm
