#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "popabm/agent.hpp"
#include "popabm/calendar.hpp"
#include "popabm/census.hpp"
#include "popabm/ipf.hpp"
#include "popabm/migration.hpp"
#include "popabm/parameter_table.hpp"
#include "popabm/region.hpp"
#include "popabm/world.hpp"

namespace popabm::testing {

inline Date ymd(int y, int m, int d) { return Date::from_ymd(y, m, d); }

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("popabm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline RegionHierarchy flat_regions(int n) {
  std::vector<std::string> codes;
  for (int i = 1; i <= n; ++i) codes.push_back("AT-" + std::to_string(i));
  return RegionHierarchy::flat("AT", codes);
}

inline ParameterTable constant_table(ParamKind kind, const RegionHierarchy& regions, int y0, int y1, double value,
                                     int max_age = 100) {
  return ParameterTable::constant(kind, regions, RegionLevel::FederalState, y0, y1, max_age, value);
}

// `value` for ages lo..hi, zero elsewhere, in every federal state.
inline ParameterTable band_table(ParamKind kind, const RegionHierarchy& regions, int y0, int y1, int lo, int hi,
                                 double value) {
  std::vector<ParameterEntry> rows;
  for (int y = y0; y <= y1; ++y)
    for (const RegionId r : regions.regions_at(RegionLevel::FederalState))
      for (int a = 0; a <= 100; ++a) rows.push_back({y, regions.code(r), std::nullopt, a, a >= lo && a <= hi ? value : 0.0});
  return ParameterTable::build(kind, regions, rows);
}

inline std::string census_bytes(const Census& c) {
  std::ostringstream out;
  write_census_csv(out, c);
  return out.str();
}

// Balance-equation violations, national and per region, over every pair of
// consecutive snapshots.
inline std::vector<std::string> conservation_failures(const Census& c) {
  std::set<int> years;
  std::set<std::string> regions;
  for (Metric m : kAllMetrics)
    for (const auto& [k, v] : c.cells(m)) regions.insert(k.region);
  for (const auto& [k, v] : c.cells(Metric::P)) years.insert(k.year);
  auto sum = [&](Metric m, int y, const std::string* r) {
    std::int64_t s = 0;
    for (const auto& [k, v] : c.cells(m))
      if (k.year == y && (!r || k.region == *r)) s += v;
    return s;
  };
  std::vector<std::string> out;
  for (int y : years) {
    if (!years.count(y + 1)) continue;
    auto check = [&](const std::string* r) {
      const std::int64_t lhs = sum(Metric::P, y + 1, r);
      std::int64_t rhs = sum(Metric::P, y, r) + sum(Metric::B, y, r) - sum(Metric::D, y, r) - sum(Metric::E, y, r) +
                         sum(Metric::I, y, r);
      if (r) rhs += sum(Metric::ImIn, y, r) - sum(Metric::ImOut, y, r);
      if (lhs != rhs) {
        out.push_back((r ? *r : std::string("national")) + " " + std::to_string(y) + ": " + std::to_string(lhs) +
                      " != " + std::to_string(rhs));
      }
    };
    check(nullptr);
    for (const auto& r : regions) check(&r);
  }
  return out;
}

// Huntington-Hill priority of a cell holding n units, compared exactly on
// integer weights: an empty cell outranks every non-empty one, then w^2 / (n (n+1)).
inline bool priority_less(std::int64_t wa, std::int64_t na, std::int64_t wb, std::int64_t nb) {
  if ((na == 0) != (nb == 0)) return na != 0;
  if (na == 0) return wa < wb;
  return wa * wa * nb * (nb + 1) < wb * wb * na * (na + 1);
}

// No single unit moved from one positive cell to another raises the
// priority of the unit taken away.
inline bool hh_stable(const std::vector<std::int64_t>& w, const std::vector<std::int64_t>& n) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0 && n[i] != 0) return false;
    if (n[i] == 0) continue;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j == i || w[j] == 0) continue;
      if (priority_less(w[i], n[i] - 1, w[j], n[j])) return false;
    }
  }
  return true;
}

// Every stable allocation of `total` units, by exhaustive enumeration.
inline std::vector<std::vector<std::int64_t>> hh_brute_force(std::int64_t total, const std::vector<std::int64_t>& w) {
  std::vector<std::vector<std::int64_t>> found;
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0) positive.push_back(i);
  std::vector<std::int64_t> n(w.size(), 0);
  auto rec = [&](auto&& self, std::size_t k, std::int64_t left) -> void {
    if (k + 1 == positive.size()) {
      n[positive[k]] = left;
      if (hh_stable(w, n)) found.push_back(n);
      return;
    }
    for (std::int64_t v = 0; v <= left; ++v) {
      n[positive[k]] = v;
      self(self, k + 1, left - v);
    }
  };
  if (!positive.empty()) rec(rec, 0, total);
  return found;
}

// Self-consistent marginals of a random tensor with zero diagonal.
inline std::pair<MigrationTensor, MarginalSet> random_ipf_instance(std::uint64_t seed, std::size_t regions = 4,
                                                                   int ages = 5) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> value(0.1, 10.0);
  std::vector<std::string> codes;
  for (std::size_t i = 0; i < regions; ++i) codes.push_back("R" + std::to_string(i));
  MigrationTensor truth(codes, ages);
  for (std::size_t o = 0; o < regions; ++o)
    for (std::size_t d = 0; d < regions; ++d)
      for (int a = 0; a < ages; ++a)
        if (o != d) truth.at(o, d, a) = value(gen);
  MarginalSet m = truth.marginals();
  return {std::move(truth), std::move(m)};
}

// Records every event and checks age against completed anniversaries.
class BirthdayAudit : public AgentObserver {
 public:
  void on_event(const Agent& agent, EventKind kind, Date t) override {
    if (kind == EventKind::Birthday) birthdays[agent.id()].push_back(t);
    if (agent.age() != completed_years(agent.birthdate(), t)) ++age_mismatches;
    ++events;
  }
  std::map<AgentId, std::vector<Date>> birthdays;
  std::uint64_t age_mismatches = 0;
  std::uint64_t events = 0;
};

// Anniversaries of `bd` in [from, to).
inline std::vector<Date> anniversaries_between(Date bd, Date from, Date to) {
  std::vector<Date> out;
  for (int y = from.year(); y <= to.year(); ++y) {
    const Date a = anniversary(bd, y);
    if (bd < a && !(a < from) && a < to) out.push_back(a);
  }
  return out;
}

// Two-run toy ensemble for the report oracle.
struct ToyEnsemble {
  std::vector<RealCensus> runs;
  RealCensus reference;
};

inline ToyEnsemble toy_ensemble() {
  struct Cell {
    const char* region;
    Sex sex;
    int age;
    double a[2], b[2], ref[2];
  };
  const Cell cells[] = {
      {"R1", Sex::Male, 5, {100, 110}, {96, 104}, {100, 105}},
      {"R1", Sex::Female, 30, {50, 45}, {54, 47}, {50, 50}},
      {"R2", Sex::Male, 70, {20, 18}, {22, 20}, {20, 21}},
  };
  ToyEnsemble t;
  t.runs.resize(2);
  for (const auto& c : cells) {
    for (int i = 0; i < 2; ++i) {
      const CensusKey k{2020 + i, c.region, c.sex, c.age};
      t.runs[0].set(Metric::P, k, c.a[i]);
      t.runs[1].set(Metric::P, k, c.b[i]);
      t.reference.set(Metric::P, k, c.ref[i]);
    }
  }
  return t;
}

struct ToyRow {
  const char* region;
  const char* sex;
  const char* age_class;
  double e_min, e_min_lo, e_min_hi, e_max, e_max_lo, e_max_hi;
};

// Hand-computed (spreadsheet) values for toy_ensemble() with twenty-year
// classes and the 5 % / 95 % band.
inline const std::vector<ToyRow>& toy_expected() {
  static const std::vector<ToyRow> rows{
      {"all", "all", "all", -0.022727272727272728, -0.048295454545454544, 0.002840909090909091, 0.0058823529411764705, -0.020588235294117647, 0.032352941176470591},
      {"all", "m", "all", -0.0083333333333333332, -0.030833333333333237, 0.014166666666666572, 0, -0.028571428571428525, 0.028571428571428525},
      {"all", "f", "all", -0.080000000000000002, -0.097999999999999976, -0.062000000000000027, 0.040000000000000001, 0.0040000000000000565, 0.075999999999999943},
      {"all", "all", "0-19", -0.02, -0.037999999999999971, -0.0020000000000000282, 0.019047619047619049, -0.006666666666666694, 0.044761904761904787},
      {"all", "all", "20-39", -0.080000000000000002, -0.097999999999999976, -0.062000000000000027, 0.040000000000000001, 0.0040000000000000565, 0.075999999999999943},
      {"all", "all", "40-59", 0, 0, 0, 0, 0, 0},
      {"all", "all", "60-79", -0.095238095238095233, -0.13809523809523802, -0.052380952380952452, 0.050000000000000003, 0.0050000000000000712, 0.094999999999999932},
      {"all", "all", "80+", 0, 0, 0, 0, 0, 0},
      {"R1", "all", "all", -0.012903225806451613, -0.036129032258064478, 0.010322580645161254, 0, -0.023999999999999962, 0.023999999999999962},
      {"R1", "all", "0-19", -0.02, -0.037999999999999971, -0.0020000000000000282, 0.019047619047619049, -0.006666666666666694, 0.044761904761904787},
      {"R1", "all", "20-39", -0.080000000000000002, -0.097999999999999976, -0.062000000000000027, 0.040000000000000001, 0.0040000000000000565, 0.075999999999999943},
      {"R1", "all", "40-59", 0, 0, 0, 0, 0, 0},
      {"R1", "all", "60-79", 0, 0, 0, 0, 0, 0},
      {"R1", "all", "80+", 0, 0, 0, 0, 0, 0},
      {"R2", "all", "all", -0.095238095238095233, -0.13809523809523802, -0.052380952380952452, 0.050000000000000003, 0.0050000000000000712, 0.094999999999999932},
      {"R2", "all", "0-19", 0, 0, 0, 0, 0, 0},
      {"R2", "all", "20-39", 0, 0, 0, 0, 0, 0},
      {"R2", "all", "40-59", 0, 0, 0, 0, 0, 0},
      {"R2", "all", "60-79", -0.095238095238095233, -0.13809523809523802, -0.052380952380952452, 0.050000000000000003, 0.0050000000000000712, 0.094999999999999932},
      {"R2", "all", "80+", 0, 0, 0, 0, 0, 0},
  };
  return rows;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace popabm::testing
