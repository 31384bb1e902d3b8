#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "popabm/census.hpp"
#include "popabm/errors.hpp"
#include "support.hpp"

using namespace popabm;

namespace {

RealCensus random_census(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  RealCensus c;
  for (int i = 0; i < 400; ++i) {
    const CensusKey k{2020 + static_cast<int>(gen() % 3), "AT-" + std::to_string(1 + gen() % 3),
                      gen() % 2 ? Sex::Male : Sex::Female, static_cast<int>(gen() % 101)};
    c.add(kAllMetrics[gen() % kMetricCount], k, static_cast<double>(gen() % 1000));
  }
  return c;
}

double grand_total(const RealCensus& c) {
  double s = 0;
  for (Metric m : kAllMetrics)
    for (const auto& [k, v] : c.cells(m)) s += v;
  return s;
}

}  // namespace

TEST_CASE("age class schemes") {
  const auto s = AgeClassScheme::twenty_year();
  CHECK(s.size() == 5);
  CHECK(s.class_of(0) == 0);
  CHECK(s.class_of(19) == 0);
  CHECK(s.class_of(20) == 1);
  CHECK(s.class_of(79) == 3);
  CHECK(s.class_of(120) == 4);
  CHECK(s.label(0) == "0-19");
  CHECK(s.label(4) == "80+");
  CHECK(*s.find_label("40-59") == 2);
  CHECK(AgeClassScheme::parse("0,20,40,60,80").lower_bounds() == s.lower_bounds());
  CHECK_THROWS_AS(AgeClassScheme::parse("5,10"), InputError);
  CHECK_THROWS_AS(AgeClassScheme::parse("0,10,10"), InputError);
}

TEST_CASE("aggregation preserves totals and is linear") {
  const auto a = random_census(1), b = random_census(2);
  const auto scheme = AgeClassScheme::twenty_year();
  const auto agg_a = aggregate(a, scheme);
  CHECK(grand_total(agg_a) == doctest::Approx(grand_total(a)));
  for (const auto& [k, v] : agg_a.cells(Metric::P)) CHECK(k.age < 5);

  RealCensus sum = a;
  for (Metric m : kAllMetrics)
    for (const auto& [k, v] : b.cells(m)) sum.add(m, k, v);
  auto sum_of_aggs = aggregate(a, scheme);
  const auto agg_b = aggregate(b, scheme);
  for (Metric m : kAllMetrics)
    for (const auto& [k, v] : agg_b.cells(m)) sum_of_aggs.add(m, k, v);
  CHECK(aggregate(sum, scheme) == sum_of_aggs);
  CHECK(aggregate(a, AgeClassScheme::single_years(100)) == a);
}

TEST_CASE("aggregation into parent regions") {
  const auto h = testing::flat_regions(3);
  RealCensus c;
  c.set(Metric::P, {2020, "AT-1", Sex::Male, 10}, 4);
  c.set(Metric::P, {2020, "AT-3", Sex::Male, 15}, 6);
  const auto agg = aggregate(c, AgeClassScheme::twenty_year(), &h, RegionLevel::Country);
  CHECK(agg.get(Metric::P, {2020, "AT", Sex::Male, 0}) == 10);
  CHECK(agg.cells(Metric::P).size() == 1);
}

TEST_CASE("census CSV round-trip") {
  const auto dir = testing::scratch_dir("census_io");
  Census c;
  c.set(Metric::P, {2020, "AT-1", Sex::Female, 30}, 12);
  c.set(Metric::ImIn, {2021, "AT-2", Sex::Male, 0}, 3);
  write_census_csv(dir / "c.csv", c);
  CHECK(read_census_csv(dir / "c.csv") == to_real(c));

  std::ostringstream text;
  write_census_csv(text, c);
  CHECK(text.str().rfind("metric,year,region,sex,age,count\n", 0) == 0);
  CHECK(text.str().find("IM_IN,2021,AT-2,m,0,3") != std::string::npos);

  const auto scheme = AgeClassScheme::twenty_year();
  {
    std::ofstream out(dir / "agg.csv");
    write_aggregated_csv(out, aggregate(to_real(c), scheme), scheme);
  }
  const auto agg = read_census_csv(dir / "agg.csv", &scheme);
  CHECK(agg.get(Metric::P, {2020, "AT-1", Sex::Female, 1}) == 12);
}

TEST_CASE("metric names") {
  for (Metric m : kAllMetrics) CHECK(parse_metric(metric_name(m)) == m);
  CHECK(metric_name(Metric::ImOut) == "IM_OUT");
  CHECK_THROWS_AS(parse_metric("X"), InputError);
}
