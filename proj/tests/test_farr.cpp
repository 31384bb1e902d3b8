#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "popabm/disaggregation.hpp"
#include "popabm/errors.hpp"
#include "popabm/farr.hpp"

using namespace popabm;

TEST_CASE("Farr probability") {
  CHECK(farr_probability(0, 10) == 0.0);
  const double p = farr_probability(100, 10000);
  const double m = 100.0 / 10000.0;
  CHECK(p == doctest::Approx(100.0 / 10050.0).epsilon(1e-15));
  CHECK(std::abs(p - (1.0 - (1.0 - m / 2) / (1.0 + m / 2))) < 1e-15);
  CHECK_THROWS_AS(farr_probability(1, 0), InputError);
  CHECK_THROWS_AS(farr_probability(20, 10), InputError);
}

TEST_CASE("Farr probability grows with deaths and stays below the naive rate") {
  double last = -1.0;
  for (int d = 0; d < 2000; ++d) {
    const double p = farr_probability(d, 1000);
    CHECK(p > last);
    if (d > 0) CHECK(p < d / 1000.0);
    last = p;
  }
}

TEST_CASE("Farr recovers the probability of a replacement-maintained cohort") {
  // Deaths are replaced at once, so the cohort size stays constant and the
  // yearly death count is binomial per life-year.
  std::mt19937_64 gen(1);
  std::bernoulli_distribution dies(0.02);
  const int n = 200000;
  int deaths = 0;
  for (int i = 0; i < n; ++i) deaths += dies(gen);
  const double p = farr_probability(deaths, n - deaths / 2.0);
  CHECK(p == doctest::Approx(0.02).epsilon(0.05));
}

TEST_CASE("first-year scaling") {
  CHECK(scaled_first_year_probability(0.5, 366, 0) == 0.5);
  CHECK(scaled_first_year_probability(0.2, 74, 292) == doctest::Approx(0.040437).epsilon(1e-5));
  CHECK(scaled_first_year_probability(0.5, 1, 365) == doctest::Approx(0.5 / 366));
}

TEST_CASE("proportional disaggregation") {
  const std::vector<double> equal(10, 1.0);
  for (double v : disaggregate_proportional(1000, equal)) CHECK(v == doctest::Approx(100));
  const std::vector<double> w{3, 1};
  const auto out = disaggregate_proportional(1000, w);
  CHECK(out[0] == 750);
  CHECK(out[1] == 250);
  const std::vector<double> z{2, 0, 5};
  CHECK(disaggregate_proportional(7, z)[1] == 0.0);
  const std::vector<double> zero{0, 0};
  CHECK_THROWS_AS(disaggregate_proportional(1, zero), InputError);
  const std::vector<double> neg{1, -1};
  CHECK_THROWS_AS(disaggregate_proportional(1, neg), InputError);
}

TEST_CASE("disaggregation preserves the aggregate") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> w(1 + gen() % 50);
    for (double& v : w) v = u(gen) * 1000;
    const double agg = u(gen) * 1e7;
    const auto out = disaggregate_proportional(agg, w);
    const double sum = std::accumulate(out.begin(), out.end(), 0.0);
    REQUIRE(std::abs(sum - agg) <= 1e-9 * agg);
  }
}
