#include <numeric>
#include <random>

#include "doctest.h"
#include "popabm/disaggregation.hpp"
#include "popabm/errors.hpp"
#include "support.hpp"

using namespace popabm;
using Units = std::vector<std::int64_t>;

TEST_CASE("worked apportionment examples") {
  CHECK(apportion_integer(7, std::vector<double>{1}) == Units{7});
  CHECK(apportion_integer(10, std::vector<double>{6, 3, 1}) == Units{6, 3, 1});
  CHECK(apportion_integer(2, std::vector<double>{5, 4, 3}) == Units{1, 1, 0});
  CHECK(apportion_integer(0, std::vector<double>{5, 4, 3}) == Units{0, 0, 0});
  CHECK(apportion_integer(3, std::vector<double>{0, 2, 0}) == Units{0, 3, 0});
  CHECK(apportion_integer(1, std::vector<double>{2, 2}) == Units{1, 0});
  CHECK_THROWS_AS(apportion_integer(1, std::vector<double>{0, 0}), InputError);
  CHECK_THROWS_AS(apportion_integer(-1, std::vector<double>{1}), InputError);
}

TEST_CASE("apportionment is a stable divisor allocation on random instances") {
  std::mt19937_64 gen(4);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::int64_t> w(1 + gen() % 6);
    for (auto& v : w) v = static_cast<std::int64_t>(gen() % 30);
    if (std::all_of(w.begin(), w.end(), [](auto v) { return v == 0; })) w[0] = 1;
    std::vector<double> weights(w.begin(), w.end());
    const auto total = static_cast<std::int64_t>(gen() % 40);
    const auto units = apportion_integer(total, weights);
    REQUIRE(std::accumulate(units.begin(), units.end(), std::int64_t{0}) == total);
    REQUIRE(testing::hh_stable(w, units));
  }
}

TEST_CASE("brute force agrees on small grids") {
  for (std::int64_t a = 1; a <= 10; ++a)
    for (std::int64_t b = 0; b <= 10; ++b)
      for (std::int64_t total = 0; total <= 12; ++total) {
        const std::vector<std::int64_t> w{a, b, 10 - a / 2};
        const auto units = apportion_integer(total, std::vector<double>{a / 10.0, b / 10.0, (10 - a / 2) / 10.0});
        const auto all = testing::hh_brute_force(total, w);
        REQUIRE(!all.empty());
        REQUIRE(std::find(all.begin(), all.end(), units) != all.end());
      }
}

TEST_CASE("scaling the weights leaves the allocation unchanged") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> a(1 + gen() % 10), b;
    for (double& v : a) v = u(gen) + 0.01;
    const double c = std::exp(8 * u(gen) - 4);
    for (double v : a) b.push_back(v * c);
    const auto total = static_cast<std::int64_t>(gen() % 100);
    REQUIRE(apportion_integer(total, a) == apportion_integer(total, b));
  }
}
