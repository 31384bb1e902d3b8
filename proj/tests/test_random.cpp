#include <boost/math/distributions/chi_squared.hpp>
#include <vector>

#include "doctest.h"
#include "popabm/errors.hpp"
#include "popabm/random.hpp"

using namespace popabm;

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
  CHECK(sizeof(RandomStream) == 8);
}

TEST_CASE("first draws across many ids are uniform") {
  constexpr int kBins = 20;
  constexpr int kIds = 100000;
  std::vector<double> counts(kBins, 0.0);
  for (std::uint64_t id = 0; id < kIds; ++id) {
    RandomStream s = rng_substream(1, id);
    counts[static_cast<std::size_t>(s.uniform() * kBins)] += 1.0;
  }
  const double expected = static_cast<double>(kIds) / kBins;
  double stat = 0.0;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  CHECK(stat < boost::math::quantile(boost::math::chi_squared(kBins - 1), 0.99));
}

TEST_CASE("uniform and uniform_int stay in range") {
  RandomStream s(5, 5);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const auto k = s.uniform_int(-3, 3);
    REQUIRE(k >= -3);
    REQUIRE(k <= 3);
    ++seen[static_cast<std::size_t>(k + 3)];
  }
  for (int c : seen) CHECK(c > 1200);
  CHECK(s.uniform_int(4, 4) == 4);
  CHECK_THROWS_AS(s.uniform_int(2, 1), InputError);
}

TEST_CASE("the world stream differs from agent streams") {
  RandomStream w = rng_substream(9, kWorldStreamId);
  RandomStream a = rng_substream(9, 0);
  CHECK(w.next_u64() != a.next_u64());
}
