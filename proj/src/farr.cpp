#include "popabm/farr.hpp"

#include <cmath>
#include <string>

#include "popabm/errors.hpp"

namespace popabm {

double farr_probability(double deaths, double pop_avg) {
  if (!(deaths >= 0.0) || !std::isfinite(deaths)) throw InputError("event count must be non-negative");
  if (deaths == 0.0) return 0.0;
  if (!(pop_avg > 0.0)) throw InputError("undefined cell: average population is zero with " + std::to_string(deaths) + " events");
  if (deaths >= 2.0 * pop_avg) throw InputError("event count reaches twice the average population");
  return deaths / (pop_avg + deaths / 2.0);
}

double scaled_first_year_probability(double p, int d_next, int d_since) {
  if (d_next <= 0 || d_since < 0) throw InputError("invalid life-year split");
  return p * static_cast<double>(d_next) / static_cast<double>(d_next + d_since);
}

}  // namespace popabm
