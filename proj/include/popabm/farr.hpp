#pragma once

namespace popabm {

// Per-life-year probability from a calendar-year event count and the mean
// cohort size: D / (P_avg + D/2).
// Throws InputError when pop_avg <= 0 or deaths >= 2 * pop_avg.
double farr_probability(double deaths, double pop_avg);

// Scales a life-year probability down to the remaining part of the current
// life-year: p * d_next / (d_next + d_since).
double scaled_first_year_probability(double p, int d_next, int d_since);

}  // namespace popabm
