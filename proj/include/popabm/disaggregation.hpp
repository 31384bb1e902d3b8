#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace popabm {

// aggregate * w_i / sum(w). Throws InputError for all-zero or negative weights.
std::vector<double> disaggregate_proportional(double aggregate, std::span<const double> weights);

// Huntington-Hill apportionment of `total` units. Zero-weight cells get
// nothing. When there are fewer units than positive cells, the first unit
// goes by descending weight; otherwise every positive cell first gets one
// unit and the rest follow priority w / sqrt(n (n + 1)). Ties go to the lower
// index.
std::vector<std::int64_t> apportion_integer(std::int64_t total, std::span<const double> weights);

}  // namespace popabm
