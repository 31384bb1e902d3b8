#pragma once

#include <functional>
#include <vector>

#include "popabm/migration.hpp"

namespace popabm {

struct IpfResult {
  MigrationTensor tensor;
  int sweeps = 0;
  double residual = 0.0;
  std::vector<double> history;  // residual after each sweep
};

// Max absolute deviation of the tensor's three marginals from the targets.
double marginal_residual(const MigrationTensor& tensor, const MarginalSet& targets);

// Three-dimensional iterative proportional fitting. Each sweep scales by OD,
// then emigration-by-age, then immigration-by-age. Zeros of `init` stay zero.
// Throws InputError when shapes disagree or grand totals differ by more than
// max(tol, 1e-9) relative, and NumericalError
// (with the last residual) when max_sweeps is exhausted.
IpfResult ipf_3d(const MigrationTensor& init, const MarginalSet& targets, double tol, int max_sweeps);

}  // namespace popabm
