#include "popabm/ipf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "popabm/errors.hpp"

namespace popabm {

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) r = std::max(r, std::abs(a.data[i] - b.data[i]));
  return r;
}

double ratio(double target, double current) { return current > 0.0 ? target / current : 0.0; }

}  // namespace

double marginal_residual(const MigrationTensor& tensor, const MarginalSet& targets) {
  const auto m = tensor.marginals();
  return std::max({max_abs_diff(m.od, targets.od), max_abs_diff(m.emig_by_age, targets.emig_by_age),
                   max_abs_diff(m.imm_by_age, targets.imm_by_age)});
}

IpfResult ipf_3d(const MigrationTensor& init, const MarginalSet& targets, double tol, int max_sweeps) {
  if (targets.regions != init.regions() || targets.ages != init.ages())
    throw InputError("marginals and initial tensor have different regions or ages");
  const double t_od = targets.od.total(), t_em = targets.emig_by_age.total(), t_im = targets.imm_by_age.total();
  const double slack = std::max(tol, 1e-9) * std::max({1.0, t_od, t_em, t_im});
  if (std::abs(t_od - t_em) > slack || std::abs(t_od - t_im) > slack || std::abs(t_em - t_im) > slack) {
    throw InputError("infeasible marginals: grand totals " + std::to_string(t_od) + ", " + std::to_string(t_em) +
                     ", " + std::to_string(t_im) + " differ");
  }
  for (double v : init.values())
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("initial tensor must be finite and non-negative");

  IpfResult res{init, 0, 0.0, {}};
  auto& x = res.tensor;
  const std::size_t n = x.region_count();
  const int ages = x.ages();
  for (std::size_t o = 0; o < n; ++o)
    for (int a = 0; a < ages; ++a) x.at(o, o, a) = 0.0;

  res.residual = marginal_residual(x, targets);
  while (res.residual > tol) {
    if (res.sweeps >= max_sweeps) {
      throw NumericalError("IPF did not converge in " + std::to_string(max_sweeps) + " sweeps (residual " +
                               std::to_string(res.residual) + ")",
                           res.residual);
    }
    for (std::size_t o = 0; o < n; ++o)
      for (std::size_t d = 0; d < n; ++d) {
        double s = 0.0;
        for (int a = 0; a < ages; ++a) s += x.at(o, d, a);
        const double f = ratio(targets.od(o, d), s);
        for (int a = 0; a < ages; ++a) x.at(o, d, a) *= f;
      }
    for (std::size_t o = 0; o < n; ++o)
      for (int a = 0; a < ages; ++a) {
        double s = 0.0;
        for (std::size_t d = 0; d < n; ++d) s += x.at(o, d, a);
        const double f = ratio(targets.emig_by_age(o, static_cast<std::size_t>(a)), s);
        for (std::size_t d = 0; d < n; ++d) x.at(o, d, a) *= f;
      }
    for (std::size_t d = 0; d < n; ++d)
      for (int a = 0; a < ages; ++a) {
        double s = 0.0;
        for (std::size_t o = 0; o < n; ++o) s += x.at(o, d, a);
        const double f = ratio(targets.imm_by_age(d, static_cast<std::size_t>(a)), s);
        for (std::size_t o = 0; o < n; ++o) x.at(o, d, a) *= f;
      }
    ++res.sweeps;
    res.residual = marginal_residual(x, targets);
    res.history.push_back(res.residual);
  }
  return res;
}

}  // namespace popabm
