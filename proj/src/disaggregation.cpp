#include "popabm/disaggregation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "popabm/errors.hpp"

namespace popabm {

namespace {

double checked_sum(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("weights must be finite and non-negative");
    sum += w;
  }
  return sum;
}

}  // namespace

std::vector<double> disaggregate_proportional(double aggregate, std::span<const double> weights) {
  const double sum = checked_sum(weights);
  if (sum <= 0.0) throw InputError("cannot disaggregate over all-zero weights");
  std::vector<double> out(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) out[i] = aggregate * (weights[i] / sum);
  return out;
}

std::vector<std::int64_t> apportion_integer(std::int64_t total, std::span<const double> weights) {
  if (total < 0) throw InputError("apportionment total must be non-negative");
  const double sum = checked_sum(weights);
  std::vector<std::int64_t> out(weights.size(), 0);
  if (total == 0) return out;
  if (sum <= 0.0) throw InputError("cannot apportion a positive total over all-zero weights");

  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) positive.push_back(i);
  std::stable_sort(positive.begin(), positive.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });

  const auto first = std::min<std::size_t>(positive.size(), static_cast<std::size_t>(total));
  for (std::size_t k = 0; k < first; ++k) out[positive[k]] = 1;
  std::int64_t left = total - static_cast<std::int64_t>(first);

  struct Entry {
    double priority;
    std::size_t index;
    bool operator<(const Entry& o) const {
      if (priority != o.priority) return priority < o.priority;
      return index > o.index;
    }
  };
  auto priority = [&](std::size_t i) {
    const double n = static_cast<double>(out[i]);
    return weights[i] / std::sqrt(n * (n + 1.0));
  };
  std::priority_queue<Entry> queue;
  for (std::size_t i : positive) queue.push({priority(i), i});
  while (left-- > 0) {
    const auto top = queue.top();
    queue.pop();
    ++out[top.index];
    queue.push({priority(top.index), top.index});
  }
  return out;
}

}  // namespace popabm
