#include "popabm/kernels.hpp"

#include <algorithm>
#include <exception>

#include <omp.h>

namespace popabm {

std::vector<OutboxMessage> advance_agents_serial(std::span<Agent> agents, Date horizon, const AgentContext& ctx,
                                                 AgentObserver* observer) {
  std::vector<OutboxMessage> out;
  for (Agent& a : agents) a.advance(horizon, ctx, out, observer);
  return out;
}

std::vector<OutboxMessage> advance_agents_parallel(std::span<Agent> agents, Date horizon, const AgentContext& ctx,
                                                   int workers, AgentObserver* observer) {
  if (workers <= 1) return advance_agents_serial(agents, horizon, ctx, observer);
  std::vector<std::vector<OutboxMessage>> local(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::size_t> error_at(static_cast<std::size_t>(workers), agents.size());
  const auto n = static_cast<std::ptrdiff_t>(agents.size());

#pragma omp parallel num_threads(workers)
  {
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
    auto& out = local[tid];
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (errors[tid]) continue;
      try {
        agents[static_cast<std::size_t>(i)].advance(horizon, ctx, out, observer);
      } catch (...) {
        errors[tid] = std::current_exception();
        error_at[tid] = static_cast<std::size_t>(i);
      }
    }
  }

  // Report the failure a serial run would have hit first.
  const auto first = std::min_element(error_at.begin(), error_at.end());
  if (*first < agents.size()) std::rethrow_exception(errors[static_cast<std::size_t>(first - error_at.begin())]);

  std::size_t total = 0;
  for (const auto& l : local) total += l.size();
  std::vector<OutboxMessage> out;
  out.reserve(total);
  for (auto& l : local) out.insert(out.end(), l.begin(), l.end());
  std::sort(out.begin(), out.end(), [](const OutboxMessage& a, const OutboxMessage& b) {
    return a.origin != b.origin ? a.origin < b.origin : a.sequence < b.sequence;
  });
  return out;
}

}  // namespace popabm
