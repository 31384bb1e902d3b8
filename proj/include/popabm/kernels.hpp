#pragma once

#include <span>
#include <vector>

#include "popabm/agent.hpp"

namespace popabm {

// Advances every alive agent to `horizon` and returns their messages ordered
// by (origin id, sequence). `agents` must be sorted by id.
std::vector<OutboxMessage> advance_agents_serial(std::span<Agent> agents, Date horizon, const AgentContext& ctx,
                                                 AgentObserver* observer = nullptr);

// OpenMP version; the result does not depend on `workers`.
std::vector<OutboxMessage> advance_agents_parallel(std::span<Agent> agents, Date horizon, const AgentContext& ctx,
                                                   int workers, AgentObserver* observer = nullptr);

}  // namespace popabm
