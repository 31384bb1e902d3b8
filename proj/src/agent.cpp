#include "popabm/agent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "popabm/errors.hpp"

namespace popabm {

namespace {

// std heap is a max-heap, so "less" means "fires later".
bool fires_later(const AgentEvent& a, const AgentEvent& b) {
  if (a.due != b.due) return a.due > b.due;
  if (a.kind != b.kind) return a.kind > b.kind;
  return a.sequence > b.sequence;
}

constexpr ParamKind kDemographicKinds[] = {ParamKind::Death, ParamKind::Emigration, ParamKind::Birth,
                                           ParamKind::InternalMigration};

EventKind event_of(ParamKind k) {
  switch (k) {
    case ParamKind::Death: return EventKind::Death;
    case ParamKind::Emigration: return EventKind::Emigration;
    case ParamKind::Birth: return EventKind::Birth;
    default: return EventKind::InternalMigration;
  }
}

}  // namespace

Agent::Agent(AgentId id, Date birthdate, Sex sex, RegionId region, Date t, const AgentContext& ctx, RandomStream rng)
    : id_(id), birthdate_(birthdate), region_(region), sex_(sex), rng_(rng) {
  age_ = completed_years(birthdate, t);
  if (birthdate < t && is_anniversary(birthdate, t)) {
    // The anniversary itself fires as the first event.
    --age_;
    next_birthday_ = t;
    push({t, EventKind::Birthday, next_sequence_++});
    return;
  }
  const int d_next = delta_to_next_birthday(t, birthdate).days();
  const int d_since = delta_since_last_birthday(t, birthdate).days();
  next_birthday_ = t.plus_days(d_next);
  push({next_birthday_, EventKind::Birthday, next_sequence_++});
  plan_life_year(t, d_next, d_since, ctx);
}

void Agent::plan_life_year(Date t, int d_next, int d_since, const AgentContext& ctx) {
  const ParameterSet& params = *ctx.params;
  const double scale = static_cast<double>(d_next) / static_cast<double>(d_next + d_since);
  const int year = t.year();
  for (ParamKind k : kDemographicKinds) {
    if (k == ParamKind::Birth && sex_ != Sex::Female) continue;
    if (k == ParamKind::InternalMigration &&
        (ctx.im_mode != InternalMigrationMode::FullRegional || !params.destinations)) {
      continue;
    }
    const ParameterTable* table = params.table(k);
    if (!table) continue;
    const double p = table->lookup(year, region_, sex_, age_) * scale;
    if (!(rng_.uniform() < p)) continue;
    const auto offset = static_cast<std::int32_t>(std::floor(static_cast<double>(d_next) * rng_.uniform()));
    AgentEvent e{t.plus_days(offset), event_of(k), next_sequence_++};
    if (k == ParamKind::InternalMigration) {
      const auto dest = params.destinations->draw(region_, age_, rng_);
      if (!dest) continue;
      e.destination = *dest;
    }
    push(e);
  }
}

void Agent::push(AgentEvent e) {
  queue_.push_back(e);
  std::push_heap(queue_.begin(), queue_.end(), fires_later);
}

AgentEvent Agent::pop() {
  std::pop_heap(queue_.begin(), queue_.end(), fires_later);
  const AgentEvent e = queue_.back();
  queue_.pop_back();
  return e;
}

Date Agent::next_due() const { return queue_.empty() ? next_birthday_ : queue_.front().due; }

void Agent::emit(std::vector<OutboxMessage>& outbox, MessageKind kind, EventKind event, Date t) {
  OutboxMessage m;
  m.origin = id_;
  m.sequence = next_message_++;
  m.kind = kind;
  m.event = event;
  m.date = t;
  m.region = region_;
  m.sex = sex_;
  m.age = age_;
  outbox.push_back(m);
}

void Agent::advance(Date horizon, const AgentContext& ctx, std::vector<OutboxMessage>& outbox,
                    AgentObserver* observer) {
  while (alive_ && !queue_.empty() && queue_.front().due < horizon) {
    const AgentEvent e = pop();
    const Date t = e.due;
    switch (e.kind) {
      case EventKind::Birthday: {
        ++age_;
        const int d_next = delta_to_next_birthday(t, birthdate_).days();
        next_birthday_ = t.plus_days(d_next);
        push({next_birthday_, EventKind::Birthday, next_sequence_++});
        plan_life_year(t, d_next, 0, ctx);
        break;
      }
      case EventKind::Death:
      case EventKind::Emigration:
        emit(outbox, MessageKind::TerminalNotice, e.kind, t);
        alive_ = false;
        queue_.clear();
        break;
      case EventKind::Birth:
        emit(outbox, MessageKind::BirthRequest, e.kind, t);
        break;
      case EventKind::InternalMigration:
        emit(outbox, MessageKind::Relocation, e.kind, t);
        outbox.back().destination = e.destination;
        region_ = e.destination;
        break;
      case EventKind::Relay:
        emit(outbox, MessageKind::CrossAgentEvent, e.kind, t);
        outbox.back().target = e.target;
        outbox.back().payload = e.payload;
        break;
      case EventKind::Delivered:
        ++deliveries_;
        break;
    }
    if (observer) observer->on_event(*this, e.kind, t);
  }
}

void Agent::deliver(const OutboxMessage& message, Date not_before) {
  if (!alive_) throw InputError("message delivered to removed agent " + std::to_string(id_));
  AgentEvent e{std::max(message.date, not_before), EventKind::Delivered, next_sequence_++};
  e.payload = message.payload;
  push(e);
}

void Agent::schedule_relay(Date due, AgentId target, std::uint64_t payload) {
  AgentEvent e{due, EventKind::Relay, next_sequence_++};
  e.target = target;
  e.payload = payload;
  push(e);
}

}  // namespace popabm
