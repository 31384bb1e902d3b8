#pragma once

#include <cstdint>
#include <vector>

#include "popabm/calendar.hpp"
#include "popabm/parameter_table.hpp"
#include "popabm/random.hpp"
#include "popabm/types.hpp"

namespace popabm {

// Same-day events run in enumerator order: the Birthday first, then the
// demographic kinds, then cross-agent traffic.
enum class EventKind : std::uint8_t { Birthday, Death, Emigration, Birth, InternalMigration, Relay, Delivered };

struct AgentEvent {
  Date due;
  EventKind kind = EventKind::Birthday;
  std::uint32_t sequence = 0;
  RegionId destination = -1;  // InternalMigration
  AgentId target = 0;         // Relay
  std::uint64_t payload = 0;  // Relay, Delivered
};

enum class MessageKind : std::uint8_t { BirthRequest, TerminalNotice, Relocation, CrossAgentEvent };

// Effect of one agent event on the rest of the world. Region, sex and age are
// the origin agent's attributes at event time.
struct OutboxMessage {
  AgentId origin = 0;
  std::uint32_t sequence = 0;
  MessageKind kind = MessageKind::BirthRequest;
  EventKind event = EventKind::Birth;
  Date date;
  RegionId region = -1;
  RegionId destination = -1;  // Relocation
  Sex sex = Sex::Male;
  int age = 0;
  AgentId target = 0;  // CrossAgentEvent
  std::uint64_t payload = 0;
};

struct AgentContext {
  const ParameterSet* params = nullptr;
  InternalMigrationMode im_mode = InternalMigrationMode::None;
};

class Agent;

// Notified after every processed event. May be called concurrently for
// distinct agents.
class AgentObserver {
 public:
  virtual ~AgentObserver() = default;
  virtual void on_event(const Agent& agent, EventKind kind, Date t) = 0;
};

// One person with its own event queue.
class Agent {
 public:
  // Sets age from the birthdate and schedules the first Birthday plus the
  // demographic events of the remaining life-year, each with probability
  // p * d_next / (d_next + d_since). When t is an anniversary the Birthday
  // is scheduled on t itself and draws the whole life-year when it fires.
  Agent(AgentId id, Date birthdate, Sex sex, RegionId region, Date t, const AgentContext& ctx, RandomStream rng);

  // Processes every pending event due strictly before `horizon`.
  void advance(Date horizon, const AgentContext& ctx, std::vector<OutboxMessage>& outbox,
               AgentObserver* observer = nullptr);

  // Queues a cross-agent delivery at max(message date, not_before).
  void deliver(const OutboxMessage& message, Date not_before);
  // Queues an event that will send `payload` to `target` on `due`.
  void schedule_relay(Date due, AgentId target, std::uint64_t payload);

  AgentId id() const { return id_; }
  Date birthdate() const { return birthdate_; }
  int age() const { return age_; }
  Sex sex() const { return sex_; }
  RegionId region() const { return region_; }
  bool alive() const { return alive_; }
  Date next_birthday() const { return next_birthday_; }
  std::uint32_t deliveries() const { return deliveries_; }
  const std::vector<AgentEvent>& pending() const { return queue_; }
  // Earliest pending due date; the agent's next birthday when idle.
  Date next_due() const;

 private:
  void plan_life_year(Date t, int d_next, int d_since, const AgentContext& ctx);
  void push(AgentEvent e);
  AgentEvent pop();
  void emit(std::vector<OutboxMessage>& outbox, MessageKind kind, EventKind event, Date t);

  AgentId id_;
  Date birthdate_;
  Date next_birthday_;
  RegionId region_;
  int age_ = 0;
  std::uint32_t next_sequence_ = 0;
  std::uint32_t next_message_ = 0;
  std::uint32_t deliveries_ = 0;
  Sex sex_;
  bool alive_ = true;
  RandomStream rng_;
  std::vector<AgentEvent> queue_;  // min-heap on (due, kind, sequence)
};

}  // namespace popabm
