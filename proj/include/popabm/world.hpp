#pragma once

#include <cstdint>
#include <deque>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "popabm/agent.hpp"
#include "popabm/census.hpp"
#include "popabm/region.hpp"

namespace popabm {

// Calendar-aligned synchronisation interval ("1y", "3m", "7d").
struct MacroStep {
  enum class Unit { Day, Month, Year };
  Unit unit = Unit::Year;
  int multiplier = 1;

  static MacroStep parse(std::string_view text);
  std::string to_string() const;
  // start shifted by k steps; always computed from start, never chained.
  Date boundary(Date start, int k) const;
  friend bool operator==(const MacroStep&, const MacroStep&) = default;
};

struct WorldConfig {
  Date start;
  Date end;
  MacroStep step;
  std::uint64_t seed = 1;
  int workers = 1;  // 1 runs the serial kernel
  InternalMigrationMode im_mode = InternalMigrationMode::None;
  double male_fraction = 0.5;
  int max_age = 100;  // census ages above are pooled into this one
};

struct PopulationCell {
  RegionId region = 0;
  Sex sex = Sex::Male;
  int age = 0;
  std::int64_t count = 0;
};

struct StepStats {
  Date boundary;
  double seconds = 0.0;
  std::size_t alive = 0;
  std::size_t messages = 0;
  std::size_t births = 0;
  std::size_t immigrants = 0;
  std::size_t dropped = 0;
};

// The simulation layer. It is itself a small DES whose macro-step events
// reschedule themselves and whose snapshot events fire on every Jan 1 of the
// horizon; each distinct event date is a synchronisation point.
class World {
 public:
  World(WorldConfig config, const ParameterSet& params, const RegionHierarchy& regions);

  // Initial population: birthdates are drawn uniformly within each age's
  // window at the start date.
  void populate(std::span<const PopulationCell> cells);
  AgentId add_agent(Date birthdate, Sex sex, RegionId region);
  void set_observer(AgentObserver* observer) { observer_ = observer; }
  // Makes agent `origin` send a cross-agent event to `target` on `due`.
  void schedule_cross_agent(AgentId origin, Date due, AgentId target, std::uint64_t payload = 0);

  // Runs the whole horizon.
  const Census& run();
  // Runs to the next synchronisation point. False once the horizon is done.
  bool step();

  Date current() const { return current_; }
  const WorldConfig& config() const { return config_; }
  const Census& census() const { return census_; }
  std::span<const Agent> agents() const { return agents_; }
  const Agent* find(AgentId id) const;
  std::uint64_t dropped_messages() const { return dropped_; }
  std::uint64_t initial_agents() const { return initial_; }
  const std::vector<StepStats>& log() const { return log_; }

 private:
  struct LayerEvent {
    Date at;
    int kind;  // 0 snapshot, 1 macro step
    int index;
    bool operator>(const LayerEvent& o) const { return at != o.at ? at > o.at : kind > o.kind; }
  };
  struct Immigrant {
    Date entry;
    Date birthdate;
    Sex sex;
    RegionId region;
    int age;
  };

  void check_coverage();
  void synchronise(Date boundary, StepStats& stats);
  void exchange(std::deque<OutboxMessage>& fifo, Date boundary, StepStats& stats);
  void generate_rosters(Date boundary);
  void snapshot(Date at);
  Agent* find_mutable(AgentId id);
  CensusKey key(int year, RegionId region, Sex sex, int age) const;

  WorldConfig config_;
  const ParameterSet& params_;
  const RegionHierarchy& regions_;
  AgentContext ctx_;
  AgentObserver* observer_ = nullptr;
  RandomStream world_rng_;
  std::vector<Agent> agents_;  // sorted by id
  AgentId next_id_ = 0;
  std::uint64_t initial_ = 0;
  Date current_;
  bool started_ = false;
  std::priority_queue<LayerEvent, std::vector<LayerEvent>, std::greater<>> layer_;
  int next_roster_year_ = 0;
  std::vector<Immigrant> pending_immigrants_;  // sorted by entry date
  std::size_t next_immigrant_ = 0;
  Census census_;
  std::uint64_t dropped_ = 0;
  std::vector<StepStats> log_;
};

}  // namespace popabm
