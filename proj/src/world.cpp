#include "popabm/world.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <set>

#include "popabm/errors.hpp"
#include "popabm/kernels.hpp"

namespace popabm {

MacroStep MacroStep::parse(std::string_view text) {
  MacroStep s;
  if (text.size() < 2) throw InputError("malformed macro step '" + std::string(text) + "'");
  const char unit = text.back();
  const auto digits = text.substr(0, text.size() - 1);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), s.multiplier);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || s.multiplier <= 0) {
    throw InputError("malformed macro step '" + std::string(text) + "'");
  }
  switch (unit) {
    case 'd': s.unit = Unit::Day; break;
    case 'm': s.unit = Unit::Month; break;
    case 'y': s.unit = Unit::Year; break;
    default: throw InputError("macro step unit must be d, m or y in '" + std::string(text) + "'");
  }
  return s;
}

std::string MacroStep::to_string() const {
  const char u = unit == Unit::Day ? 'd' : unit == Unit::Month ? 'm' : 'y';
  return std::to_string(multiplier) + u;
}

Date MacroStep::boundary(Date start, int k) const {
  switch (unit) {
    case Unit::Day: return start.plus_days(k * multiplier);
    case Unit::Month: return add_months(start, k * multiplier);
    case Unit::Year: return add_years(start, k * multiplier);
  }
  return start;
}

World::World(WorldConfig config, const ParameterSet& params, const RegionHierarchy& regions)
    : config_(config),
      params_(params),
      regions_(regions),
      ctx_{&params, config.im_mode},
      world_rng_(rng_substream(config.seed, kWorldStreamId)),
      current_(config.start),
      next_roster_year_(config.start.year()) {
  if (!(config_.start < config_.end)) throw InputError("start date must precede end date");
  if (config_.workers < 1) throw InputError("worker count must be at least 1");
  if (!(config_.male_fraction >= 0.0 && config_.male_fraction <= 1.0)) {
    throw InputError("male fraction must lie in [0,1]");
  }
  if (config_.max_age < 0) throw InputError("max_age must be non-negative");
  if (config_.im_mode == InternalMigrationMode::FullRegional && !params_.destinations) {
    throw InputError("full-regional internal migration needs a migration tensor");
  }
}

AgentId World::add_agent(Date birthdate, Sex sex, RegionId region) {
  if (started_) throw InputError("agents can only be added before the run starts");
  if (region < 0 || static_cast<std::size_t>(region) >= regions_.size()) throw InputError("unknown region id");
  for (ParamKind k : {ParamKind::Death, ParamKind::Emigration, ParamKind::Birth, ParamKind::InternalMigration}) {
    if (k == ParamKind::InternalMigration && config_.im_mode != InternalMigrationMode::FullRegional) continue;
    const ParameterTable* t = params_.table(k);
    if (t && !t->covers_region(region)) {
      throw CoverageError(std::string(kind_name(k)) + " parameters do not cover region " + regions_.code(region));
    }
  }
  const AgentId id = next_id_++;
  agents_.emplace_back(id, birthdate, sex, region, config_.start, ctx_, rng_substream(config_.seed, id));
  ++initial_;
  return id;
}

void World::populate(std::span<const PopulationCell> cells) {
  for (const auto& c : cells) {
    if (c.count < 0) throw InputError("negative population count");
    const auto [lo, hi] = birthdate_window(config_.start, c.age);
    for (std::int64_t i = 0; i < c.count; ++i) {
      const Date bd = Date::from_serial(static_cast<std::int32_t>(world_rng_.uniform_int(lo.serial(), hi.serial())));
      add_agent(bd, c.sex, c.region);
    }
  }
}

void World::schedule_cross_agent(AgentId origin, Date due, AgentId target, std::uint64_t payload) {
  Agent* a = find_mutable(origin);
  if (!a || !a->alive()) throw InputError("unknown origin agent " + std::to_string(origin));
  if (due < current_) throw InputError("cross-agent event scheduled in the past");
  a->schedule_relay(due, target, payload);
}

const Agent* World::find(AgentId id) const {
  const auto it = std::lower_bound(agents_.begin(), agents_.end(), id,
                                   [](const Agent& a, AgentId v) { return a.id() < v; });
  return it != agents_.end() && it->id() == id ? &*it : nullptr;
}

Agent* World::find_mutable(AgentId id) { return const_cast<Agent*>(std::as_const(*this).find(id)); }

CensusKey World::key(int year, RegionId region, Sex sex, int age) const {
  return {year, regions_.code(region), sex, std::min(age, config_.max_age)};
}

void World::check_coverage() {
  const int y0 = config_.start.year();
  const int y1 = config_.end.plus_days(-1).year();
  std::set<RegionId> reachable;
  for (const auto& a : agents_) reachable.insert(a.region());
  if (params_.immigration) {
    for (RegionId r : params_.immigration->rows()) reachable.insert(r);
  }
  const bool im = config_.im_mode == InternalMigrationMode::FullRegional;
  if (im) {
    for (RegionId r : params_.destinations->destinations()) reachable.insert(r);
  }
  for (ParamKind k : {ParamKind::Death, ParamKind::Emigration, ParamKind::Birth, ParamKind::InternalMigration,
                      ParamKind::Immigration}) {
    if (k == ParamKind::InternalMigration && !im) continue;
    const ParameterTable* t = params_.table(k);
    if (!t) continue;
    for (int y = y0; y <= y1; ++y) {
      if (!t->covers_year(y)) {
        throw CoverageError(std::string(kind_name(k)) + " parameters do not cover year " + std::to_string(y));
      }
    }
    if (k == ParamKind::Immigration) continue;
    for (RegionId r : reachable) {
      if (!t->covers_region(r)) {
        throw CoverageError(std::string(kind_name(k)) + " parameters do not cover region " + regions_.code(r));
      }
    }
  }
  if (im) {
    for (RegionId r : reachable) {
      if (!params_.destinations->covers(r)) {
        throw CoverageError("migration tensor does not cover region " + regions_.code(r));
      }
    }
  }
}

const Census& World::run() {
  while (step()) {
  }
  return census_;
}

bool World::step() {
  if (!started_) {
    check_coverage();
    started_ = true;
    for (int y = config_.start.year() + (config_.start == jan_first(config_.start.year()) ? 0 : 1);; ++y) {
      const Date j = jan_first(y);
      if (j > config_.end) break;
      layer_.push({j, 0, y});
    }
    layer_.push({std::min(config_.step.boundary(config_.start, 1), config_.end), 1, 1});
  }
  if (layer_.empty()) return false;

  const Date b = layer_.top().at;
  bool take_snapshot = false;
  while (!layer_.empty() && layer_.top().at == b) {
    const LayerEvent e = layer_.top();
    layer_.pop();
    if (e.kind == 0) {
      take_snapshot = true;
    } else if (b < config_.end) {
      layer_.push({std::min(config_.step.boundary(config_.start, e.index + 1), config_.end), 1, e.index + 1});
    }
  }

  StepStats stats;
  stats.boundary = b;
  const auto t0 = std::chrono::steady_clock::now();
  synchronise(b, stats);
  if (take_snapshot) snapshot(b);
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  stats.alive = agents_.size();
  log_.push_back(stats);
  current_ = b;
  return !layer_.empty();
}

void World::synchronise(Date b, StepStats& stats) {
  const auto dropped_before = dropped_;
  // Phase 1: every agent advances on its own.
  auto messages = advance_agents_parallel(agents_, b, ctx_, config_.workers, observer_);
  stats.messages = messages.size();
  // Phase 2: effects in (origin, sequence) order.
  std::deque<OutboxMessage> fifo(messages.begin(), messages.end());
  exchange(fifo, b, stats);
  // Phase 3: immigrants whose entry date has passed.
  generate_rosters(b);
  while (next_immigrant_ < pending_immigrants_.size() && pending_immigrants_[next_immigrant_].entry < b) {
    const Immigrant& im = pending_immigrants_[next_immigrant_++];
    const AgentId id = next_id_++;
    census_.add(Metric::I, key(im.entry.year(), im.region, im.sex, im.age), 1);
    agents_.emplace_back(id, im.birthdate, im.sex, im.region, im.entry, ctx_, rng_substream(config_.seed, id));
    std::vector<OutboxMessage> out;
    agents_.back().advance(b, ctx_, out, observer_);
    fifo.insert(fifo.end(), out.begin(), out.end());
    ++stats.immigrants;
  }
  exchange(fifo, b, stats);
  std::erase_if(agents_, [](const Agent& a) { return !a.alive(); });
  stats.dropped = static_cast<std::size_t>(dropped_ - dropped_before);
}

void World::exchange(std::deque<OutboxMessage>& fifo, Date b, StepStats& stats) {
  std::vector<OutboxMessage> out;
  while (!fifo.empty()) {
    const OutboxMessage m = fifo.front();
    fifo.pop_front();
    const int year = m.date.year();
    switch (m.kind) {
      case MessageKind::BirthRequest: {
        census_.add(Metric::B, key(year, m.region, m.sex, m.age), 1);
        const AgentId id = next_id_++;
        RandomStream rng = rng_substream(config_.seed, id);
        const Sex sex = rng.uniform() < config_.male_fraction ? Sex::Male : Sex::Female;
        agents_.emplace_back(id, m.date, sex, m.region, m.date, ctx_, rng);
        out.clear();
        agents_.back().advance(b, ctx_, out, observer_);
        fifo.insert(fifo.end(), out.begin(), out.end());
        ++stats.births;
        break;
      }
      case MessageKind::TerminalNotice:
        census_.add(m.event == EventKind::Death ? Metric::D : Metric::E, key(year, m.region, m.sex, m.age), 1);
        break;
      case MessageKind::Relocation:
        census_.add(Metric::ImOut, key(year, m.region, m.sex, m.age), 1);
        census_.add(Metric::ImIn, key(year, m.destination, m.sex, m.age), 1);
        break;
      case MessageKind::CrossAgentEvent: {
        Agent* target = find_mutable(m.target);
        if (!target || !target->alive()) {
          ++dropped_;
        } else {
          target->deliver(m, b);
        }
        break;
      }
    }
  }
}

void World::generate_rosters(Date b) {
  const ParameterTable* t = params_.table(ParamKind::Immigration);
  if (!t) return;
  const int last = config_.end.plus_days(-1).year();
  bool added = false;
  while (next_roster_year_ <= last && jan_first(next_roster_year_) < b) {
    const int y = next_roster_year_++;
    const Date j = jan_first(y);
    const int days = days_in_year(y);
    for (std::size_t row = 0; row < t->rows().size(); ++row) {
      const RegionId r = t->rows()[row];
      for (Sex s : {Sex::Male, Sex::Female}) {
        for (int a = 0; a <= t->max_age(); ++a) {
          const auto count = static_cast<std::int64_t>(t->lookup(y, r, s, a));
          for (std::int64_t i = 0; i < count; ++i) {
            const Date entry = j.plus_days(static_cast<std::int32_t>(world_rng_.uniform_int(0, days - 1)));
            const auto [lo, hi] = birthdate_window(entry, a);
            const Date bd =
                Date::from_serial(static_cast<std::int32_t>(world_rng_.uniform_int(lo.serial(), hi.serial())));
            if (entry < config_.start || !(entry < config_.end)) continue;
            pending_immigrants_.push_back({entry, bd, s, r, a});
            added = true;
          }
        }
      }
    }
  }
  if (added) {
    std::stable_sort(pending_immigrants_.begin() + static_cast<std::ptrdiff_t>(next_immigrant_),
                     pending_immigrants_.end(),
                     [](const Immigrant& x, const Immigrant& y) { return x.entry < y.entry; });
  }
}

void World::snapshot(Date at) {
  const int ages = config_.max_age + 1;
  std::vector<std::int64_t> counts(regions_.size() * kSexCount * static_cast<std::size_t>(ages), 0);
  for (const auto& a : agents_) {
    // Birthdays dated `at` belong before the snapshot; they are still queued.
    const int age = std::min(a.age() + (a.next_birthday() == at ? 1 : 0), config_.max_age);
    ++counts[(static_cast<std::size_t>(a.region()) * kSexCount + static_cast<std::size_t>(index_of(a.sex()))) *
                 static_cast<std::size_t>(ages) +
             static_cast<std::size_t>(age)];
  }
  for (std::size_t r = 0; r < regions_.size(); ++r)
    for (Sex s : {Sex::Male, Sex::Female})
      for (int a = 0; a < ages; ++a) {
        const auto c = counts[(r * kSexCount + static_cast<std::size_t>(index_of(s))) * static_cast<std::size_t>(ages) +
                              static_cast<std::size_t>(a)];
        if (c > 0) census_.add(Metric::P, key(at.year(), static_cast<RegionId>(r), s, a), c);
      }
}

}  // namespace popabm
