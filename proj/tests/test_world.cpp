#include <map>

#include "doctest.h"
#include "popabm/errors.hpp"
#include "popabm/world.hpp"
#include "support.hpp"

using namespace popabm;
using testing::ymd;

namespace {

WorldConfig config(Date start, Date end, const char* step = "1y", std::uint64_t seed = 1) {
  WorldConfig c;
  c.start = start;
  c.end = end;
  c.step = MacroStep::parse(step);
  c.seed = seed;
  return c;
}

std::int64_t population(const Census& c, int year) { return c.total(Metric::P, year); }

struct Events : AgentObserver {
  void on_event(const Agent& a, EventKind kind, Date t) override {
    log.push_back({a.id(), kind, t});
    latest = std::max(latest, t);
  }
  struct Entry {
    AgentId id;
    EventKind kind;
    Date t;
  };
  std::vector<Entry> log;
  Date latest;
};

}  // namespace

TEST_CASE("macro steps") {
  CHECK(MacroStep::parse("3m").boundary(ymd(2020, 1, 31), 1) == ymd(2020, 4, 30));
  CHECK(MacroStep::parse("1m").boundary(ymd(2020, 1, 31), 2) == ymd(2020, 3, 31));
  CHECK(MacroStep::parse("7d").boundary(ymd(2020, 1, 1), 2) == ymd(2020, 1, 15));
  CHECK(MacroStep::parse("2y").to_string() == "2y");
  CHECK_THROWS_AS(MacroStep::parse("1w"), InputError);
  CHECK_THROWS_AS(MacroStep::parse("0y"), InputError);
  CHECK_THROWS_AS(MacroStep::parse("y"), InputError);
}

TEST_CASE("an empty world records nothing") {
  const auto regions = testing::flat_regions(1);
  ParameterSet params;
  World w(config(ymd(2020, 1, 1), ymd(2025, 1, 1)), params, regions);
  const Census& c = w.run();
  for (Metric m : kAllMetrics)
    for (int y = 2020; y <= 2025; ++y) CHECK(c.total(m, y) == 0);
}

TEST_CASE("one agent without dynamics is counted every year") {
  const auto regions = testing::flat_regions(1);
  ParameterSet params;
  params.death = testing::constant_table(ParamKind::Death, regions, 2020, 2029, 0.0);
  World w(config(ymd(2020, 1, 1), ymd(2030, 1, 1)), params, regions);
  w.add_agent(ymd(1990, 6, 1), Sex::Male, 1);
  const Census& c = w.run();
  for (int y = 2020; y <= 2030; ++y) {
    CHECK(population(c, y) == 1);
    CHECK(c.get(Metric::P, {y, "AT-1", Sex::Male, y - 1991}) == 1);
  }
  CHECK(c.cells(Metric::D).empty());
}

TEST_CASE("a January birthday is counted at the new age on that Jan 1") {
  const auto regions = testing::flat_regions(1);
  ParameterSet params;
  World w(config(ymd(2019, 6, 1), ymd(2021, 1, 1), "1m"), params, regions);
  w.add_agent(ymd(1980, 1, 1), Sex::Female, 1);
  w.add_agent(ymd(1980, 1, 2), Sex::Female, 1);
  const Census& c = w.run();
  CHECK(c.get(Metric::P, {2020, "AT-1", Sex::Female, 40}) == 1);
  CHECK(c.get(Metric::P, {2020, "AT-1", Sex::Female, 39}) == 1);
  CHECK(c.get(Metric::P, {2021, "AT-1", Sex::Female, 41}) == 1);
  CHECK(c.get(Metric::P, {2021, "AT-1", Sex::Female, 40}) == 1);
}

TEST_CASE("certain death over one whole life-year") {
  const auto regions = testing::flat_regions(1);
  ParameterSet params;
  params.death = testing::constant_table(ParamKind::Death, regions, 2020, 2020, 1.0);
  World w(config(ymd(2020, 1, 1), ymd(2021, 1, 1)), params, regions);
  for (int i = 0; i < 500; ++i) w.add_agent(ymd(1950 + i % 50, 1, 1), Sex::Male, 1);
  const Census& c = w.run();
  CHECK(c.total(Metric::D, 2020) == 500);
  CHECK(population(c, 2021) == 0);
}

TEST_CASE("newborn ids follow mother ids") {
  const auto regions = testing::flat_regions(1);
  ParameterSet params;
  params.birth = testing::constant_table(ParamKind::Birth, regions, 2020, 2020, 1.0);
  World w(config(ymd(2020, 1, 1), ymd(2021, 1, 1)), params, regions);
  for (int i = 0; i < 8; ++i) w.add_agent(ymd(1990, 1, 1), i == 3 || i == 7 ? Sex::Female : Sex::Male, 1);
  Events events;
  w.set_observer(&events);
  w.run();
  std::map<AgentId, Date> birth_of;
  for (const auto& e : events.log)
    if (e.kind == EventKind::Birth) birth_of[e.id] = e.t;
  REQUIRE(birth_of.size() == 2);
  REQUIRE(w.find(8));
  REQUIRE(w.find(9));
  CHECK(w.find(8)->birthdate() == birth_of[3]);
  CHECK(w.find(9)->birthdate() == birth_of[7]);
  CHECK(w.find(8)->age() == 0);
}

TEST_CASE("messages to removed or unknown agents are dropped and counted") {
  const auto regions = testing::flat_regions(1);
  ParameterSet params;
  params.death = testing::band_table(ParamKind::Death, regions, 2020, 2020, 50, 50, 1.0);
  World w(config(ymd(2020, 1, 1), ymd(2021, 1, 1)), params, regions);
  const AgentId doomed = w.add_agent(ymd(1970, 1, 1), Sex::Male, 1);
  const AgentId sender = w.add_agent(ymd(1990, 1, 1), Sex::Male, 1);
  w.schedule_cross_agent(sender, ymd(2020, 12, 31), doomed, 1);
  w.schedule_cross_agent(sender, ymd(2020, 12, 31), 999, 2);
  w.run();
  CHECK(!w.find(doomed));
  CHECK(w.dropped_messages() == 2);
  CHECK_THROWS_AS(w.schedule_cross_agent(sender, ymd(2019, 1, 1), doomed), InputError);
}

TEST_CASE("cross-agent messages arrive at the next boundary") {
  const auto regions = testing::flat_regions(1);
  ParameterSet params;
  World w(config(ymd(2020, 1, 1), ymd(2020, 6, 1), "1m"), params, regions);
  const AgentId a = w.add_agent(ymd(1990, 7, 1), Sex::Male, 1);
  const AgentId b = w.add_agent(ymd(1991, 7, 1), Sex::Male, 1);
  w.schedule_cross_agent(a, ymd(2020, 1, 15), b, 77);
  w.step();  // snapshot at the start date
  w.step();
  CHECK(w.current() == ymd(2020, 2, 1));
  CHECK(w.find(b)->deliveries() == 0);
  bool queued = false;
  for (const auto& e : w.find(b)->pending())
    if (e.kind == EventKind::Delivered) queued = e.due == ymd(2020, 2, 1) && e.payload == 77;
  CHECK(queued);
  w.step();
  CHECK(w.find(b)->deliveries() == 1);
}

TEST_CASE("no event at or after the boundary is processed early") {
  const auto regions = testing::flat_regions(2);
  ParameterSet params;
  params.death = testing::constant_table(ParamKind::Death, regions, 2020, 2022, 0.1);
  params.birth = testing::constant_table(ParamKind::Birth, regions, 2020, 2022, 0.3);
  World w(config(ymd(2020, 1, 1), ymd(2023, 1, 1), "1m"), params, regions);
  std::vector<PopulationCell> cells;
  for (int a = 0; a < 60; ++a) cells.push_back({1, a % 2 ? Sex::Female : Sex::Male, a, 20});
  w.populate(cells);
  Events events;
  w.set_observer(&events);
  while (w.step()) CHECK(events.latest < w.current());
}

TEST_CASE("agent count follows the census books at every boundary") {
  const auto regions = testing::flat_regions(2);
  ParameterSet params;
  params.death = testing::constant_table(ParamKind::Death, regions, 2020, 2025, 0.05);
  params.emigration = testing::constant_table(ParamKind::Emigration, regions, 2020, 2025, 0.03);
  params.birth = testing::constant_table(ParamKind::Birth, regions, 2020, 2025, 0.2);
  std::vector<ParameterEntry> imm;
  for (int y = 2020; y <= 2025; ++y)
    for (const char* r : {"AT-1", "AT-2"})
      for (int a = 0; a <= 40; ++a) imm.push_back({y, r, std::nullopt, a, a == 25 ? 4.0 : 0.0});
  params.immigration = ParameterTable::build(ParamKind::Immigration, regions, imm);
  World w(config(ymd(2020, 1, 1), ymd(2026, 1, 1), "1y", 5), params, regions);
  std::vector<PopulationCell> cells;
  for (int a = 0; a < 80; ++a) cells.push_back({1 + a % 2, a % 3 ? Sex::Female : Sex::Male, a, 15});
  w.populate(cells);
  std::set<AgentId> ids;
  std::int64_t expected = static_cast<std::int64_t>(w.initial_agents());
  while (w.step()) {
    const Census& c = w.census();
    const int y = w.current().year() - 1;
    if (w.current() != ymd(2020, 1, 1)) {
      expected += c.total(Metric::B, y) + c.total(Metric::I, y) - c.total(Metric::D, y) - c.total(Metric::E, y);
    }
    CHECK(static_cast<std::int64_t>(w.agents().size()) == expected);
    CHECK(population(c, w.current().year()) == expected);
    for (const auto& a : w.agents()) ids.insert(a.id());
  }
  const Census& c = w.census();
  for (int y = 2020; y <= 2025; ++y) CHECK(c.total(Metric::I, y) == 2 * 2 * 4);
  CHECK(testing::conservation_failures(c).empty());
  CHECK(ids.size() > w.initial_agents());
}

TEST_CASE("immigrants are created exactly as tabulated") {
  const auto regions = testing::flat_regions(9);
  ParameterSet params;
  std::vector<ParameterEntry> imm;
  for (int r = 1; r <= 9; ++r)
    for (Sex s : {Sex::Male, Sex::Female})
      for (int a = 0; a <= 30; ++a)
        imm.push_back({2024, "AT-" + std::to_string(r), s, a, r == 9 && s == Sex::Female && a == 30 ? 2.0 : 0.0});
  params.immigration = ParameterTable::build(ParamKind::Immigration, regions, imm);
  World w(config(ymd(2024, 1, 1), ymd(2025, 1, 1), "1m"), params, regions);
  const Census& c = w.run();
  CHECK(c.get(Metric::I, {2024, "AT-9", Sex::Female, 30}) == 2);
  CHECK(c.total(Metric::I, 2024) == 2);
  REQUIRE(w.agents().size() == 2);
  for (const auto& a : w.agents()) {
    CHECK(a.region() == regions.id("AT-9"));
    CHECK(a.sex() == Sex::Female);
  }
}

TEST_CASE("coverage gaps are rejected before the run") {
  const auto regions = testing::flat_regions(2);
  ParameterSet params;
  params.death = testing::constant_table(ParamKind::Death, regions, 2020, 2021, 0.01);
  World w(config(ymd(2020, 1, 1), ymd(2023, 1, 1)), params, regions);
  w.add_agent(ymd(1990, 1, 5), Sex::Male, 1);
  CHECK_THROWS_AS(w.run(), CoverageError);

  ParameterSet partial;
  std::vector<ParameterEntry> rows;
  for (int a = 0; a <= 100; ++a) rows.push_back({2020, "AT-1", std::nullopt, a, 0.01});
  partial.death = ParameterTable::build(ParamKind::Death, regions, rows);
  World v(config(ymd(2020, 1, 1), ymd(2021, 1, 1)), partial, regions);
  CHECK_THROWS_WITH_AS(v.add_agent(ymd(1990, 1, 5), Sex::Male, 2),
                       "death parameters do not cover region AT-2", CoverageError);
}

TEST_CASE("results do not depend on the worker count") {
  const auto regions = testing::flat_regions(3);
  ParameterSet params;
  params.death = testing::constant_table(ParamKind::Death, regions, 2020, 2024, 0.02);
  params.emigration = testing::constant_table(ParamKind::Emigration, regions, 2020, 2024, 0.01);
  params.birth = testing::constant_table(ParamKind::Birth, regions, 2020, 2024, 0.1);
  params.internal_migration = testing::constant_table(ParamKind::InternalMigration, regions, 2020, 2024, 0.05);
  params.destinations.emplace(MigrationTensor::ones_off_diagonal({"AT-1", "AT-2", "AT-3"}, 101), regions);
  std::vector<PopulationCell> cells;
  for (int a = 0; a < 90; ++a) cells.push_back({1 + a % 3, a % 2 ? Sex::Female : Sex::Male, a, 12});
  std::vector<std::string> bytes;
  for (int workers : {1, 2, 8}) {
    auto cfg = config(ymd(2020, 1, 1), ymd(2025, 1, 1), "3m", 11);
    cfg.workers = workers;
    cfg.im_mode = InternalMigrationMode::FullRegional;
    World w(cfg, params, regions);
    w.populate(cells);
    bytes.push_back(testing::census_bytes(w.run()));
    CHECK(testing::conservation_failures(w.census()).empty());
  }
  CHECK(bytes[0] == bytes[1]);
  CHECK(bytes[0] == bytes[2]);
}

TEST_CASE("invalid configurations") {
  const auto regions = testing::flat_regions(1);
  ParameterSet params;
  CHECK_THROWS_AS(World(config(ymd(2020, 1, 1), ymd(2020, 1, 1)), params, regions), InputError);
  auto cfg = config(ymd(2020, 1, 1), ymd(2021, 1, 1));
  cfg.workers = 0;
  CHECK_THROWS_AS(World(cfg, params, regions), InputError);
  cfg.workers = 1;
  cfg.im_mode = InternalMigrationMode::FullRegional;
  CHECK_THROWS_AS(World(cfg, params, regions), InputError);
}
