#include "popabm/pipeline.hpp"

#include <cstdio>
#include <ostream>

#include "popabm/errors.hpp"
#include "popabm/validation.hpp"

namespace popabm {

RunInputs load_inputs(const RunConfig& config) {
  RunInputs in;
  in.regions = RegionHierarchy::read_csv(config.resolve(config.regions));
  auto install = [&](std::vector<ParameterTable> tables, const std::string& file) {
    for (auto& t : tables) {
      auto& slot = in.params.slot(t.kind());
      if (slot) throw InputError(file + ": " + std::string(kind_name(t.kind())) + " given twice");
      slot = std::move(t);
    }
  };
  install(read_parameter_csv(config.resolve(config.params), in.regions), config.params);
  if (!config.immigration.empty()) {
    install(read_parameter_csv(config.resolve(config.immigration), in.regions), config.immigration);
  }
  for (ParamKind k : {ParamKind::Death, ParamKind::Emigration, ParamKind::Birth}) {
    if (!in.params.table(k)) throw InputError(config.params + ": no " + std::string(kind_name(k)) + " rows");
  }
  if (config.im_mode == InternalMigrationMode::FullRegional) {
    if (!in.params.table(ParamKind::InternalMigration)) {
      throw InputError(config.params + ": full-regional mode needs internal_migration rows");
    }
    in.params.destinations.emplace(MigrationTensor::read_csv(config.resolve(config.migration)), in.regions);
  }
  if (!config.population.empty()) {
    in.population = read_population_csv(config.resolve(config.population), in.regions);
  }
  return in;
}

WorldConfig world_config(const RunConfig& config, std::uint64_t seed) {
  WorldConfig w;
  w.start = config.start;
  w.end = config.end;
  w.step = config.step;
  w.seed = seed;
  w.workers = config.workers;
  w.im_mode = config.im_mode;
  w.male_fraction = config.male_fraction;
  w.max_age = config.max_age;
  return w;
}

std::vector<Census> run_ensemble(const RunConfig& config, const RunInputs& inputs, std::ostream* log) {
  std::vector<Census> out;
  for (int i = 0; i < config.runs; ++i) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
    World world(world_config(config, seed), inputs.params, inputs.regions);
    world.populate(inputs.population);
    world.run();
    if (log) {
      *log << "run " << i << " seed " << seed << ": " << world.initial_agents() << " initial agents, "
           << world.agents().size() << " alive at end, " << world.dropped_messages() << " dropped messages\n";
      for (const auto& s : world.log()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", s.seconds);
        *log << "  step " << s.boundary.to_string() << " runtime " << buf << "s alive " << s.alive << " messages "
             << s.messages << " births " << s.births << " immigrants " << s.immigrants << " dropped " << s.dropped
             << '\n';
      }
    }
    out.push_back(world.census());
  }
  return out;
}

std::vector<Census> simulate(const RunConfig& config, std::ostream& log) {
  const auto inputs = load_inputs(config);
  const auto dir = config.resolve(config.out_dir);
  std::filesystem::create_directories(dir);
  auto runs = run_ensemble(config, inputs, &log);
  std::vector<RealCensus> real;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "census_run_%03zu.csv", i);
    write_census_csv(dir / name, runs[i]);
    real.push_back(to_real(runs[i]));
  }
  write_census_csv(dir / "census_mean.csv", ensemble_mean(real));
  return runs;
}

}  // namespace popabm
