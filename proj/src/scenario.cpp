#include "popabm/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "popabm/census.hpp"
#include "popabm/csv.hpp"
#include "popabm/errors.hpp"
#include "popabm/ipf.hpp"
#include "popabm/projection.hpp"
#include "popabm/random.hpp"

namespace popabm {

AgeProfile AgeProfile::parse(const std::string& text) {
  const auto body = std::string(csv::trim(text));
  auto number = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InputError("malformed age profile '" + text + "'");
    }
  };
  if (body.find(':') == std::string::npos) return constant(number(body));
  std::vector<Band> bands;
  for (const auto& part : csv::split(body, ',')) {
    const auto colon = part.find(':');
    const auto dash = part.find('-');
    if (colon == std::string::npos || dash == std::string::npos || dash > colon) {
      throw InputError("malformed age band '" + part + "' in '" + text + "'");
    }
    const Band b{static_cast<int>(number(part.substr(0, dash))),
                 static_cast<int>(number(part.substr(dash + 1, colon - dash - 1))), number(part.substr(colon + 1))};
    if (b.lo < 0 || b.hi < b.lo) throw InputError("empty age band '" + part + "'");
    bands.push_back(b);
  }
  return AgeProfile(std::move(bands));
}

double AgeProfile::at(int age) const {
  for (const auto& b : bands_)
    if (age >= b.lo && age <= b.hi) return b.value;
  return 0.0;
}

std::string AgeProfile::to_string() const {
  if (bands_.size() == 1 && bands_[0].lo == 0 && bands_[0].hi == 1 << 30) return csv::format_number(bands_[0].value);
  std::string out;
  for (const auto& b : bands_) {
    if (!out.empty()) out += ',';
    out += std::to_string(b.lo) + "-" + std::to_string(b.hi) + ":" + csv::format_number(b.value);
  }
  return out;
}

ScenarioSpec ScenarioSpec::parse(std::istream& in, const std::string& source) {
  const auto kv = KeyValues::parse(in, source);
  ScenarioSpec s;
  s.country = kv.get_or("country", s.country);
  if (kv.has("regions")) s.regions = csv::split(kv.get("regions"), ',');
  if (kv.has("start")) s.start = Date::parse(kv.get("start"));
  if (kv.has("end")) s.end = Date::parse(kv.get("end"));
  s.step = kv.get_or("step", s.step);
  if (kv.has("max_age")) s.max_age = static_cast<int>(kv.integer("max_age"));
  if (kv.has("male_fraction")) s.male_fraction = kv.number("male_fraction");
  if (kv.has("initial")) s.initial = AgeProfile::parse(kv.get("initial"));
  if (kv.has("death")) s.death = AgeProfile::parse(kv.get("death"));
  if (kv.has("emigration")) s.emigration = AgeProfile::parse(kv.get("emigration"));
  if (kv.has("birth")) s.birth = AgeProfile::parse(kv.get("birth"));
  if (kv.has("internal_migration")) s.internal_migration = AgeProfile::parse(kv.get("internal_migration"));
  if (kv.has("immigration")) s.immigration = AgeProfile::parse(kv.get("immigration"));
  if (kv.has("im_mode")) s.im_mode = parse_im_mode(kv.get("im_mode"));
  if (kv.has("seed")) s.seed = static_cast<std::uint64_t>(kv.integer("seed"));
  if (kv.has("runs")) s.runs = static_cast<int>(kv.integer("runs"));
  if (kv.has("ipf_tol")) s.ipf_tol = kv.number("ipf_tol");
  if (kv.has("ipf_max_sweeps")) s.ipf_max_sweeps = static_cast<int>(kv.integer("ipf_max_sweeps"));
  if (const auto extra = kv.unused(); !extra.empty()) throw InputError(source + ": unknown key '" + extra.front() + "'");
  s.validate();
  return s;
}

ScenarioSpec ScenarioSpec::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse(in, path.string());
}

void ScenarioSpec::validate() const {
  if (regions.empty()) throw InputError("scenario needs at least one region");
  if (!(start < end)) throw InputError("scenario start must precede end");
  if (max_age < 0) throw InputError("scenario max_age must be non-negative");
  if (!(male_fraction >= 0.0 && male_fraction <= 1.0)) throw InputError("male_fraction outside [0,1]");
  if (runs < 1) throw InputError("runs must be at least 1");
  MacroStep::parse(step);
  for (int a = 0; a <= max_age; ++a) {
    for (const auto* p : {&death, &emigration, &birth, &internal_migration}) {
      const double v = p->at(a);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InputError("infeasible scenario: probability " + csv::format_number(v) + " at age " + std::to_string(a));
      }
    }
    for (const auto* p : {&initial, &immigration}) {
      const double v = p->at(a);
      if (!(v >= 0.0) || v != std::floor(v)) {
        throw InputError("scenario counts must be non-negative integers (age " + std::to_string(a) + ")");
      }
    }
  }
}

namespace {

std::vector<ParameterEntry> grid(const ScenarioSpec& spec, const AgeProfile& profile, bool female_only) {
  std::vector<ParameterEntry> out;
  const int last = spec.end.plus_days(-1).year();
  for (int y = spec.start.year(); y <= last; ++y)
    for (const auto& r : spec.regions)
      for (Sex s : {Sex::Male, Sex::Female})
        for (int a = 0; a <= spec.max_age; ++a)
          out.push_back({y, r, s, a, female_only && s == Sex::Male ? 0.0 : profile.at(a)});
  return out;
}

// Positive off-diagonal tensor with a working-age migration peak.
MigrationTensor true_tensor(const ScenarioSpec& spec) {
  MigrationTensor t(spec.regions, spec.max_age + 1);
  RandomStream rng(spec.seed, 0x1F0ULL);
  for (std::size_t o = 0; o < t.region_count(); ++o)
    for (std::size_t d = 0; d < t.region_count(); ++d) {
      if (o == d) continue;
      const double flow = 0.5 + rng.uniform();
      for (int a = 0; a <= spec.max_age; ++a) {
        const double peak = std::exp(-0.5 * std::pow((a - 27.0) / 12.0, 2.0));
        t.at(o, d, a) = flow * (0.2 + peak) * (0.8 + 0.4 * rng.uniform());
      }
    }
  return t;
}

}  // namespace

ScenarioFiles generate_scenario(const ScenarioSpec& spec, const std::filesystem::path& dir) {
  spec.validate();
  std::filesystem::create_directories(dir);
  const auto regions = RegionHierarchy::flat(spec.country, spec.regions);
  regions.write_csv(dir / "regions.csv");

  ParameterSet params;
  params.death = ParameterTable::build(ParamKind::Death, regions, grid(spec, spec.death, false));
  params.emigration = ParameterTable::build(ParamKind::Emigration, regions, grid(spec, spec.emigration, false));
  params.birth = ParameterTable::build(ParamKind::Birth, regions, grid(spec, spec.birth, true));
  const bool im = spec.im_mode == InternalMigrationMode::FullRegional;
  if (im) {
    params.internal_migration =
        ParameterTable::build(ParamKind::InternalMigration, regions, grid(spec, spec.internal_migration, false));
  }
  params.immigration = ParameterTable::build(ParamKind::Immigration, regions, grid(spec, spec.immigration, false));
  {
    std::vector<const ParameterTable*> tables{&*params.death, &*params.emigration, &*params.birth};
    if (im) tables.push_back(&*params.internal_migration);
    write_parameter_csv(dir / "params.csv", tables, regions);
    const ParameterTable* imm[] = {&*params.immigration};
    write_parameter_csv(dir / "immigration.csv", imm, regions);
  }

  const auto marginals = true_tensor(spec).marginals();
  marginals.write_csv(dir / "marginal_od.csv", dir / "marginal_emig_by_age.csv", dir / "marginal_imm_by_age.csv");
  const auto fit = ipf_3d(MigrationTensor::ones_off_diagonal(spec.regions, spec.max_age + 1), marginals, spec.ipf_tol,
                          spec.ipf_max_sweeps);
  fit.tensor.write_csv(dir / "migration_tensor.csv");
  if (im) params.destinations.emplace(fit.tensor, regions);

  std::vector<PopulationCell> population;
  for (const auto& code : spec.regions)
    for (Sex s : {Sex::Male, Sex::Female})
      for (int a = 0; a <= spec.max_age; ++a) {
        const auto n = static_cast<std::int64_t>(spec.initial.at(a));
        if (n > 0) population.push_back({regions.id(code), s, a, n});
      }
  write_population_csv(dir / "population.csv", population, regions);

  const ProjectionSetup setup{spec.start, spec.end, spec.max_age, spec.male_fraction, spec.im_mode};
  write_census_csv(dir / "reference_census.csv", project_expected(setup, params, regions, population));

  ScenarioFiles out;
  auto& c = out.config;
  c.start = spec.start;
  c.end = spec.end;
  c.step = MacroStep::parse(spec.step);
  c.seed = spec.seed;
  c.runs = spec.runs;
  c.im_mode = spec.im_mode;
  c.max_age = spec.max_age;
  c.male_fraction = spec.male_fraction;
  c.regions = "regions.csv";
  c.params = "params.csv";
  c.population = "population.csv";
  c.immigration = "immigration.csv";
  c.migration = im ? "migration_tensor.csv" : "";
  c.reference = "reference_census.csv";
  c.out_dir = "out";
  c.base_dir = dir;
  out.config_path = dir / "run.cfg";
  std::ofstream cfg(out.config_path);
  if (!cfg) throw InputError("cannot write " + out.config_path.string());
  cfg << c.serialize();
  out.ipf_sweeps = fit.sweeps;
  out.ipf_residual = fit.residual;
  return out;
}

}  // namespace popabm
