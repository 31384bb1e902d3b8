#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "popabm/census.hpp"
#include "popabm/config.hpp"
#include "popabm/csv.hpp"
#include "popabm/derive.hpp"
#include "popabm/disaggregation.hpp"
#include "popabm/errors.hpp"
#include "popabm/ipf.hpp"
#include "popabm/pipeline.hpp"
#include "popabm/scenario.hpp"
#include "popabm/validation.hpp"

namespace fs = std::filesystem;
using namespace popabm;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> workers;
  std::string out_dir;
};

void add_common(CLI::App* cmd, Overrides& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "run configuration (key = value)");
  if (config_required) c->required();
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--runs", o.runs, "ensemble size");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
}

RunConfig load_config(const Overrides& o) {
  auto c = RunConfig::read(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.runs) c.runs = *o.runs;
  if (o.workers) c.workers = *o.workers;
  if (!o.out_dir.empty()) c.out_dir = fs::absolute(o.out_dir).string();
  c.validate();
  return c;
}

int cmd_simulate(const Overrides& o) {
  const auto config = load_config(o);
  const auto dir = config.resolve(config.out_dir);
  fs::create_directories(dir);
  std::ofstream log(dir / "simulate.log");
  std::ostringstream buffer;
  const auto runs = simulate(config, buffer);
  log << buffer.str();
  std::cout << buffer.str();
  std::cout << "wrote " << runs.size() << " census files and census_mean.csv to " << dir.string() << '\n';
  return 0;
}

int cmd_derive(const Overrides& o, const std::string& census_file, const std::string& kind, std::string out,
               bool strict) {
  std::string census_path = census_file;
  if (census_path.empty()) {
    if (o.config.empty()) throw InputError("derive-params needs --census or --config");
    const auto c = load_config(o);
    census_path = (c.resolve(c.out_dir) / "census_mean.csv").string();
  }
  if (out.empty()) out = (o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir)) / "derived_params.csv";
  const auto census = read_census_csv(census_path);
  std::vector<ParamKind> kinds;
  if (kind == "all") {
    kinds = {ParamKind::Death, ParamKind::Emigration, ParamKind::Birth};
    if (!census.cells(Metric::ImOut).empty()) kinds.push_back(ParamKind::InternalMigration);
  } else {
    kinds = {parse_kind(kind)};
  }
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  std::ofstream file(out);
  if (!file) throw InputError("cannot write " + out);
  bool header = true;
  std::size_t issues = 0;
  for (ParamKind k : kinds) {
    const auto d = derive_params(census, k, strict);
    for (const auto& msg : d.issues) std::cerr << "warning: " << msg << '\n';
    issues += d.issues.size();
    write_parameter_rows(file, k, d.entries, header);
    header = false;
  }
  std::cout << "wrote " << out << " (" << issues << " empty-cell warnings)\n";
  return 0;
}

int cmd_validate(const Overrides& o, std::string ensemble_dir, std::string reference, std::string out,
                 const std::string& classes) {
  if (!o.config.empty()) {
    const auto c = load_config(o);
    if (ensemble_dir.empty()) ensemble_dir = c.resolve(c.out_dir).string();
    if (reference.empty() && !c.reference.empty()) reference = c.resolve(c.reference).string();
  }
  if (ensemble_dir.empty() || reference.empty()) throw InputError("validate needs an ensemble directory and a reference");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(ensemble_dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("census_run_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no census_run_*.csv files in " + ensemble_dir);
  std::vector<RealCensus> runs;
  for (const auto& f : files) runs.push_back(read_census_csv(f));
  const auto ref = read_census_csv(reference);
  const auto scheme = AgeClassScheme::parse(classes);
  const auto report = deviation_report(runs, ref, scheme);
  for (const auto& g : report.gaps) std::cerr << "coverage gap: " << g << '\n';
  if (out.empty()) out = (fs::path(ensemble_dir) / "deviation_report.csv").string();
  write_report_csv(out, report);
  const auto& all = report.rows.empty() ? ReportRow{} : report.rows.front();
  std::printf("%zu runs, years %d-%d: total population e_min %.6f e_max %.6f; wrote %s\n", runs.size(),
              report.first_year, report.last_year, all.e_min, all.e_max, out.c_str());
  return 0;
}

int cmd_gen(const Overrides& o, const std::string& spec_file) {
  ScenarioSpec spec = spec_file.empty() ? ScenarioSpec{} : ScenarioSpec::read(spec_file);
  if (o.seed) spec.seed = *o.seed;
  if (o.runs) spec.runs = *o.runs;
  const fs::path dir = o.out_dir.empty() ? fs::path("scenario") : fs::path(o.out_dir);
  const auto files = generate_scenario(spec, dir);
  std::cout << "wrote scenario to " << dir.string() << " (IPF " << files.ipf_sweeps << " sweeps, residual "
            << files.ipf_residual << "); run with --config " << files.config_path.string() << '\n';
  return 0;
}

int cmd_ipf(const std::string& od, const std::string& emig, const std::string& imm, const std::string& init,
            const std::string& out, double tol, int max_sweeps) {
  const auto m = MarginalSet::read_csv(od, emig, imm);
  const auto start = init.empty() ? MigrationTensor::ones_off_diagonal(m.regions, m.ages) : MigrationTensor::read_csv(init);
  const auto fit = ipf_3d(start, m, tol, max_sweeps);
  fit.tensor.write_csv(out);
  std::cout << "converged in " << fit.sweeps << " sweeps, residual " << fit.residual << "; wrote " << out << '\n';
  return 0;
}

int cmd_apportion(const std::string& input, std::int64_t total, const std::string& out) {
  const auto table = csv::Table::read(input);
  const auto c_k = table.column("key");
  const auto c_w = table.column("weight");
  std::vector<double> w;
  for (const auto& row : table.rows()) w.push_back(table.number(row, c_w));
  const auto units = apportion_integer(total, w);
  std::ofstream file(out);
  if (!file) throw InputError("cannot write " + out);
  file << "key,weight,units\n";
  for (std::size_t i = 0; i < units.size(); ++i)
    file << table.rows()[i].fields[c_k] << ',' << csv::format_number(w[i]) << ',' << units[i] << '\n';
  std::cout << "apportioned " << total << " units over " << units.size() << " cells; wrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birthday-centred agent-based population simulation"};
  app.require_subcommand(1);

  Overrides sim_o, der_o, val_o, gen_o;
  auto* sim = app.add_subcommand("simulate", "run an ensemble and write census files");
  add_common(sim, sim_o, true);

  auto* der = app.add_subcommand("derive-params", "Farr probabilities from a census file");
  add_common(der, der_o, false);
  std::string der_census, der_kind = "all", der_out;
  bool der_strict = false;
  der->add_option("--census", der_census, "census CSV (default: census_mean.csv of the config's run)");
  der->add_option("--kind", der_kind, "death, emigration, birth, internal_migration or all");
  der->add_option("--out", der_out, "parameter CSV to write");
  der->add_flag("--strict", der_strict, "fail on empty cells instead of warning");

  auto* val = app.add_subcommand("validate", "deviation report of an ensemble against a reference census");
  add_common(val, val_o, false);
  std::string val_dir, val_ref, val_out, val_classes = "0,20,40,60,80";
  val->add_option("--ensemble-dir", val_dir, "directory with census_run_*.csv");
  val->add_option("--reference", val_ref, "reference census CSV");
  val->add_option("--out", val_out, "report CSV");
  val->add_option("--age-classes", val_classes, "lower bounds of the age classes");

  auto* gen = app.add_subcommand("gen-synthetic", "write a synthetic closed-loop scenario");
  add_common(gen, gen_o, false);
  std::string gen_spec;
  gen->add_option("--spec", gen_spec, "scenario spec (key = value); defaults if omitted");

  auto* ipf = app.add_subcommand("ipf", "fit a migration tensor to three marginals");
  std::string ipf_od, ipf_em, ipf_im, ipf_init, ipf_out = "migration_tensor.csv";
  double ipf_tol = 1e-9;
  int ipf_max = 1000;
  ipf->add_option("--od", ipf_od, "origin,destination,value")->required();
  ipf->add_option("--emig", ipf_em, "origin,age,value")->required();
  ipf->add_option("--imm", ipf_im, "destination,age,value")->required();
  ipf->add_option("--init", ipf_init, "initial tensor (default ones off the diagonal)");
  ipf->add_option("--out", ipf_out, "fitted tensor CSV");
  ipf->add_option("--tol", ipf_tol, "max absolute marginal residual");
  ipf->add_option("--max-sweeps", ipf_max, "sweep limit");

  auto* app_cmd = app.add_subcommand("apportion", "integer apportionment of a total over weighted cells");
  std::string ap_in, ap_out = "apportionment.csv";
  std::int64_t ap_total = 0;
  app_cmd->add_option("--input", ap_in, "CSV with key,weight")->required();
  app_cmd->add_option("--total", ap_total, "units to distribute")->required();
  app_cmd->add_option("--out", ap_out, "CSV to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim) return cmd_simulate(sim_o);
    if (*der) return cmd_derive(der_o, der_census, der_kind, der_out, der_strict);
    if (*val) return cmd_validate(val_o, val_dir, val_ref, val_out, val_classes);
    if (*gen) return cmd_gen(gen_o, gen_spec);
    if (*ipf) return cmd_ipf(ipf_od, ipf_em, ipf_im, ipf_init, ipf_out, ipf_tol, ipf_max);
    if (*app_cmd) return cmd_apportion(ap_in, ap_total, ap_out);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
