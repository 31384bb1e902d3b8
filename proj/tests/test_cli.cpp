#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kDir = popabm::testing::scratch_dir("cli");

int run_cli(const std::string& args) {
  const std::string cmd = std::string(POPABM_BINARY) + " " + args + " >>" + (kDir / "stdout.txt").string() +
                          " 2>" + (kDir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string path(const char* name) { return (kDir / name).string(); }

}  // namespace

TEST_CASE("gen-synthetic, simulate, derive-params and validate") {
  std::ofstream(kDir / "small.spec") << "initial = 0-89:4\nend = 2023-01-01\nruns = 2\n";
  REQUIRE(run_cli("gen-synthetic --spec " + path("small.spec") + " --out-dir " + path("sc")) == 0);
  for (const char* f : {"regions.csv", "params.csv", "population.csv", "immigration.csv", "migration_tensor.csv",
                        "marginal_od.csv", "reference_census.csv", "run.cfg"})
    CHECK(fs::exists(kDir / "sc" / f));

  const std::string cfg = path("sc/run.cfg");
  REQUIRE(run_cli("simulate --config " + cfg + " --out-dir " + path("out1") + " --workers 2") == 0);
  CHECK(fs::exists(kDir / "out1" / "census_run_000.csv"));
  CHECK(fs::exists(kDir / "out1" / "census_run_001.csv"));
  CHECK(!fs::exists(kDir / "out1" / "census_run_002.csv"));
  CHECK(fs::exists(kDir / "out1" / "census_mean.csv"));
  const std::string log = slurp(kDir / "out1" / "simulate.log");
  CHECK(log.find("dropped") != std::string::npos);
  CHECK(log.find("runtime") != std::string::npos);

  REQUIRE(run_cli("simulate --config " + cfg + " --out-dir " + path("out2")) == 0);
  CHECK(slurp(kDir / "out1" / "census_run_001.csv") == slurp(kDir / "out2" / "census_run_001.csv"));
  CHECK(slurp(kDir / "out1" / "census_mean.csv") == slurp(kDir / "out2" / "census_mean.csv"));

  REQUIRE(run_cli("simulate --config " + cfg + " --out-dir " + path("out3") + " --seed 99 --runs 1") == 0);
  CHECK(slurp(kDir / "out1" / "census_run_000.csv") != slurp(kDir / "out3" / "census_run_000.csv"));

  REQUIRE(run_cli("derive-params --census " + path("out1/census_mean.csv") + " --out " + path("derived.csv")) == 0);
  CHECK(first_line(kDir / "derived.csv") == "kind,year,region,sex,age,value");
  CHECK(slurp(kDir / "derived.csv").find("internal_migration") != std::string::npos);

  REQUIRE(run_cli("validate --config " + cfg + " --ensemble-dir " + path("out1") + " --out " + path("report.csv")) == 0);
  CHECK(first_line(kDir / "report.csv") == "region,sex,age_class,e_min,e_min_ci_lo,e_min_ci_hi,e_max,e_max_ci_lo,e_max_ci_hi");
  REQUIRE(run_cli("validate --ensemble-dir " + path("out1") + " --reference " + path("sc/reference_census.csv") +
                 " --age-classes 0,50 --out " + path("report2.csv")) == 0);
  CHECK(slurp(kDir / "report2.csv").find("50+") != std::string::npos);
}

TEST_CASE("ipf and apportion subcommands") {
  std::ofstream(kDir / "ipf.spec") << "initial = 0-9:1\nend = 2021-01-01\n";
  REQUIRE(run_cli("gen-synthetic --spec " + path("ipf.spec") + " --out-dir " + path("ipf")) == 0);
  const std::string marg = " --od " + path("ipf/marginal_od.csv") + " --emig " + path("ipf/marginal_emig_by_age.csv") +
                           " --imm " + path("ipf/marginal_imm_by_age.csv");
  CHECK(run_cli("ipf" + marg + " --out " + path("fit.csv")) == 0);
  CHECK(first_line(kDir / "fit.csv") == "origin,destination,age,value");
  CHECK(run_cli("ipf" + marg + " --tol 1e-15 --max-sweeps 1 --out " + path("nofit.csv")) == 2);

  std::ofstream(kDir / "w.csv") << "key,weight\na,6\nb,3\nc,1\n";
  REQUIRE(run_cli("apportion --input " + path("w.csv") + " --total 10 --out " + path("units.csv")) == 0);
  CHECK(slurp(kDir / "units.csv") == "key,weight,units\na,6,6\nb,3,3\nc,1,1\n");
}

TEST_CASE("input problems exit with status 1 and a message") {
  CHECK(run_cli("simulate --config " + path("missing.cfg")) == 1);
  CHECK(slurp(kDir / "stderr.txt").find("missing.cfg") != std::string::npos);

  std::ofstream(kDir / "gap.spec") << "initial = 0-9:1\nend = 2022-01-01\n";
  REQUIRE(run_cli("gen-synthetic --spec " + path("gap.spec") + " --out-dir " + path("gap")) == 0);
  std::string cfg = slurp(kDir / "gap" / "run.cfg");
  const auto pos = cfg.find("end = 2022-01-01");
  REQUIRE(pos != std::string::npos);
  cfg.replace(pos, 16, "end = 2024-01-01");
  std::ofstream(kDir / "gap" / "long.cfg") << cfg;
  CHECK(run_cli("simulate --config " + path("gap/long.cfg") + " --out-dir " + path("gap/out")) == 1);
  CHECK(slurp(kDir / "stderr.txt").find("year 2022") != std::string::npos);

  CHECK(run_cli("simulate --bogus") == 1);
  CHECK(run_cli("apportion --input " + path("w.csv")) == 1);
}
