#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "swarm/io.hpp"

using namespace swarm;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = SWARM_SOURCE_DIR;
const std::string kTool = SWARMSIM_PATH;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(SWARM_WORK_DIR) / "cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

struct Result {
  int code = -1;
  std::string out;
};

Result swarmsim(const std::string& args) {
  const std::string command = "'" + kTool + "' --log-level off " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe);
  char buffer[4096];
  for (std::size_t got; (got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0;) {
    r.out.append(buffer, got);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string scenario(const char* name) { return (kSource / "scenarios" / name).string(); }

}  // namespace

TEST_CASE("command line errors exit with 2") {
  CHECK(swarmsim("").code == 2);
  CHECK(swarmsim("run --seed 1 --out x").code == 2);
  CHECK(swarmsim("run --scenario a.yaml --seed one --out x").code == 2);
  CHECK(swarmsim("batch --scenario a.yaml --runs 0 --out x").code == 2);
  CHECK(swarmsim("demo --preset triangle").code == 2);
  CHECK(swarmsim("fly").code == 2);
  CHECK(swarmsim("run --scenario a.yaml --controller apf --out x").code == 2);
  CHECK(swarmsim("--help").code == 0);
}

TEST_CASE("scenario errors exit with 1") {
  const fs::path out = scratch("errors");
  CHECK(swarmsim("run --scenario /no/such.yaml --out '" + out.string() + "'").code == 1);
  for (const auto& entry : fs::directory_iterator(kSource / "tests" / "data" / "invalid")) {
    CAPTURE(entry.path().filename().string());
    CHECK(swarmsim("run --scenario '" + entry.path().string() + "' --out '" + out.string() + "'")
              .code == 1);
  }
}

TEST_CASE("single run writes its three files") {
  const fs::path out = scratch("run");
  const Result r = swarmsim("run --scenario '" + scenario("vshape.yaml") + "' --seed 4 --out '" +
                            out.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("outcome=SUCCESS", 0) == 0);
  const TrajectoryLog log = read_trajectory(out / "trajectory.csv");
  const MetricsRecord record = read_metrics(out / "metrics.txt");
  CHECK(record.seed == 4);
  CHECK(record.outcome == log.outcome);
  CHECK(record.outcome_step == log.outcome_step);
  CHECK(record.scenario_digest == log.scenario_digest);

  // The resolved scenario replays to the same bytes.
  const fs::path again = scratch("replay");
  REQUIRE(swarmsim("run --scenario '" + (out / "resolved.yaml").string() + "' --seed 99 --out '" +
                   again.string() + "'")
              .code == 0);
  CHECK(slurp(again / "trajectory.csv") == slurp(out / "trajectory.csv"));
  CHECK(slurp(again / "metrics.txt") != slurp(out / "metrics.txt"));
}

TEST_CASE("pentagon batch succeeds and reproduces") {
  const fs::path a = scratch("batch_a");
  const fs::path b = scratch("batch_b");
  const Result first = swarmsim("batch --scenario '" + scenario("pentagon.yaml") +
                                "' --runs 10 --jobs 4 --out '" + a.string() + "'");
  const Result second = swarmsim("batch --scenario '" + scenario("pentagon.yaml") +
                                 "' --runs 10 --jobs 1 --out '" + b.string() + "'");
  REQUIRE(first.code == 0);
  REQUIRE(second.code == 0);
  CHECK(first.out.find("pentagon,erc,10/10,") != std::string::npos);
  CHECK(first.out == second.out);
  CHECK(slurp(a / "aggregate.csv") == slurp(b / "aggregate.csv"));
  CHECK(slurp(a / "scenario.yaml") == slurp(b / "scenario.yaml"));

  std::vector<MetricsRecord> records;
  for (int seed = 1; seed <= 10; ++seed) {
    const fs::path run = "run_" + std::to_string(seed);
    CHECK(slurp(a / run / "trajectory.csv") == slurp(b / run / "trajectory.csv"));
    CHECK(slurp(a / run / "metrics.txt") == slurp(b / run / "metrics.txt"));
    records.push_back(read_metrics(a / run / "metrics.txt"));
  }
  const AggregateRow row = aggregate("pentagon", "erc", records);
  std::ostringstream expected;
  write_aggregate(std::span(&row, 1), expected);
  CHECK(slurp(a / "aggregate.csv") == expected.str());
}

TEST_CASE("rigid override fails the corridor") {
  const fs::path out = scratch("rigid");
  const Result r = swarmsim("batch --scenario '" + scenario("pentagon.yaml") +
                            "' --runs 3 --controller rigid_baseline --out '" + out.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("pentagon,rigid_baseline,0/3,") != std::string::npos);
}

TEST_CASE("demo writes the preset scenario") {
  const fs::path out = scratch("demo");
  REQUIRE(swarmsim("demo --preset pentagon --seed 2 --out '" + out.string() + "'").code == 0);
  const fs::path run = scratch("demo_file");
  REQUIRE(swarmsim("run --scenario '" + scenario("pentagon.yaml") + "' --seed 2 --out '" +
                   run.string() + "'")
              .code == 0);
  CHECK(slurp(out / "trajectory.csv") == slurp(run / "trajectory.csv"));
  CHECK(fs::exists(out / "scenario.yaml"));
}
