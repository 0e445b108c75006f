#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sosarch/oracle.hpp"
#include "sosarch/scenario.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "sosarch_cli_test";

struct Outcome {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli(const std::string& args) {
  fs::create_directories(kWork);
  const fs::path out = kWork / "stdout.txt", err = kWork / "stderr.txt";
  const std::string cmd = std::string("\"") + SOSARCH_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("missing scenario is a usage error") {
  const Outcome o = cli("run --pop 20");
  CHECK(o.code == 2);
  CHECK(o.err.find("--scenario") != std::string::npos);
}

TEST_CASE("no subcommand is a usage error") { CHECK(cli("").code == 2); }

TEST_CASE("validate") {
  CHECK(cli("validate --scenario tiny3").code == 0);
  CHECK(cli("validate --scenario ew22").code == 0);
  const Outcome ok = cli("validate --scenario tiny3 --genome 101010");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("genome feasible") != std::string::npos);
  const Outcome bad = cli("validate --scenario tiny3 --genome 000000");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("coverage capability=B: no selected system") != std::string::npos);
  CHECK(cli("validate --scenario tiny3 --genome 10").code == 2);

  fs::create_directories(kWork);
  std::ofstream(kWork / "broken.json") << R"({"name":"b","expected_duration":1,
    "systems":[{"id":1,"label":"S1"}],"interfaces":[],
    "capabilities":[{"id":"B","budget":1,"deadline":1,"performance_floor":0.5}]})";
  const Outcome inv = cli("validate --scenario " + (kWork / "broken.json").string());
  CHECK(inv.code == 2);
  CHECK(inv.err.find("capability B: no candidate systems") != std::string::npos);
  CHECK(cli("validate --scenario does-not-exist").code == 2);
}

TEST_CASE("run on tiny3 reaches the oracle optimum") {
  const fs::path dir = kWork / "tiny3_run";
  fs::remove_all(dir);
  const Outcome o =
      cli("run --scenario tiny3 --pop 20 --gens 150 --seed 1 --weights 0.333,0.333,0.334 --out-dir " + dir.string());
  REQUIRE(o.code == 0);
  for (const char* f : {"best.json", "curve.csv", "population.csv", "run.log.jsonl"}) CHECK(fs::exists(dir / f));

  sosarch::FitnessOptions opts;
  opts.weights = {0.333, 0.333, 0.334};
  const auto oracle = sosarch::oracle::enumerate_optimum(sosarch::tiny3(), opts);
  const auto best = nlohmann::json::parse(slurp(dir / "best.json"));
  CHECK(best.at("global_best").at("fitness").get<double>() == oracle.optimum_fitness);
  CHECK(best.at("global_best").at("chromosome").get<std::string>() == "101010");

  CHECK(cli("report --scenario tiny3 --out-dir " + dir.string()).code == 0);
}

TEST_CASE("repeated runs write identical files") {
  const fs::path a = kWork / "det_a", b = kWork / "det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  REQUIRE(cli("run --scenario tiny3 --restarts 3 --seed 7 --out-dir " + a.string()).code == 0);
  REQUIRE(cli("run --scenario tiny3 --restarts 3 --seed 7 --out-dir " + b.string()).code == 0);
  for (const char* f : {"best.json", "curve.csv", "population.csv", "run.log.jsonl"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("weight flags") {
  const fs::path dir = kWork / "weights";
  CHECK(cli("run --scenario tiny3 --weights 0.5,0.5,0.5 --out-dir " + dir.string()).code == 2);
  CHECK(cli("run --scenario tiny3 --weights 0.5,0.5 --out-dir " + dir.string()).code == 2);
  CHECK(cli("run --scenario tiny3 --weight-intervals 0.5:0.6,0.5:0.6,0.5:0.6 --out-dir " + dir.string()).code == 2);
  REQUIRE(cli("run --scenario tiny3 --weight-intervals 0.2:0.5,0.2:0.5,0.2:0.5 --seed 4 --out-dir " + dir.string())
              .code == 0);
  const auto best = nlohmann::json::parse(slurp(dir / "best.json"));
  const auto& w = best.at("weights");
  const double sum = w.at("performance").get<double>() + w.at("cost").get<double>() + w.at("duration").get<double>();
  CHECK(std::abs(sum - 1.0) <= 1e-9);
  CHECK(cli("run --scenario tiny3 --perf-aggregate median --out-dir " + dir.string()).code == 2);
  CHECK(cli("run --scenario tiny3 --stagnation 10 --out-dir " + dir.string()).code == 2);
}

TEST_CASE("oracle subcommand") {
  const Outcome o = cli("oracle --scenario tiny3");
  REQUIRE(o.code == 0);
  CHECK(o.out.find("optimum_fitness: 0.7666666666666666") != std::string::npos);
  CHECK(o.out.find("feasible_genomes: 1") != std::string::npos);
  CHECK(cli("oracle --scenario ew22").code == 2);
}

TEST_CASE("runtime errors exit with 3") {
  fs::create_directories(kWork);
  std::ofstream(kWork / "plain_file") << "x";
  CHECK(cli("run --scenario tiny3 --out-dir " + (kWork / "plain_file" / "sub").string()).code == 3);
  CHECK(cli("report --scenario tiny3 --out-dir " + (kWork / "nowhere").string()).code == 3);
}
