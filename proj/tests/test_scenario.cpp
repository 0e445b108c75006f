#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "random_scenario.hpp"
#include "sosarch/error.hpp"
#include "sosarch/rng.hpp"
#include "sosarch/scenario.hpp"
#include "sosarch/scenario_io.hpp"

using namespace sosarch;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* name) {
  const fs::path d = fs::temp_directory_path() / fs::path(std::string("sosarch_test_") + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("bundled tiny3 matches the built-in instance") {
  const Scenario s = load_scenario(fs::path(SOSARCH_DATA_DIR) / "tiny3.json");
  CHECK(s.systems.size() == 3);
  CHECK(s.interfaces.size() == 1);
  CHECK(s.capabilities.size() == 2);
  CHECK(s == tiny3());
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("bundled ew22 shape") {
  const Scenario s = load_scenario(fs::path(SOSARCH_DATA_DIR) / "ew22.json");
  CHECK(s.systems.size() == 22);
  CHECK(s.capabilities.size() == 5);
  CHECK(s.layout().total_bits() == 253);
  CHECK(s.description.find("Synthetic") != std::string::npos);
}

TEST_CASE("validation messages") {
  SUBCASE("empty candidate set") {
    Scenario s = tiny3();
    s.capabilities[1].systems.clear();
    CHECK(contains(validate_scenario(s), "capability B: no candidate systems"));
    CHECK_THROWS_AS(require_valid(s), ValidationError);
  }
  SUBCASE("unreachable floor") {
    Scenario s = tiny3();
    s.capabilities[0].performance_floor = 0.9;
    CHECK(contains(validate_scenario(s), "capability A: performance floor unreachable"));
  }
  SUBCASE("degenerate interface") {
    Scenario s = tiny3();
    s.interfaces[0].first = 3;
    s.interfaces[0].second = 3;
    CHECK(contains(validate_scenario(s), "interface 1: endpoints must differ, j < j'"));
  }
  SUBCASE("valid") { CHECK(validate_scenario(tiny3()).empty()); }
}

TEST_CASE("validate_scenario does not mutate and is repeatable") {
  Scenario s = tiny3();
  s.capabilities[0].performance_floor = 0.95;
  const Scenario before = s;
  const auto a = validate_scenario(s);
  const auto b = validate_scenario(s);
  CHECK(a == b);
  CHECK(s == before);
}

TEST_CASE("single-file and split round trips") {
  const fs::path dir = temp_dir("roundtrip");
  Rng rng(77);
  std::vector<Scenario> corpus = {tiny3(), load_scenario(fs::path(SOSARCH_DATA_DIR) / "ew22.json")};
  for (int i = 0; i < 20; ++i) corpus.push_back(testsupport::draw_scenario(rng, {.require_feasible = false}));
  int idx = 0;
  for (const Scenario& s : corpus) {
    const fs::path one = dir / ("s" + std::to_string(idx) + ".json");
    save_scenario(s, one);
    CHECK(load_scenario(one) == s);

    const fs::path split_json = dir / ("p" + std::to_string(idx) + ".json");
    const fs::path split_csv = dir / ("p" + std::to_string(idx) + "_candidates.csv");
    save_scenario_split(s, split_json, split_csv);
    CHECK(load_scenario(split_json) == s);
    ++idx;
  }
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_scenario("{not json"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"name":"x"})"), ParseError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ParseError);

  Scenario s = tiny3();
  std::istringstream dup("capability_id,kind,target_id,cost,duration,performance\nA,system,1,1,1,0.5\n");
  CHECK_THROWS_AS(merge_candidate_table(s, dup), ParseError);

  std::istringstream bad_header("cap,kind\n");
  CHECK_THROWS_AS(merge_candidate_table(s, bad_header), ParseError);

  std::istringstream unknown("capability_id,kind,target_id,cost,duration,performance\nZ,system,1,1,1,0.5\n");
  CHECK_THROWS_AS(merge_candidate_table(s, unknown), ParseError);
}

TEST_CASE("candidate table merges into the document") {
  Scenario s = tiny3();
  for (auto& c : s.capabilities) {
    c.systems.clear();
    c.interfaces.clear();
  }
  std::ostringstream csv;
  write_candidate_table(tiny3(), csv);
  std::istringstream in(csv.str());
  merge_candidate_table(s, in);
  CHECK(s == tiny3());
}
