// sosarch: validate scenarios, run the genetic search, enumerate the exact
// optimum and summarize run outputs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "sosarch/constraints.hpp"
#include "sosarch/error.hpp"
#include "sosarch/ga.hpp"
#include "sosarch/objectives.hpp"
#include "sosarch/oracle.hpp"
#include "sosarch/problem.hpp"
#include "sosarch/report.hpp"
#include "sosarch/scenario.hpp"
#include "sosarch/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace sosarch;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kRuntime = 3;

struct Options {
  std::string scenario;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  std::size_t restarts = 1;
  GaParams ga;
  std::string weights;
  std::string weight_intervals;
  std::string perf_aggregate = "max";
  std::string seeds_file;
  std::string genome;
};

std::optional<fs::path> scenario_path(const std::string& name) {
  if (fs::exists(name)) return fs::path(name);
  const fs::path bundled = fs::path(SOSARCH_DATA_DIR) / (name + ".json");
  if (fs::exists(bundled)) return bundled;
  return std::nullopt;
}

// Unvalidated.
Scenario read_scenario(const std::string& name) {
  if (const auto path = scenario_path(name)) {
    std::ifstream in(*path);
    if (!in) throw ParseError(fmt::format("cannot open {}", path->string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path->parent_path());
  }
  if (name == "tiny3") return tiny3();
  throw ValidationError(fmt::format("scenario '{}' not found", name));
}

Scenario resolve_scenario(const std::string& name) {
  Scenario s = read_scenario(name);
  require_valid(s);
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(fmt::format("{}: bad number '{}'", what, s));
  }
}

FitnessWeights parse_weights(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ValidationError("--weights expects three comma-separated values");
  FitnessWeights w{to_double(parts[0], "--weights"), to_double(parts[1], "--weights"),
                   to_double(parts[2], "--weights")};
  validate_weights(w);
  return w;
}

WeightIntervals parse_intervals(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ValidationError("--weight-intervals expects three lo:hi intervals");
  Interval iv[3];
  for (int i = 0; i < 3; ++i) {
    const auto bounds = split(parts[i], ':');
    if (bounds.size() != 2) throw ValidationError(fmt::format("--weight-intervals: bad interval '{}'", parts[i]));
    iv[i] = {to_double(bounds[0], "--weight-intervals"), to_double(bounds[1], "--weight-intervals")};
  }
  WeightIntervals out{iv[0], iv[1], iv[2]};
  validate_intervals(out);
  return out;
}

FitnessOptions fitness_options(const Options& o) {
  FitnessOptions f;
  if (!o.weights.empty() && !o.weight_intervals.empty())
    throw ValidationError("--weights and --weight-intervals are mutually exclusive");
  if (!o.weights.empty()) f.weights = parse_weights(o.weights);
  if (!o.weight_intervals.empty()) {
    Rng rng(o.seed);
    f.weights = draw_weights(parse_intervals(o.weight_intervals), rng);
  }
  if (o.perf_aggregate == "max")
    f.aggregate = PerfAggregate::max;
  else if (o.perf_aggregate == "min")
    f.aggregate = PerfAggregate::min;
  else
    throw ValidationError("--perf-aggregate must be max or min");
  return f;
}

int cmd_validate(const Options& o) {
  const Scenario s = read_scenario(o.scenario);
  const auto problems = validate_scenario(s);
  if (!problems.empty()) {
    for (const auto& msg : problems) fmt::print(std::cerr, "invalid: {}\n", msg);
    return kValidation;
  }
  const Problem p(s);
  fmt::print("scenario {}: valid\n", s.name);
  fmt::print("systems {}, interfaces {}, capabilities {}, genome bits {}\n", s.systems.size(), s.interfaces.size(),
             s.capabilities.size(), p.total_bits());
  if (!o.genome.empty()) {
    const Genome g = genome_from_string(p.layout(), o.genome);
    const auto violations = check_feasible(p, g);
    if (violations.empty()) {
      fmt::print("genome feasible, fitness {}\n", fitness(p, g, fitness_options(o)));
    } else {
      for (const auto& v : violations) fmt::print("{}\n", v.to_line());
      return kValidation;
    }
  }
  return kOk;
}

int cmd_run(const Options& o) {
  const Scenario s = resolve_scenario(o.scenario);
  const Problem p(s);
  const FitnessOptions f = fitness_options(o);
  GaParams params = o.ga;
  params.seed = o.seed;
  validate_params(params);
  std::vector<Genome> seeds;
  if (!o.seeds_file.empty()) seeds = read_seed_genomes(o.seeds_file, p.layout());

  const EvolutionReport r = run_restarts(p, f, params, o.restarts, seeds);
  write_outputs(p, r, o.out_dir);

  for (const auto& rs : r.restarts)
    fmt::print("restart {} seed {}: best {} after {} generations ({})\n", rs.restart, rs.seed, rs.best.fitness,
               rs.generations, rs.termination);
  fmt::print("global best {} (restart {})\n", r.global_best.fitness, r.global_best_restart);
  fmt::print("chromosome {}\n", genome_to_string(r.global_best.genome));
  fmt::print("outputs written to {}\n", o.out_dir);
  return kOk;
}

int cmd_oracle(const Options& o) {
  const Scenario s = resolve_scenario(o.scenario);
  const oracle::Result r = oracle::enumerate_optimum(s, fitness_options(o));
  fmt::print("scenario: {}\n", s.name);
  fmt::print("total_genomes: {}\n", r.total_count);
  fmt::print("feasible_genomes: {}\n", r.feasible_count);
  if (!r.has_feasible()) {
    fmt::print("optimum: none\n");
    return kOk;
  }
  fmt::print("optimum_fitness: {}\n", r.optimum_fitness);
  fmt::print("optimum_genomes:\n");
  for (const Genome& g : r.optimum_genomes) fmt::print("  {}\n", genome_to_string(g));
  return kOk;
}

int cmd_report(const Options& o) {
  const Scenario s = resolve_scenario(o.scenario);
  const Problem p(s);
  const fs::path dir(o.out_dir);

  std::ifstream in(dir / "best.json");
  if (!in) throw Error(fmt::format("cannot open {}", (dir / "best.json").string()));
  nlohmann::json best;
  try {
    best = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("best.json: {}", e.what()));
  }
  const PopulationTable table = read_population_table(dir / "population.csv");

  bool all_feasible = true;
  fmt::print("{:>5}  {:>10}  {:>8}  {:>9}  chromosome\n", "index", "fitness", "system", "interface");
  for (const PopulationRow& row : table.rows) {
    const Genome g = genome_from_string(p.layout(), row.chromosome);
    const bool ok = is_feasible(p, g);
    all_feasible = all_feasible && ok;
    fmt::print("{:>5}  {:>10.6f}  {:>8.4f}  {:>9.4f}  {}{}\n", row.index, row.fitness, row.system_contribution,
               row.interface_contribution, row.chromosome, ok ? "" : "  INFEASIBLE");
  }
  fmt::print("mean system contribution {:.4f}, mean interface contribution {:.4f}\n",
             table.mean_system_contribution, table.mean_interface_contribution);

  for (const auto& rs : best.at("restarts"))
    fmt::print("restart {}: best fitness {}\n", rs.at("restart").get<std::size_t>(),
               rs.at("best_fitness").get<double>());
  const auto& gb = best.at("global_best");
  const Genome g = genome_from_string(p.layout(), gb.at("chromosome").get<std::string>());
  const Genome u = genome_from_string(p.layout(), best.at("union_architecture").get<std::string>());
  const bool best_ok = is_feasible(p, g) && is_feasible(p, u);
  fmt::print("global best fitness {} (restart {})\n", gb.at("fitness").get<double>(),
             gb.at("restart").get<std::size_t>());
  fmt::print("union architecture {}\n", genome_to_string(u));
  if (!all_feasible || !best_ok) {
    fmt::print(std::cerr, "report contains infeasible genomes\n");
    return kRuntime;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"System-of-systems architecture selection"};
  app.require_subcommand(1);
  Options o;

  auto add_scenario = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario file or bundled name (tiny3, ew22)")->required();
  };
  auto add_weights = [&](CLI::App* sub) {
    sub->add_option("--weights", o.weights, "w_p,w_f,w_d summing to 1");
    sub->add_option("--weight-intervals", o.weight_intervals, "lo:hi,lo:hi,lo:hi; weights drawn with --seed");
    sub->add_option("--perf-aggregate", o.perf_aggregate, "max or min over capabilities");
    sub->add_option("--seed", o.seed, "Random seed");
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario and optionally a genome");
  add_scenario(validate);
  add_weights(validate);
  validate->add_option("--genome", o.genome, "Genome text to check for feasibility");

  auto* run = app.add_subcommand("run", "Run the genetic search and write outputs");
  add_scenario(run);
  add_weights(run);
  run->add_option("--out-dir", o.out_dir, "Output directory");
  run->add_option("--restarts", o.restarts, "Independent restarts");
  run->add_option("--pop", o.ga.population, "Population size");
  run->add_option("--gens", o.ga.max_generations, "Generation budget");
  run->add_option("--stagnation", o.ga.stagnation_window, "Stagnation window (20..50)");
  run->add_option("--pc1", o.ga.pc1, "Crossover probability below the mean");
  run->add_option("--pc2", o.ga.pc2, "Crossover probability at the maximum");
  run->add_option("--pm1", o.ga.pm1, "Maximum mutation probability");
  run->add_option("--pm2", o.ga.pm2, "Minimum mutation probability");
  run->add_option("--seeds", o.seeds_file, "File with seed genomes, one per line");

  auto* orc = app.add_subcommand("oracle", "Enumerate the exact optimum of a small scenario");
  add_scenario(orc);
  add_weights(orc);

  auto* rep = app.add_subcommand("report", "Summarize and re-check the outputs of a run");
  add_scenario(rep);
  rep->add_option("--out-dir", o.out_dir, "Directory written by run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*run) return cmd_run(o);
    if (*orc) return cmd_oracle(o);
    return cmd_report(o);
  } catch (const ValidationError& e) {
    fmt::print(std::cerr, "validation error: {}\n", e.what());
    return kValidation;
  } catch (const WeightError& e) {
    fmt::print(std::cerr, "validation error: {}\n", e.what());
    return kValidation;
  } catch (const FormatError& e) {
    fmt::print(std::cerr, "validation error: {}\n", e.what());
    return kValidation;
  } catch (const ParseError& e) {
    fmt::print(std::cerr, "validation error: {}\n", e.what());
    return kValidation;
  } catch (const TooLarge& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kRuntime;
  }
}
