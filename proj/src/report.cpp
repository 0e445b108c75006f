#include "sosarch/report.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "sosarch/error.hpp"
#include "sosarch/rng.hpp"

namespace sosarch {

Genome union_architecture(const Problem& p, const Assignment& assignment) {
  Genome g(p.layout());
  for (const CapabilitySelection& sel : assignment.capabilities) {
    for (std::size_t j : sel.systems) g.set(p.layout().system_bit_index(j));
    for (std::size_t k : sel.interfaces) g.set(p.interface_position(k));
  }
  return g;
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart) { return splitmix64(seed + restart); }

EvolutionReport run_restarts(const Problem& p, const FitnessOptions& fitness, const GaParams& params,
                             std::size_t restarts, const std::vector<Genome>& seeds) {
  if (restarts == 0) throw ValidationError("restarts must be >= 1");
  validate_params(params);
  EvolutionReport report;
  report.params = params;
  report.fitness = fitness;

  for (std::size_t r = 0; r < restarts; ++r) {
    GaParams sub = params;
    sub.seed = restart_seed(params.seed, r);
    GeneticSearch ga(p, fitness, sub);
    RunResult run = ga.run(seeds);
    report.restarts.push_back({r, sub.seed, run.best, run.curve.size() - 1, run.termination});
    if (r == 0 || run.best.fitness > report.global_best.fitness) {
      report.global_best = run.best;
      report.global_best_restart = r;
    }
    report.runs.push_back(std::move(run));
  }
  report.union_architecture = union_architecture(p, decode_assignment(p, report.global_best.genome));
  return report;
}

void write_population_table(const Population& pop, std::ostream& out) {
  out << "index,chromosome,fitness,system_contribution,interface_contribution\n";
  double sum_f = 0.0, sum_s = 0.0, sum_i = 0.0;
  for (std::size_t i = 0; i < pop.members.size(); ++i) {
    const Member& m = pop.members[i];
    const Contributions c = contributions(m.genome);
    out << fmt::format("{},{},{},{},{}\n", i, genome_to_string(m.genome), m.fitness, c.system, c.interface);
    sum_f += m.fitness;
    sum_s += c.system;
    sum_i += c.interface;
  }
  const double n = pop.members.empty() ? 1.0 : static_cast<double>(pop.members.size());
  out << fmt::format("mean,,{},{},{}\n", sum_f / n, sum_s / n, sum_i / n);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError(fmt::format("{}: bad number '{}'", what, s));
  return v;
}

}  // namespace

void write_population_table(const Population& pop, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_population_table(pop, out);
}

void write_curve(const RunResult& run, std::ostream& out) {
  out << "generation,best_fitness,mean_fitness\n";
  for (const GenerationRecord& g : run.curve) out << fmt::format("{},{},{}\n", g.generation, g.best, g.mean);
}

void write_curve(const RunResult& run, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_curve(run, out);
}

std::string best_json(const Problem& p, const EvolutionReport& r) {
  using nlohmann::json;
  const auto& gp = r.params;
  json doc;
  doc["scenario"] = p.scenario().name;
  doc["params"] = {{"population", gp.population}, {"max_generations", gp.max_generations},
                   {"stagnation_window", gp.stagnation_window}, {"pc1", gp.pc1}, {"pc2", gp.pc2},
                   {"pm1", gp.pm1}, {"pm2", gp.pm2}, {"seed", gp.seed}};
  doc["weights"] = {{"performance", r.fitness.weights.performance},
                    {"cost", r.fitness.weights.cost},
                    {"duration", r.fitness.weights.duration}};
  doc["perf_aggregate"] = r.fitness.aggregate == PerfAggregate::max ? "max" : "min";

  doc["restarts"] = json::array();
  for (const RestartSummary& s : r.restarts) {
    doc["restarts"].push_back({{"restart", s.restart},
                               {"seed", s.seed},
                               {"best_fitness", s.best.fitness},
                               {"chromosome", genome_to_string(s.best.genome)},
                               {"generations", s.generations},
                               {"termination", s.termination}});
  }

  const Genome& best = r.global_best.genome;
  const Contributions c = contributions(best);
  json gb{{"restart", r.global_best_restart},
          {"fitness", r.global_best.fitness},
          {"chromosome", genome_to_string(best)},
          {"system_contribution", c.system},
          {"interface_contribution", c.interface},
          {"feasible", is_feasible(p, best)}};
  if (is_feasible(p, best)) {
    const ObjectiveVector v = objective_vector(p, best, r.fitness.aggregate);
    gb["objectives"] = {{"performance", v.performance}, {"cost", v.cost}, {"duration", v.duration}};
  }
  json selection = json::array();
  const Assignment a = decode_assignment(p, best);
  for (std::size_t i = 0; i < a.capabilities.size(); ++i)
    selection.push_back({{"capability", p.scenario().capabilities[i].id},
                         {"systems", a.capabilities[i].systems},
                         {"interfaces", a.capabilities[i].interfaces}});
  gb["selection"] = std::move(selection);
  doc["global_best"] = std::move(gb);
  doc["union_architecture"] = genome_to_string(r.union_architecture);
  doc["termination_reason"] = r.best_run().termination;
  return doc.dump(2) + "\n";
}

void write_run_log(const EvolutionReport& r, std::ostream& out) {
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    for (const GenerationRecord& g : r.runs[i].curve) {
      const nlohmann::json rec{{"restart", i},
                               {"generation", g.generation},
                               {"best", g.best},
                               {"mean", g.mean},
                               {"accepted_mutations", g.accepted_mutations},
                               {"crossovers", g.crossovers}};
      out << rec.dump() << "\n";
    }
  }
}

void write_outputs(const Problem& p, const EvolutionReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "best.json");
    out << best_json(p, r);
  }
  write_curve(r.best_run(), dir / "curve.csv");
  write_population_table(r.best_run().final_population, dir / "population.csv");
  auto log = open_out(dir / "run.log.jsonl");
  write_run_log(r, log);
}

PopulationTable read_population_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  PopulationTable t;
  std::string line;
  if (!std::getline(in, line) || line != "index,chromosome,fitness,system_contribution,interface_contribution")
    throw ParseError(fmt::format("{}: unexpected header", path.string()));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 5) throw ParseError(fmt::format("{}: expected 5 fields in '{}'", path.string(), line));
    if (f[0] == "mean") {
      t.mean_fitness = parse_double(f[2], "mean fitness");
      t.mean_system_contribution = parse_double(f[3], "mean system contribution");
      t.mean_interface_contribution = parse_double(f[4], "mean interface contribution");
      continue;
    }
    PopulationRow row;
    row.index = static_cast<std::size_t>(parse_double(f[0], "index"));
    row.chromosome = f[1];
    row.fitness = parse_double(f[2], "fitness");
    row.system_contribution = parse_double(f[3], "system contribution");
    row.interface_contribution = parse_double(f[4], "interface contribution");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<Genome> read_seed_genomes(const std::filesystem::path& path, const GenomeLayout& layout) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  std::vector<Genome> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(genome_from_string(layout, std::string_view(line).substr(b, e - b + 1)));
  }
  return out;
}

}  // namespace sosarch
