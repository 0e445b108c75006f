#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sosarch/constraints.hpp"
#include "sosarch/ga.hpp"
#include "sosarch/objectives.hpp"
#include "sosarch/problem.hpp"

namespace sosarch {

/// System bit j set iff some capability selects j; interface bit set iff some
/// capability selects that interface.
Genome union_architecture(const Problem& p, const Assignment& assignment);

struct RestartSummary {
  std::size_t restart = 0;
  std::uint64_t seed = 0;
  Member best;  // best fitness of this restart
  std::size_t generations = 0;
  std::string termination;
};

struct EvolutionReport {
  GaParams params;
  FitnessOptions fitness;
  std::vector<RestartSummary> restarts;
  std::size_t global_best_restart = 0;  // argmax over restarts, lowest index on ties
  Member global_best;
  Genome union_architecture;
  std::vector<RunResult> runs;  // one per restart

  const RunResult& best_run() const { return runs.at(global_best_restart); }
};

/// Seed of restart r: splitmix64(seed + r).
std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart);

EvolutionReport run_restarts(const Problem& p, const FitnessOptions& fitness, const GaParams& params,
                             std::size_t restarts, const std::vector<Genome>& seeds = {});

/// index,chromosome,fitness,system_contribution,interface_contribution, one
/// row per member, then a "mean" row with population means.
void write_population_table(const Population& pop, std::ostream& out);
void write_population_table(const Population& pop, const std::filesystem::path& path);

/// generation,best_fitness,mean_fitness
void write_curve(const RunResult& run, std::ostream& out);
void write_curve(const RunResult& run, const std::filesystem::path& path);

std::string best_json(const Problem& p, const EvolutionReport& r);
void write_run_log(const EvolutionReport& r, std::ostream& out);

/// best.json, curve.csv, population.csv and run.log.jsonl under dir.
void write_outputs(const Problem& p, const EvolutionReport& r, const std::filesystem::path& dir);

struct PopulationRow {
  std::size_t index = 0;
  std::string chromosome;
  double fitness = 0.0;
  double system_contribution = 0.0;
  double interface_contribution = 0.0;
};

struct PopulationTable {
  std::vector<PopulationRow> rows;
  double mean_fitness = 0.0;
  double mean_system_contribution = 0.0;
  double mean_interface_contribution = 0.0;
};

/// Throws ParseError on malformed files.
PopulationTable read_population_table(const std::filesystem::path& path);

/// Reads genome text lines ('#' comments and blank lines skipped).
std::vector<Genome> read_seed_genomes(const std::filesystem::path& path, const GenomeLayout& layout);

}  // namespace sosarch
