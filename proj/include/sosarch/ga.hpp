#pragma once

// Constrained adaptive genetic search: conflict-rule initialization, elitist
// roulette selection, difference-set crossover with fitness-adaptive
// probability, constrained mutation with accept-if-not-worse.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sosarch/constraints.hpp"
#include "sosarch/genome.hpp"
#include "sosarch/objectives.hpp"
#include "sosarch/problem.hpp"
#include "sosarch/rng.hpp"

namespace sosarch {

struct GaParams {
  std::size_t population = 100;
  std::size_t max_generations = 150;
  std::size_t stagnation_window = 30;  // 20..50
  double pc1 = 0.9;  // crossover probability of below-average individuals
  double pc2 = 0.4;  // crossover probability of the best individual
  double pm1 = 0.2;  // maximum mutation probability
  double pm2 = 0.1;  // minimum mutation probability
  std::uint64_t seed = 1;
};

/// Throws ValidationError naming the offending parameter.
void validate_params(const GaParams& p);

struct Member {
  Genome genome;
  double fitness = 0.0;
};

struct Population {
  std::vector<Member> members;
  std::size_t generation = 0;
  double sum_fitness = 0.0;
  Member best_ever;

  std::vector<double> fitness_values() const;
  /// Recomputes sum_fitness and raises best_ever from the current members.
  void refresh();
};

struct FitnessStats {
  double mean = 0.0;
  double max = 0.0;
};

FitnessStats fitness_stats(std::span<const double> fitness);

/// Crossover probability for the fitter parent's fitness f.
double adaptive_crossover_prob(double f, double mean, double max, const GaParams& params);
/// Mutation probability for a candidate with fitness f (linear from pm1 at
/// the mean down to pm2 at the max).
double adaptive_mutation_prob(double f, double mean, double max, const GaParams& params);

/// P_i = F_i / sum F. Sums to 1 (last entry absorbs rounding).
std::vector<double> survival_probabilities(std::span<const double> fitness);

/// Roulette wheel over cumulative intervals [a_i, b_i) of the given
/// probabilities; b_last is pinned to 1.
class Roulette {
 public:
  explicit Roulette(std::span<const double> probabilities);
  std::size_t pick(double x) const;  // x in [0, 1)
  std::size_t pick(Rng& rng) const { return pick(rng.uniform01()); }
  const std::vector<double>& upper_bounds() const { return upper_; }

 private:
  std::vector<double> upper_;
};

/// Bits of a and b exchanged from position cut onward (cut inclusive).
std::pair<Genome, Genome> exchange_suffix(const Genome& a, const Genome& b, std::size_t cut);

struct CrossoverOutcome {
  Member first, second;
  bool crossed = false;  // offspring were produced
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best = 0.0;  // best-ever fitness
  double mean = 0.0;  // population mean
  std::size_t crossovers = 0;
  std::size_t accepted_mutations = 0;
};

struct RunResult {
  std::vector<GenerationRecord> curve;  // generation 0 first
  Population final_population;
  Member best;
  std::string termination;  // "generation budget" or "stagnation"
  std::size_t evaluations = 0;
};

class GeneticSearch {
 public:
  GeneticSearch(const Problem& problem, const FitnessOptions& fitness, const GaParams& params);

  /// Repaired seeds first (at most N), then conflict-rule genomes.
  Population init_population(std::span<const Genome> seeds = {});

  /// Copies the best member to slot 0, fills N-1 slots by roulette over the
  /// remaining members' renormalized probabilities.
  Population select(const Population& pop);

  CrossoverOutcome crossover_pair(const Member& a, const Member& b, const FitnessStats& stats);

  /// N rounds of: roulette-pick by P_m, flip one admissible gene, repair,
  /// keep the mutant only if it is not worse. Returns accepted count.
  std::size_t mutate(Population& pop);

  RunResult run(std::span<const Genome> seeds = {});

  const FitnessEvaluator& evaluator() const { return eval_; }
  Rng& rng() { return rng_; }

  Member evaluate(Genome g) const;

 private:
  const Problem* problem_;
  FitnessEvaluator eval_;
  GaParams params_;
  Rng rng_;
};

}  // namespace sosarch
