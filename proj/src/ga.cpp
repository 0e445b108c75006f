#include "sosarch/ga.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sosarch/error.hpp"
#include "sosarch/kernels.hpp"

namespace sosarch {

void validate_params(const GaParams& p) {
  if (p.population < 2) throw ValidationError("population must be >= 2");
  if (p.stagnation_window < 20 || p.stagnation_window > 50)
    throw ValidationError(fmt::format("stagnation window {} outside [20, 50]", p.stagnation_window));
  auto prob = [](const char* name, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError(fmt::format("{} = {} outside [0, 1]", name, x));
  };
  prob("pc1", p.pc1);
  prob("pc2", p.pc2);
  prob("pm1", p.pm1);
  prob("pm2", p.pm2);
  if (p.pc1 < p.pc2) throw ValidationError("pc1 must be >= pc2");
  if (p.pm1 < p.pm2) throw ValidationError("pm1 must be >= pm2");
}

std::vector<double> Population::fitness_values() const {
  std::vector<double> f;
  f.reserve(members.size());
  for (const auto& m : members) f.push_back(m.fitness);
  return f;
}

void Population::refresh() {
  const auto f = fitness_values();
  sum_fitness = kernels::sum(f);
  for (const auto& m : members)
    if (best_ever.genome.size() == 0 || m.fitness > best_ever.fitness) best_ever = m;
}

FitnessStats fitness_stats(std::span<const double> fitness) {
  if (fitness.empty()) return {};
  return {kernels::sum(fitness) / static_cast<double>(fitness.size()), kernels::max(fitness)};
}

namespace {

double adaptive_prob(double f, double mean, double max, double hi, double lo) {
  if (f <= mean || max <= mean) return hi;
  const double p = hi - (hi - lo) * (f - mean) / (max - mean);
  return std::clamp(p, lo, hi);
}

}  // namespace

double adaptive_crossover_prob(double f, double mean, double max, const GaParams& params) {
  return adaptive_prob(f, mean, max, params.pc1, params.pc2);
}

double adaptive_mutation_prob(double f, double mean, double max, const GaParams& params) {
  return adaptive_prob(f, mean, max, params.pm1, params.pm2);
}

std::vector<double> survival_probabilities(std::span<const double> fitness) {
  const double total = kernels::sum(fitness);
  if (!(total > 0.0)) throw Error("survival probabilities need a positive fitness sum");
  std::vector<double> p(fitness.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = fitness[i] / total;
  return p;
}

Roulette::Roulette(std::span<const double> probabilities) {
  if (probabilities.empty()) throw Error("roulette over an empty population");
  upper_.resize(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    upper_[i] = acc;
  }
  upper_.back() = 1.0;
}

std::size_t Roulette::pick(double x) const {
  const auto it = std::upper_bound(upper_.begin(), upper_.end(), x);
  if (it == upper_.end()) return upper_.size() - 1;
  return static_cast<std::size_t>(it - upper_.begin());
}

std::pair<Genome, Genome> exchange_suffix(const Genome& a, const Genome& b, std::size_t cut) {
  Genome x = a, y = b;
  for (std::size_t p = cut; p < a.size(); ++p) {
    x.set(p, b.test(p));
    y.set(p, a.test(p));
  }
  return {std::move(x), std::move(y)};
}

GeneticSearch::GeneticSearch(const Problem& problem, const FitnessOptions& fitness, const GaParams& params)
    : problem_(&problem), eval_(problem, fitness), params_(params), rng_(params.seed) {}

Member GeneticSearch::evaluate(Genome g) const {
  const double f = eval_(g);
  return {std::move(g), f};
}

Population GeneticSearch::init_population(std::span<const Genome> seeds) {
  Population pop;
  for (const Genome& s : seeds) {
    if (pop.members.size() == params_.population) break;
    if (!(s.layout() == problem_->layout())) throw ValidationError("seed genome does not match the scenario layout");
    pop.members.push_back(evaluate(repair(*problem_, s)));
  }
  while (pop.members.size() < params_.population)
    pop.members.push_back(evaluate(random_feasible_genome(*problem_, rng_)));
  pop.refresh();
  return pop;
}

Population GeneticSearch::select(const Population& pop) {
  if (pop.members.empty()) throw Error("selection over an empty population");
  const auto fitness = pop.fitness_values();
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());

  Population out;
  out.generation = pop.generation;
  out.best_ever = pop.best_ever;
  out.members.reserve(pop.members.size());
  out.members.push_back(pop.members[best]);

  if (pop.members.size() > 1) {
    std::vector<std::size_t> rest;
    std::vector<double> rest_fitness;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
      if (i == best) continue;
      rest.push_back(i);
      rest_fitness.push_back(fitness[i]);
    }
    const Roulette wheel(survival_probabilities(rest_fitness));
    while (out.members.size() < pop.members.size()) out.members.push_back(pop.members[rest[wheel.pick(rng_)]]);
  }
  out.refresh();
  return out;
}

CrossoverOutcome GeneticSearch::crossover_pair(const Member& a, const Member& b, const FitnessStats& stats) {
  const double pc = adaptive_crossover_prob(std::max(a.fitness, b.fitness), stats.mean, stats.max, params_);
  const double c = rng_.uniform01();
  if (c > pc) return {a, b, false};

  const auto diff = difference_set(a.genome, b.genome);
  if (diff.empty()) return {a, b, false};

  // cut index k satisfies k/m <= y < (k+1)/m
  const double y = rng_.uniform01();
  const std::size_t m = diff.size();
  const std::size_t k = std::min(static_cast<std::size_t>(y * static_cast<double>(m)), m - 1);
  auto [x, z] = exchange_suffix(a.genome, b.genome, diff[k]);

  std::vector<Member> pool;
  pool.reserve(4);
  pool.push_back(a);
  pool.push_back(b);
  pool.push_back(evaluate(repair(*problem_, x)));
  pool.push_back(evaluate(repair(*problem_, z)));
  std::stable_sort(pool.begin(), pool.end(), [](const Member& l, const Member& r) { return l.fitness > r.fitness; });
  return {std::move(pool[0]), std::move(pool[1]), true};
}

std::size_t GeneticSearch::mutate(Population& pop) {
  const CompletionSearch search(*problem_);
  const std::size_t bits = problem_->total_bits();
  std::size_t accepted = 0;
  std::vector<double> pm(pop.members.size());

  for (std::size_t round = 0; round < pop.members.size(); ++round) {
    const auto fitness = pop.fitness_values();
    const FitnessStats stats = fitness_stats(fitness);
    double total = 0.0;
    for (std::size_t i = 0; i < pm.size(); ++i) {
      pm[i] = adaptive_mutation_prob(fitness[i], stats.mean, stats.max, params_);
      total += pm[i];
    }
    if (total > 0.0)
      for (double& p : pm) p /= total;
    else
      std::fill(pm.begin(), pm.end(), 1.0 / static_cast<double>(pm.size()));

    const std::size_t idx = Roulette(pm).pick(rng_);
    const std::size_t pos = rng_.below(bits);
    Member& target = pop.members[idx];

    // the flipped value must admit a feasible completion of the prefix,
    // otherwise the gene keeps its (forced) value
    const bool flipped = !target.genome.test(pos);
    if (flipped && !test_bit(problem_->allowed(), pos)) continue;
    Bits ones = problem_->empty_bits(), zeros = problem_->empty_bits();
    for (std::size_t q = 0; q < pos; ++q) set_bit(target.genome.test(q) ? ones : zeros, q);
    set_bit(flipped ? ones : zeros, pos);
    if (!search.completable(ones, zeros)) continue;

    Genome mutant = target.genome;
    mutant.flip(pos);
    Member candidate = evaluate(repair(*problem_, mutant));
    if (candidate.fitness >= target.fitness) {
      if (!(candidate.genome == target.genome)) ++accepted;
      target = std::move(candidate);
    }
  }
  return accepted;
}

RunResult GeneticSearch::run(std::span<const Genome> seeds) {
  validate_params(params_);
  RunResult result;
  Population pop = init_population(seeds);
  pop.generation = 0;
  result.curve.push_back({0, pop.best_ever.fitness, fitness_stats(pop.fitness_values()).mean, 0, 0});

  double best_value = pop.best_ever.fitness;
  std::size_t last_improvement = 0;
  result.termination = "generation budget";

  for (std::size_t gen = 1; gen <= params_.max_generations; ++gen) {
    Population next = select(pop);
    rng_.shuffle(next.members.begin(), next.members.end());

    const FitnessStats stats = fitness_stats(next.fitness_values());
    std::size_t crossovers = 0;
    for (std::size_t i = 0; i + 1 < next.members.size(); i += 2) {
      CrossoverOutcome o = crossover_pair(next.members[i], next.members[i + 1], stats);
      crossovers += o.crossed ? 1 : 0;
      next.members[i] = std::move(o.first);
      next.members[i + 1] = std::move(o.second);
    }
    const std::size_t accepted = mutate(next);

    next.generation = gen;
    next.refresh();
    pop = std::move(next);
    result.curve.push_back(
        {gen, pop.best_ever.fitness, fitness_stats(pop.fitness_values()).mean, crossovers, accepted});

    if (pop.best_ever.fitness > best_value) {
      best_value = pop.best_ever.fitness;
      last_improvement = gen;
    }
    if (gen - last_improvement >= params_.stagnation_window) {
      result.termination = "stagnation";
      break;
    }
  }

  result.best = pop.best_ever;
  result.final_population = std::move(pop);
  result.evaluations = eval_.evaluations();
  return result;
}

}  // namespace sosarch
