#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "random_scenario.hpp"
#include "sosarch/constraints.hpp"
#include "sosarch/error.hpp"
#include "sosarch/ga.hpp"
#include "sosarch/oracle.hpp"
#include "sosarch/scenario_io.hpp"

using namespace sosarch;

namespace {

GaParams small_params(std::uint64_t seed, std::size_t n = 20) {
  GaParams p;
  p.population = n;
  p.max_generations = 150;
  p.seed = seed;
  return p;
}

bool same_population(const Population& a, const Population& b) {
  if (a.members.size() != b.members.size()) return false;
  for (std::size_t i = 0; i < a.members.size(); ++i)
    if (!(a.members[i].genome == b.members[i].genome) || a.members[i].fitness != b.members[i].fitness) return false;
  return true;
}

}  // namespace

TEST_CASE("adaptive crossover probability") {
  const GaParams p;
  CHECK(adaptive_crossover_prob(0.3, 0.5, 0.9, p) == 0.9);
  CHECK(adaptive_crossover_prob(0.5, 0.5, 0.9, p) == 0.9);
  CHECK(adaptive_crossover_prob(0.9, 0.5, 0.9, p) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(adaptive_crossover_prob(0.7, 0.5, 0.9, p) == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(adaptive_crossover_prob(0.5, 0.5, 0.5, p) == 0.9);
}

TEST_CASE("adaptive mutation probability") {
  const GaParams p;
  CHECK(adaptive_mutation_prob(0.1, 0.5, 0.9, p) == 0.2);
  CHECK(adaptive_mutation_prob(0.9, 0.5, 0.9, p) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(adaptive_mutation_prob(0.7, 0.5, 0.5, p) == 0.2);
  CHECK(adaptive_mutation_prob(0.7, 0.5, 0.9, p) == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate_params(GaParams{}));
  GaParams p;
  p.population = 1;
  CHECK_THROWS_AS(validate_params(p), ValidationError);
  p = GaParams{};
  p.stagnation_window = 19;
  CHECK_THROWS_AS(validate_params(p), ValidationError);
  p.stagnation_window = 51;
  CHECK_THROWS_AS(validate_params(p), ValidationError);
  p = GaParams{};
  p.pc2 = 0.95;
  CHECK_THROWS_AS(validate_params(p), ValidationError);
  p = GaParams{};
  p.pm1 = 1.5;
  CHECK_THROWS_AS(validate_params(p), ValidationError);
}

TEST_CASE("survival probabilities and roulette intervals") {
  const std::vector<double> uniform(4, 0.3);
  const auto pu = survival_probabilities(uniform);
  for (double x : pu) CHECK(x == doctest::Approx(0.25).epsilon(1e-15));

  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> f(1 + rng.below(50));
    for (double& x : f) x = rng.uniform(1e-4, 1.0);
    const auto p = survival_probabilities(f);
    REQUIRE(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-12);
    const Roulette r(p);
    const auto& ub = r.upper_bounds();
    REQUIRE(ub.back() == 1.0);
    REQUIRE(std::is_sorted(ub.begin(), ub.end()));
    REQUIRE(r.pick(0.0) == static_cast<std::size_t>(std::upper_bound(ub.begin(), ub.end(), 0.0) - ub.begin()));
    REQUIRE(r.pick(std::nextafter(1.0, 0.0)) < f.size());
  }

  const std::vector<double> q = {0.5, 0.3, 0.2};
  const Roulette r(q);
  CHECK(r.pick(0.0) == 0);
  CHECK(r.pick(0.49) == 0);
  CHECK(r.pick(0.5) == 1);
  CHECK(r.pick(0.79) == 1);
  CHECK(r.pick(0.8) == 2);
  CHECK(r.pick(0.999) == 2);
}

TEST_CASE("roulette frequencies") {
  const Roulette r(std::vector<double>{0.5, 0.3, 0.2});
  Rng rng(2718);
  std::vector<int> hits(3, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hits[r.pick(rng)];
  CHECK(std::abs(hits[0] / double(draws) - 0.5) <= 0.01);
  CHECK(std::abs(hits[1] / double(draws) - 0.3) <= 0.01);
  CHECK(std::abs(hits[2] / double(draws) - 0.2) <= 0.01);
}

TEST_CASE("selection keeps the elite") {
  Scenario s = tiny3();
  s.interfaces[0] = {1, 2, 3};
  const Problem p(s);
  GeneticSearch ga(p, {}, small_params(3, 2));
  Population pop;
  pop.members = {{genome_from_string(p.layout(), "011001"), 0.1}, {genome_from_string(p.layout(), "011001"), 0.9}};
  pop.refresh();
  for (int t = 0; t < 200; ++t) {
    const Population out = ga.select(pop);
    REQUIRE(out.members.size() == 2);
    REQUIRE(out.members[0].fitness == 0.9);
  }
}

TEST_CASE("exchange_suffix conserves the prefix") {
  Rng rng(10);
  const GenomeLayout L(6);
  for (int t = 0; t < 500; ++t) {
    Genome a(L), b(L);
    for (std::size_t i = 0; i < L.total_bits(); ++i) {
      if (rng.coin()) a.set(i);
      if (rng.coin()) b.set(i);
    }
    const std::size_t cut = rng.below(L.total_bits());
    const auto [x, y] = exchange_suffix(a, b, cut);
    for (std::size_t i = 0; i < L.total_bits(); ++i) {
      REQUIRE(x.test(i) == (i < cut ? a.test(i) : b.test(i)));
      REQUIRE(y.test(i) == (i < cut ? b.test(i) : a.test(i)));
    }
  }
  const GenomeLayout t3(3);
  const auto [x, y] = exchange_suffix(genome_from_string(t3, "000111"), genome_from_string(t3, "111000"), 0);
  CHECK(genome_to_string(x) == "111000");
  CHECK(genome_to_string(y) == "000111");
}

TEST_CASE("crossover edge cases") {
  const Problem p(tiny3());
  const Genome g = genome_from_string(p.layout(), "101010");
  GeneticSearch ga(p, {}, small_params(1));
  const Member m = ga.evaluate(g);
  const auto same = ga.crossover_pair(m, m, {m.fitness, m.fitness});
  CHECK(same.first.genome == g);
  CHECK(same.second.genome == g);
  CHECK_FALSE(same.crossed);

  GaParams never = small_params(1);
  never.pc1 = never.pc2 = 0.0;
  Scenario s = tiny3();
  s.interfaces[0] = {1, 2, 3};
  const Problem q(s);
  GeneticSearch gq(q, {}, never);
  const Member a = gq.evaluate(genome_from_string(q.layout(), "011001"));
  const Member b = gq.evaluate(genome_from_string(q.layout(), "101000"));
  for (int t = 0; t < 50; ++t) {
    const auto o = gq.crossover_pair(a, b, {(a.fitness + b.fitness) / 2, std::max(a.fitness, b.fitness)});
    CHECK(o.first.genome == a.genome);
    CHECK(o.second.genome == b.genome);
  }
}

TEST_CASE("crossover returns the best two and never degrades the pair") {
  Rng rng(55);
  for (int t = 0; t < 30; ++t) {
    const Scenario s = testsupport::draw_scenario(rng, {});
    const Problem p(s);
    GeneticSearch ga(p, {}, small_params(rng.next()));
    const oracle::BruteForce bf(s, {});
    for (int k = 0; k < 40; ++k) {
      const Member a = ga.evaluate(random_feasible_genome(p, rng));
      const Member b = ga.evaluate(random_feasible_genome(p, rng));
      const auto o = ga.crossover_pair(a, b, {std::min(a.fitness, b.fitness), std::max(a.fitness, b.fitness)});
      REQUIRE(is_feasible(p, o.first.genome));
      REQUIRE(is_feasible(p, o.second.genome));
      REQUIRE(std::min(o.first.fitness, o.second.fitness) >= std::min(a.fitness, b.fitness));
      REQUIRE(std::max(o.first.fitness, o.second.fitness) >= std::max(a.fitness, b.fitness));
      REQUIRE(o.first.fitness == bf.evaluate(bf.to_code(o.first.genome)).fitness);
    }
  }
}

TEST_CASE("tiny3 crossover of complementary parents") {
  // neither parent is feasible in tiny3; offspring are repaired
  const Problem p(tiny3());
  GeneticSearch ga(p, {}, small_params(1));
  const Member a = ga.evaluate(genome_from_string(p.layout(), "000111"));
  const Member b = ga.evaluate(genome_from_string(p.layout(), "111000"));
  const oracle::BruteForce bf(tiny3(), {});
  CHECK(a.fitness == bf.evaluate(bf.to_code(a.genome)).fitness);
  for (int t = 0; t < 20; ++t) {
    const auto o = ga.crossover_pair(a, b, {(a.fitness + b.fitness) / 2, std::max(a.fitness, b.fitness)});
    CHECK(std::min(o.first.fitness, o.second.fitness) >= std::min(a.fitness, b.fitness));
    if (o.crossed) CHECK(o.first.genome == genome_from_string(p.layout(), "101010"));
  }
}

TEST_CASE("mutation only accepts non-worse mutants") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const Problem p(testsupport::draw_scenario(rng, {}));
    GeneticSearch ga(p, {}, small_params(rng.next()));
    Population pop = ga.init_population();
    const Population before = pop;
    ga.mutate(pop);
    for (std::size_t i = 0; i < pop.members.size(); ++i) {
      REQUIRE(pop.members[i].fitness >= before.members[i].fitness);
      REQUIRE(is_feasible(p, pop.members[i].genome));
    }
  }
}

TEST_CASE("initial population") {
  const Problem p(tiny3());
  GeneticSearch ga(p, {}, small_params(1, 10));
  const Population pop = ga.init_population();
  CHECK(pop.members.size() == 10);
  for (const Member& m : pop.members) CHECK(check_feasible(p, m.genome).empty());

  GaParams one = small_params(1, 1);
  GeneticSearch g1(p, {}, one);
  const Population single = g1.init_population();
  REQUIRE(single.members.size() == 1);
  CHECK(genome_to_string(single.members[0].genome) == "101010");

  const Scenario ew = load_scenario(std::filesystem::path(SOSARCH_DATA_DIR) / "ew22.json");
  const Problem pe(ew);
  std::vector<Genome> seeds;
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    Genome g(pe.layout());
    for (std::size_t b = 0; b < pe.total_bits(); ++b)
      if (rng.below(8) == 0) g.set(b);
    seeds.push_back(g);
  }
  GeneticSearch ge(pe, {}, small_params(2, 100));
  const Population pop_e = ge.init_population(seeds);
  REQUIRE(pop_e.members.size() == 100);
  for (std::size_t i = 0; i < 10; ++i) CHECK(pop_e.members[i].genome == repair(pe, seeds[i]));
  for (const Member& m : pop_e.members) CHECK(is_feasible(pe, m.genome));

  const std::vector<Genome> wrong = {Genome(GenomeLayout(4))};
  CHECK_THROWS_AS(ge.init_population(wrong), ValidationError);
}

TEST_CASE("tiny3 run reaches the oracle optimum") {
  const Scenario s = tiny3();
  const Problem p(s);
  const oracle::Result best = oracle::enumerate_optimum(s, {});
  GeneticSearch ga(p, {}, small_params(1));
  const RunResult r = ga.run();
  CHECK(r.best.fitness == best.optimum_fitness);
  CHECK(r.best.genome == best.optimum_genomes.front());
  CHECK(r.curve.back().best == best.optimum_fitness);
}

TEST_CASE("zero-generation run") {
  const Problem p(tiny3());
  GaParams params = small_params(1);
  params.max_generations = 0;
  GeneticSearch ga(p, {}, params);
  const RunResult r = ga.run();
  REQUIRE(r.curve.size() == 1);
  CHECK(r.curve[0].generation == 0);
  CHECK(r.termination == "generation budget");
}

TEST_CASE("runs are deterministic and monotone") {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const Problem p(testsupport::draw_scenario(rng, {}));
    const std::uint64_t seed = rng.next();
    GeneticSearch a(p, {}, small_params(seed));
    GeneticSearch b(p, {}, small_params(seed));
    const RunResult ra = a.run();
    const RunResult rb = b.run();
    REQUIRE(same_population(ra.final_population, rb.final_population));
    REQUIRE(ra.curve.size() == rb.curve.size());
    for (std::size_t g = 0; g < ra.curve.size(); ++g) {
      REQUIRE(ra.curve[g].best == rb.curve[g].best);
      REQUIRE(ra.curve[g].mean == rb.curve[g].mean);
      REQUIRE(ra.curve[g].generation == g);
      if (g > 0) REQUIRE(ra.curve[g].best >= ra.curve[g - 1].best);
    }
    REQUIRE(ra.best.fitness == ra.curve.back().best);
    if (ra.termination == "stagnation") REQUIRE(ra.curve.size() - 1 < 150);
  }
}
