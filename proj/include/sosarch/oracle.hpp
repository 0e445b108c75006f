#pragma once

// Brute-force reference. Enumerates every bitstring of a small scenario and
// evaluates constraints and fitness with its own straight-line code; nothing
// here calls into the constraint/objective modules, so the two can be
// cross-checked.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sosarch/genome.hpp"
#include "sosarch/objectives.hpp"
#include "sosarch/scenario.hpp"

namespace sosarch::oracle {

inline constexpr std::size_t kMaxBits = 24;

struct Evaluation {
  bool feasible = false;
  std::size_t violations = 0;
  double fitness = 0.0;
};

struct Result {
  double optimum_fitness = 0.0;
  std::vector<Genome> optimum_genomes;  // every argmax, ascending bit value
  std::uint64_t feasible_count = 0;
  std::uint64_t total_count = 0;

  bool has_feasible() const { return feasible_count > 0; }
};

class BruteForce {
 public:
  /// Throws TooLarge above kMaxBits and ValidationError for invalid input.
  BruteForce(const Scenario& s, const FitnessOptions& opts);

  /// Genome given as an integer: bit p of `code` is genome position p.
  Evaluation evaluate(std::uint64_t code) const;

  Result enumerate() const;

  std::size_t total_bits() const { return bits_; }
  Genome to_genome(std::uint64_t code) const;
  std::uint64_t to_code(const Genome& g) const;

 private:
  struct Entry {
    std::size_t pos;
    double cost, duration, performance;
  };
  struct Cap {
    double budget, deadline, floor;
    bool has_interfaces;
    std::vector<Entry> systems;
    std::vector<Entry> interfaces;
  };

  const Scenario* s_;
  FitnessOptions opts_;
  std::size_t n_ = 0;
  std::size_t bits_ = 0;
  std::vector<std::size_t> first_, second_;  // endpoints (0-based) per pair position
  std::vector<bool> used_;                   // selectable by some capability
  std::vector<Cap> caps_;
  double perf_ref_ = 0.0, cost_lb_ = 0.0;
};

/// Global optimum by exhaustive enumeration (TooLarge above 24 bits). A
/// scenario without feasible genomes yields feasible_count = 0 and no
/// optimum genomes.
Result enumerate_optimum(const Scenario& s, const FitnessOptions& opts);

}  // namespace sosarch::oracle
