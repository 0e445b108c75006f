#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sosarch/genome.hpp"
#include "sosarch/problem.hpp"
#include "sosarch/rng.hpp"

namespace sosarch {

struct CapabilityMetrics {
  double performance = 0.0;  // best selected performance
  double cost = 0.0;         // summed selected cost
  double duration = 0.0;     // longest selected duration
};

struct ObjectiveVector {
  double performance = 0.0;  // P_SoS, maximized
  double cost = 0.0;         // F_SoS, minimized
  double duration = 0.0;     // D_SoS, minimized
};

struct Normalized {
  double performance = 0.0;
  double cost = 0.0;
  double duration = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct WeightIntervals {
  Interval performance, cost, duration;
};

struct FitnessWeights {
  double performance = 1.0 / 3.0;
  double cost = 1.0 / 3.0;
  double duration = 1.0 / 3.0;
};

/// How per-capability performance combines into P_SoS.
enum class PerfAggregate { max, min };

struct FitnessOptions {
  FitnessWeights weights;
  PerfAggregate aggregate = PerfAggregate::max;
};

/// Fitness floor for feasible genomes and scale of the infeasible penalty.
inline constexpr double kPenaltyScale = 1e-3;

/// Metrics over the decoded assignment without a feasibility check.
std::vector<CapabilityMetrics> assignment_metrics(const Problem& p, const Genome& g);

/// Throws InfeasibleGenome when g violates any constraint.
std::vector<CapabilityMetrics> capability_metrics(const Problem& p, const Genome& g);
ObjectiveVector objective_vector(const Problem& p, const Genome& g, PerfAggregate agg = PerfAggregate::max);

/// Reference scales: largest performance attribute in the scenario, the cost
/// lower bound sum_i min_j f_ij, and the expected construction time.
struct NormalizationScales {
  double performance_ref = 0.0;
  double cost_lower_bound = 0.0;
  double expected_duration = 0.0;
};

NormalizationScales normalization_scales(const Scenario& s);

/// Each component in [0, 1]. Throws DegenerateScenario when the performance
/// reference or expected duration is 0.
Normalized normalize(const NormalizationScales& scales, const ObjectiveVector& v);
Normalized normalize(const Scenario& s, const ObjectiveVector& v);

/// Throws WeightError unless every weight is in [0,1] and they sum to 1.
void validate_weights(const FitnessWeights& w);
/// Throws ValidationError unless lower bounds sum below 1, upper bounds above
/// 1 and every interval is ordered inside [0,1].
void validate_intervals(const WeightIntervals& iv);
/// Throws WeightError when w lies outside iv.
void validate_weights(const FitnessWeights& w, const WeightIntervals& iv);

/// Uniform draw inside each interval, then projection onto w_p + w_f + w_d = 1
/// by proportional rescaling with re-clamping.
FitnessWeights draw_weights(const WeightIntervals& iv, Rng& rng);

/// Evaluates genomes of one problem. Feasible: max(w . normalized, eps);
/// infeasible: eps * (1 - violations / constraint instances).
class FitnessEvaluator {
 public:
  FitnessEvaluator(const Problem& p, FitnessOptions opts);

  double operator()(const Genome& g) const;
  double feasible_fitness(const Genome& g) const;

  const Problem& problem() const { return *p_; }
  const FitnessOptions& options() const { return opts_; }
  std::size_t evaluations() const { return evaluations_; }

 private:
  const Problem* p_;
  FitnessOptions opts_;
  NormalizationScales scales_;
  mutable std::size_t evaluations_ = 0;
};

double fitness(const Problem& p, const Genome& g, const FitnessOptions& opts);

}  // namespace sosarch
