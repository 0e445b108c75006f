#include "sosarch/objectives.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sosarch/constraints.hpp"
#include "sosarch/error.hpp"

namespace sosarch {

std::vector<CapabilityMetrics> assignment_metrics(const Problem& p, const Genome& g) {
  const Bits live = p.live_interfaces(g.words());
  std::vector<CapabilityMetrics> out;
  for (const CapabilityModel& m : p.capabilities()) {
    Bits sel(p.words());
    for (std::size_t w = 0; w < sel.size(); ++w) sel[w] = (g.words()[w] & m.systems[w]) | (live[w] & m.interfaces[w]);
    CapabilityMetrics cm;
    for_each_bit(sel, [&](std::size_t pos) {
      cm.cost += m.cost[pos];
      cm.duration = std::max(cm.duration, m.duration[pos]);
      cm.performance = std::max(cm.performance, m.performance[pos]);
    });
    out.push_back(cm);
  }
  return out;
}

std::vector<CapabilityMetrics> capability_metrics(const Problem& p, const Genome& g) {
  if (!is_feasible(p, g)) throw InfeasibleGenome("capability metrics need a feasible genome");
  return assignment_metrics(p, g);
}

namespace {

ObjectiveVector aggregate(const std::vector<CapabilityMetrics>& metrics, PerfAggregate agg) {
  ObjectiveVector v;
  bool first = true;
  for (const auto& m : metrics) {
    if (first)
      v.performance = m.performance;
    else
      v.performance = agg == PerfAggregate::max ? std::max(v.performance, m.performance)
                                                : std::min(v.performance, m.performance);
    first = false;
    v.cost += m.cost;
    v.duration = std::max(v.duration, m.duration);
  }
  return v;
}

}  // namespace

ObjectiveVector objective_vector(const Problem& p, const Genome& g, PerfAggregate agg) {
  return aggregate(capability_metrics(p, g), agg);
}

NormalizationScales normalization_scales(const Scenario& s) {
  NormalizationScales sc;
  sc.expected_duration = s.expected_duration;
  for (const Capability& c : s.capabilities) {
    double cheapest = std::numeric_limits<double>::infinity();
    for (const auto& [j, a] : c.systems) {
      sc.performance_ref = std::max(sc.performance_ref, a.performance);
      cheapest = std::min(cheapest, a.cost);
    }
    for (const auto& [k, a] : c.interfaces) sc.performance_ref = std::max(sc.performance_ref, a.performance);
    if (!c.systems.empty()) sc.cost_lower_bound += cheapest;
  }
  return sc;
}

Normalized normalize(const NormalizationScales& sc, const ObjectiveVector& v) {
  if (sc.performance_ref <= 0.0) throw DegenerateScenario("every performance attribute is 0");
  if (sc.expected_duration <= 0.0) throw DegenerateScenario("expected duration is 0");
  Normalized n;
  n.performance = std::clamp(v.performance / sc.performance_ref, 0.0, 1.0);
  n.cost = v.cost > 0.0 ? std::min(1.0, sc.cost_lower_bound / v.cost) : 1.0;
  n.duration = std::clamp((sc.expected_duration - v.duration) / sc.expected_duration, 0.0, 1.0);
  return n;
}

Normalized normalize(const Scenario& s, const ObjectiveVector& v) { return normalize(normalization_scales(s), v); }

void validate_weights(const FitnessWeights& w) {
  for (double x : {w.performance, w.cost, w.duration})
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) throw WeightError(fmt::format("weight {} outside [0, 1]", x));
  const double sum = w.performance + w.cost + w.duration;
  if (std::abs(sum - 1.0) > 1e-9) throw WeightError(fmt::format("weights sum to {}, expected 1", sum));
}

void validate_intervals(const WeightIntervals& iv) {
  for (const Interval& i : {iv.performance, iv.cost, iv.duration}) {
    if (!(i.lo >= 0.0 && i.lo <= i.hi && i.hi <= 1.0))
      throw ValidationError(fmt::format("weight interval [{}, {}] must satisfy 0 <= lo <= hi <= 1", i.lo, i.hi));
  }
  const double lo = iv.performance.lo + iv.cost.lo + iv.duration.lo;
  const double hi = iv.performance.hi + iv.cost.hi + iv.duration.hi;
  if (!(lo < 1.0)) throw ValidationError(fmt::format("weight interval lower bounds sum to {}, need < 1", lo));
  if (!(hi > 1.0)) throw ValidationError(fmt::format("weight interval upper bounds sum to {}, need > 1", hi));
}

void validate_weights(const FitnessWeights& w, const WeightIntervals& iv) {
  validate_weights(w);
  auto inside = [](double x, const Interval& i) { return x >= i.lo - 1e-12 && x <= i.hi + 1e-12; };
  if (!inside(w.performance, iv.performance) || !inside(w.cost, iv.cost) || !inside(w.duration, iv.duration))
    throw WeightError("weights outside their intervals");
}

FitnessWeights draw_weights(const WeightIntervals& iv, Rng& rng) {
  validate_intervals(iv);
  const Interval bounds[3] = {iv.performance, iv.cost, iv.duration};
  double w[3];
  for (int i = 0; i < 3; ++i) w[i] = rng.uniform(bounds[i].lo, bounds[i].hi);

  for (int iter = 0; iter < 64; ++iter) {
    const double s = w[0] + w[1] + w[2];
    if (std::abs(s - 1.0) <= 1e-15) break;
    for (int i = 0; i < 3; ++i) w[i] = std::clamp(w[i] / s, bounds[i].lo, bounds[i].hi);
  }
  // absorb what rescaling leaves over into the weights that still have room
  double residual = 1.0 - (w[0] + w[1] + w[2]);
  for (int i = 0; i < 3 && residual != 0.0; ++i) {
    const double room = residual > 0.0 ? bounds[i].hi - w[i] : bounds[i].lo - w[i];
    const double step = residual > 0.0 ? std::min(residual, room) : std::max(residual, room);
    w[i] += step;
    residual = 1.0 - (w[0] + w[1] + w[2]);
  }
  FitnessWeights out{w[0], w[1], w[2]};
  validate_weights(out, iv);
  return out;
}

FitnessEvaluator::FitnessEvaluator(const Problem& p, FitnessOptions opts)
    : p_(&p), opts_(opts), scales_(normalization_scales(p.scenario())) {
  validate_weights(opts_.weights);
  if (scales_.performance_ref <= 0.0) throw DegenerateScenario("every performance attribute is 0");
}

double FitnessEvaluator::feasible_fitness(const Genome& g) const {
  const Normalized n = normalize(scales_, aggregate(assignment_metrics(*p_, g), opts_.aggregate));
  const FitnessWeights& w = opts_.weights;
  const double f = w.performance * n.performance + w.cost * n.cost + w.duration * n.duration;
  return std::clamp(f, kPenaltyScale, 1.0);
}

double FitnessEvaluator::operator()(const Genome& g) const {
  ++evaluations_;
  if (is_feasible(*p_, g)) return feasible_fitness(g);
  const double v = static_cast<double>(count_violations(*p_, g));
  return kPenaltyScale * (1.0 - v / static_cast<double>(constraint_instance_count(*p_)));
}

double fitness(const Problem& p, const Genome& g, const FitnessOptions& opts) {
  return FitnessEvaluator(p, opts)(g);
}

}  // namespace sosarch
