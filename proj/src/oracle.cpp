#include "sosarch/oracle.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "sosarch/error.hpp"

namespace sosarch::oracle {

BruteForce::BruteForce(const Scenario& s, const FitnessOptions& opts) : s_(&s), opts_(opts) {
  require_valid(s);
  n_ = s.systems.size();
  bits_ = n_ + n_ * (n_ - 1) / 2;
  if (bits_ > kMaxBits) throw TooLarge(fmt::format("{} genome bits exceed the oracle cap of {}", bits_, kMaxBits));

  // pair positions by direct enumeration of the row-major upper triangle
  first_.assign(bits_, 0);
  second_.assign(bits_, 0);
  std::vector<std::vector<std::size_t>> pos_of(n_, std::vector<std::size_t>(n_, 0));
  std::size_t pos = n_;
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = a + 1; b < n_; ++b) {
      first_[pos] = a;
      second_[pos] = b;
      pos_of[a][b] = pos++;
    }

  used_.assign(bits_, false);
  for (const Capability& c : s.capabilities) {
    Cap cap{c.budget, c.deadline, c.performance_floor, !c.interfaces.empty(), {}, {}};
    for (const auto& [j, a] : c.systems) {
      cap.systems.push_back({j - 1, a.cost, a.duration, a.performance});
      used_[j - 1] = true;
      perf_ref_ = std::max(perf_ref_, a.performance);
    }
    for (const auto& [k, a] : c.interfaces) {
      const InterfaceDef& f = s.interfaces[k - 1];
      const std::size_t p = pos_of[f.first - 1][f.second - 1];
      cap.interfaces.push_back({p, a.cost, a.duration, a.performance});
      used_[p] = true;
      perf_ref_ = std::max(perf_ref_, a.performance);
    }
    double cheapest = std::numeric_limits<double>::infinity();
    for (const auto& e : cap.systems) cheapest = std::min(cheapest, e.cost);
    cost_lb_ += cheapest;
    caps_.push_back(std::move(cap));
  }
}

Evaluation BruteForce::evaluate(std::uint64_t code) const {
  auto on = [&](std::size_t p) { return ((code >> p) & 1U) != 0; };
  auto live = [&](std::size_t p) { return on(p) && on(first_[p]) && on(second_[p]); };

  Evaluation ev;
  double perf_sos = 0.0, cost_sos = 0.0, dur_sos = 0.0;
  bool first_cap = true;

  for (const Cap& c : caps_) {
    // selected entries by ascending bit position
    std::vector<const Entry*> chosen;
    for (const auto& e : c.systems)
      if (on(e.pos)) chosen.push_back(&e);
    for (const auto& e : c.interfaces)
      if (live(e.pos)) chosen.push_back(&e);
    std::sort(chosen.begin(), chosen.end(), [](const Entry* x, const Entry* y) { return x->pos < y->pos; });

    double cost = 0.0, sys_dur = 0.0, if_dur = 0.0, sys_perf = 0.0, if_perf = 0.0;
    int covered = 0;
    for (const Entry* e : chosen) {
      cost += e->cost;
      if (e->pos < n_) {
        ++covered;
        sys_dur = std::max(sys_dur, e->duration);
        sys_perf = std::max(sys_perf, e->performance);
      } else {
        if_dur = std::max(if_dur, e->duration);
        if_perf = std::max(if_perf, e->performance);
      }
    }
    if (cost > c.budget) ++ev.violations;
    if (sys_dur > c.deadline) ++ev.violations;
    if (if_dur > c.deadline) ++ev.violations;
    if (sys_perf < c.floor) ++ev.violations;
    if (c.has_interfaces && if_perf < c.floor) ++ev.violations;
    if (covered == 0) ++ev.violations;

    const double cap_perf = std::max(sys_perf, if_perf);
    if (first_cap)
      perf_sos = cap_perf;
    else if (opts_.aggregate == PerfAggregate::max)
      perf_sos = std::max(perf_sos, cap_perf);
    else
      perf_sos = std::min(perf_sos, cap_perf);
    first_cap = false;
    cost_sos += cost;
    dur_sos = std::max(dur_sos, std::max(sys_dur, if_dur));
  }

  for (std::size_t j = 0; j < n_; ++j)
    if (on(j) && !used_[j]) ++ev.violations;
  for (std::size_t p = n_; p < bits_; ++p) {
    if (!on(p)) continue;
    if (!live(p)) ++ev.violations;
    if (!(live(p) && used_[p])) ++ev.violations;
  }

  const double instances = static_cast<double>(6 * caps_.size() + n_ + 2 * (bits_ - n_));
  ev.feasible = ev.violations == 0;
  if (!ev.feasible) {
    ev.fitness = kPenaltyScale * (1.0 - static_cast<double>(ev.violations) / instances);
    return ev;
  }

  const double t = s_->expected_duration;
  const double p_hat = std::min(1.0, std::max(0.0, perf_sos / perf_ref_));
  const double f_hat = cost_sos > 0.0 ? std::min(1.0, cost_lb_ / cost_sos) : 1.0;
  const double d_hat = std::min(1.0, std::max(0.0, (t - dur_sos) / t));
  const auto& w = opts_.weights;
  const double f = w.performance * p_hat + w.cost * f_hat + w.duration * d_hat;
  ev.fitness = std::min(1.0, std::max(kPenaltyScale, f));
  return ev;
}

Result BruteForce::enumerate() const {
  Result r;
  r.total_count = std::uint64_t{1} << bits_;
  r.optimum_fitness = -std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> argmax;
  for (std::uint64_t code = 0; code < r.total_count; ++code) {
    const Evaluation ev = evaluate(code);
    if (!ev.feasible) continue;
    ++r.feasible_count;
    if (ev.fitness > r.optimum_fitness) {
      r.optimum_fitness = ev.fitness;
      argmax.clear();
    }
    if (ev.fitness == r.optimum_fitness) argmax.push_back(code);
  }
  if (r.feasible_count == 0) r.optimum_fitness = 0.0;
  for (std::uint64_t code : argmax) r.optimum_genomes.push_back(to_genome(code));
  return r;
}

Genome BruteForce::to_genome(std::uint64_t code) const {
  Genome g{GenomeLayout(n_)};
  for (std::size_t p = 0; p < bits_; ++p)
    if ((code >> p) & 1U) g.set(p);
  return g;
}

std::uint64_t BruteForce::to_code(const Genome& g) const {
  std::uint64_t code = 0;
  for (std::size_t p = 0; p < bits_; ++p)
    if (g.test(p)) code |= std::uint64_t{1} << p;
  return code;
}

Result enumerate_optimum(const Scenario& s, const FitnessOptions& opts) { return BruteForce(s, opts).enumerate(); }

}  // namespace sosarch::oracle
