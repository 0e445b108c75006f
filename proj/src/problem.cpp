#include "sosarch/problem.hpp"

#include "sosarch/error.hpp"

namespace sosarch {

Problem::Problem(Scenario s) : scenario_(std::move(s)) {
  require_valid(scenario_);
  layout_ = scenario_.layout();
  const std::size_t n = layout_.system_count();
  const std::size_t bits = layout_.total_bits();

  used_ = allowed_ = system_mask_ = interface_mask_ = empty_bits();
  for (std::size_t p = 0; p < n; ++p) set_bit(system_mask_, p);
  for (std::size_t p = n; p < bits; ++p) set_bit(interface_mask_, p);

  endpoints_.resize(bits - n);
  interface_at_.assign(bits - n, 0);
  for (std::size_t p = n; p < bits; ++p) {
    const auto [j, j2] = layout_.pair_at(p);
    endpoints_[p - n] = {j - 1, j2 - 1};
  }
  for (const InterfaceDef& f : scenario_.interfaces) {
    const std::size_t p = layout_.interface_bit_index(f.first, f.second);
    interface_at_[p - n] = f.id;
    interface_pos_.push_back(p);
  }

  // a bit is unary-feasible when every capability that would select it
  // tolerates its duration and cost on its own
  std::vector<bool> unary_ok(bits, true);

  for (const Capability& c : scenario_.capabilities) {
    CapabilityModel m;
    m.budget = c.budget;
    m.deadline = c.deadline;
    m.floor = c.performance_floor;
    m.needs_interface = !c.interfaces.empty();
    m.systems = m.interfaces = m.candidates = m.system_witnesses = m.interface_witnesses = empty_bits();
    m.cost.assign(bits, 0.0);
    m.duration.assign(bits, 0.0);
    m.performance.assign(bits, 0.0);

    auto add = [&](std::size_t pos, const Attributes& a, Bits& kind) {
      set_bit(kind, pos);
      set_bit(m.candidates, pos);
      set_bit(used_, pos);
      m.cost[pos] = a.cost;
      m.duration[pos] = a.duration;
      m.performance[pos] = a.performance;
      if (a.duration > c.deadline || a.cost > c.budget) unary_ok[pos] = false;
    };
    for (const auto& [j, a] : c.systems) add(j - 1, a, m.systems);
    for (const auto& [k, a] : c.interfaces) add(interface_position(k), a, m.interfaces);
    caps_.push_back(std::move(m));
  }

  for (std::size_t p = 0; p < n; ++p)
    if (test_bit(used_, p) && unary_ok[p]) set_bit(allowed_, p);
  for (std::size_t p = n; p < bits; ++p) {
    const auto [a, b] = endpoints(p);
    if (test_bit(used_, p) && unary_ok[p] && test_bit(allowed_, a) && test_bit(allowed_, b))
      set_bit(allowed_, p);
  }

  for (CapabilityModel& m : caps_) {
    for_each_bit(m.systems, [&](std::size_t p) {
      if (test_bit(allowed_, p) && m.performance[p] >= m.floor) set_bit(m.system_witnesses, p);
    });
    for_each_bit(m.interfaces, [&](std::size_t p) {
      if (test_bit(allowed_, p) && m.performance[p] >= m.floor) set_bit(m.interface_witnesses, p);
    });
  }
}

Bits Problem::live_interfaces(std::span<const std::uint64_t> g) const {
  Bits live = empty_bits();
  const std::size_t n = layout_.system_count();
  for (std::size_t w = 0; w < live.size(); ++w) live[w] = g[w] & interface_mask_[w];
  for_each_bit(Bits(live), [&](std::size_t p) {
    const auto [a, b] = endpoints_[p - n];
    if (!test_bit(g, a) || !test_bit(g, b)) clear_bit(live, p);
  });
  return live;
}

}  // namespace sosarch
