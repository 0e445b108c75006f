#include "sosarch/constraints.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "sosarch/error.hpp"
#include "sosarch/kernels.hpp"

namespace sosarch {

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::budget: return "budget";
    case ViolationKind::deadline: return "deadline";
    case ViolationKind::performance_floor: return "performance_floor";
    case ViolationKind::coverage: return "coverage";
    case ViolationKind::system_indicator: return "system_indicator";
    case ViolationKind::interface_indicator: return "interface_indicator";
    case ViolationKind::interface_endpoints: return "interface_endpoints";
  }
  return "unknown";
}

std::string Violation::to_line() const {
  std::string s(to_string(kind));
  if (capability) s += fmt::format(" capability={}", *capability);
  if (entity) s += fmt::format(" entity={}", *entity);
  return s + ": " + detail;
}

bool Assignment::selects_system(std::size_t cap, std::size_t j) const {
  const auto& v = capabilities.at(cap).systems;
  return std::binary_search(v.begin(), v.end(), j);
}

bool Assignment::selects_interface(std::size_t cap, std::size_t k) const {
  const auto& v = capabilities.at(cap).interfaces;
  return std::binary_search(v.begin(), v.end(), k);
}

namespace {

Bits and_bits(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
  return out;
}

// Cost of the bits of `ones` that a capability lists, summed in ascending
// position order.
double spend(std::span<const std::uint64_t> ones, const CapabilityModel& m) {
  double cost = 0.0;
  for (std::size_t w = 0; w < ones.size(); ++w) {
    std::uint64_t bits = ones[w] & m.candidates[w];
    while (bits != 0) {
      cost += m.cost[w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits))];
      bits &= bits - 1;
    }
  }
  return cost;
}

void check_layout(const Problem& p, std::span<const std::uint64_t> g) {
  if (g.size() != p.words()) throw FormatError("genome does not match the scenario layout");
}

std::string entity_for(const Problem& p, std::size_t pos) {
  const std::size_t n = p.layout().system_count();
  if (pos < n) return fmt::format("{}", pos + 1);
  if (const std::size_t id = p.interface_id_at(pos); id != 0) return fmt::format("{}", id);
  const auto [a, b] = p.endpoints(pos);
  return fmt::format("({},{})", a + 1, b + 1);
}

// Walks every constraint instance; sink(Violation-builder) returns false to
// stop early. Per-capability cost is summed over selected bits in ascending
// position order.
template <class Sink>
void scan_constraints(const Problem& p, std::span<const std::uint64_t> g, Sink&& sink) {
  const Bits live = p.live_interfaces(g);
  const std::size_t n = p.layout().system_count();
  const auto& caps = p.capabilities();
  const auto& scen = p.scenario();

  for (std::size_t i = 0; i < caps.size(); ++i) {
    const CapabilityModel& m = caps[i];
    const std::string& cid = scen.capabilities[i].id;
    Bits sel = and_bits(g, m.systems);
    const Bits sel_if = and_bits(live, m.interfaces);
    for (std::size_t w = 0; w < sel.size(); ++w) sel[w] |= sel_if[w];

    double cost = 0.0;
    double sys_dur = 0.0, if_dur = 0.0, sys_perf = 0.0, if_perf = 0.0;
    std::size_t n_sys = 0;
    for_each_bit(sel, [&](std::size_t pos) {
      cost += m.cost[pos];
      if (pos < n) {
        ++n_sys;
        sys_dur = std::max(sys_dur, m.duration[pos]);
        sys_perf = std::max(sys_perf, m.performance[pos]);
      } else {
        if_dur = std::max(if_dur, m.duration[pos]);
        if_perf = std::max(if_perf, m.performance[pos]);
      }
    });

    auto per_cap = [&](ViolationKind k, std::string detail) {
      return sink([&] { return Violation{k, cid, std::nullopt, std::move(detail)}; });
    };
    if (cost > m.budget && !per_cap(ViolationKind::budget, fmt::format("cost {} > budget {}", cost, m.budget)))
      return;
    if (sys_dur > m.deadline &&
        !per_cap(ViolationKind::deadline, fmt::format("system duration {} > deadline {}", sys_dur, m.deadline)))
      return;
    if (if_dur > m.deadline &&
        !per_cap(ViolationKind::deadline, fmt::format("interface duration {} > deadline {}", if_dur, m.deadline)))
      return;
    if (sys_perf < m.floor && !per_cap(ViolationKind::performance_floor,
                                       fmt::format("system performance {} < floor {}", sys_perf, m.floor)))
      return;
    if (m.needs_interface && if_perf < m.floor &&
        !per_cap(ViolationKind::performance_floor,
                 fmt::format("interface performance {} < floor {}", if_perf, m.floor)))
      return;
    if (n_sys == 0 && !per_cap(ViolationKind::coverage, "no selected system"))
      return;
  }

  const Bits& used = p.used();
  bool go = true;
  for_each_bit(g, [&](std::size_t pos) {
    if (!go) return;
    if (pos < n) {
      if (!test_bit(used, pos))
        go = sink([&] {
          return Violation{ViolationKind::system_indicator, std::nullopt, entity_for(p, pos),
                           "active system is not a candidate of any capability"};
        });
      return;
    }
    const bool is_live = test_bit(live, pos);
    if (!is_live)
      go = sink([&] {
        return Violation{ViolationKind::interface_endpoints, std::nullopt, entity_for(p, pos),
                         "active interface has an inactive endpoint"};
      });
    if (go && !(is_live && test_bit(used, pos)))
      go = sink([&] {
        return Violation{ViolationKind::interface_indicator, std::nullopt, entity_for(p, pos),
                         "active interface is not used by any capability"};
      });
  });
}

}  // namespace

Assignment decode_assignment(const Problem& p, const Genome& g) {
  check_layout(p, g.words());
  const Bits live = p.live_interfaces(g.words());
  Assignment out;
  for (const CapabilityModel& m : p.capabilities()) {
    CapabilitySelection sel;
    for_each_bit(and_bits(g.words(), m.systems), [&](std::size_t pos) { sel.systems.push_back(pos + 1); });
    for_each_bit(and_bits(live, m.interfaces),
                 [&](std::size_t pos) { sel.interfaces.push_back(p.interface_id_at(pos)); });
    std::sort(sel.interfaces.begin(), sel.interfaces.end());
    out.capabilities.push_back(std::move(sel));
  }
  return out;
}

std::vector<Violation> check_feasible(const Problem& p, const Genome& g) {
  check_layout(p, g.words());
  std::vector<Violation> out;
  scan_constraints(p, g.words(), [&](auto make) {
    out.push_back(make());
    return true;
  });
  return out;
}

bool is_feasible(const Problem& p, std::span<const std::uint64_t> g) {
  check_layout(p, g);
  // quick rejects before the full scan
  for (std::size_t w = 0; w < g.size(); ++w)
    if ((g[w] & ~p.used()[w]) != 0) return false;
  bool ok = true;
  scan_constraints(p, g, [&](auto) {
    ok = false;
    return false;
  });
  return ok;
}

std::size_t count_violations(const Problem& p, const Genome& g) {
  check_layout(p, g.words());
  std::size_t v = 0;
  scan_constraints(p, g.words(), [&](auto) {
    ++v;
    return true;
  });
  return v;
}

std::size_t constraint_instance_count(const Problem& p) {
  return 6 * p.capabilities().size() + p.layout().system_count() + 2 * p.layout().pair_count();
}

// ---------------------------------------------------------------------------
// Completion search

bool CompletionSearch::completable(std::span<const std::uint64_t> ones_in, std::span<const std::uint64_t> zeros,
                                   Bits* found) const {
  const Problem& p = *p_;
  const Bits& allowed = p.allowed();
  Bits ones(ones_in.begin(), ones_in.end());
  for (std::size_t w = 0; w < ones.size(); ++w)
    if ((ones[w] & ~allowed[w]) != 0 || (ones[w] & zeros[w]) != 0) return false;

  bool ok = true;
  for_each_bit(and_bits(ones, p.interface_mask()), [&](std::size_t pos) {
    const auto [a, b] = p.endpoints(pos);
    if (test_bit(zeros, a) || test_bit(zeros, b)) ok = false;
    set_bit(ones, a);
    set_bit(ones, b);
  });
  if (!ok) return false;

  std::set<Bits> failed;
  return search(ones, zeros, failed, found);
}

bool CompletionSearch::search(Bits& ones, std::span<const std::uint64_t> zeros, std::set<Bits>& failed,
                              Bits* found) const {
  ++nodes_;
  const Problem& p = *p_;
  const auto& caps = p.capabilities();

  std::vector<double> spent(caps.size());
  for (std::size_t c = 0; c < caps.size(); ++c) {
    spent[c] = spend(ones, caps[c]);
    if (spent[c] > caps[c].budget) return false;
  }

  struct Option {
    double added = 0.0;
    std::size_t pos = 0;
  };

  // Options for one unmet requirement: witnesses not fixed to zero whose own
  // cost (plus newly activated endpoints) fits every budget. Counts only
  // when out is null.
  auto options = [&](const Bits& witnesses, std::vector<Option>* out) {
    std::size_t count = 0;
    for (std::size_t w = 0; w < witnesses.size(); ++w) {
      std::uint64_t bits = witnesses[w] & ~zeros[w];
      while (bits != 0) {
        const std::size_t pos = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
        bits &= bits - 1;
        std::size_t added_bits[3] = {pos, pos, pos};
        std::size_t n_added = 1;
        if (!p.layout().is_system_bit(pos)) {
          const auto [a, b] = p.endpoints(pos);
          if (test_bit(zeros, a) || test_bit(zeros, b)) continue;
          if (!test_bit(ones, a)) added_bits[n_added++] = a;
          if (!test_bit(ones, b)) added_bits[n_added++] = b;
        }
        bool fits = true;
        double total_added = 0.0;
        for (std::size_t c = 0; c < caps.size() && fits; ++c) {
          double add = 0.0;
          for (std::size_t t = 0; t < n_added; ++t) add += caps[c].cost[added_bits[t]];
          total_added += add;
          const double slack = 1e-9 * std::max(1.0, caps[c].budget);
          if (spent[c] + add > caps[c].budget + slack) fits = false;
        }
        if (!fits) continue;
        ++count;
        if (out != nullptr) out->push_back({total_added, pos});
      }
    }
    return count;
  };

  // most constrained unmet requirement first
  const Bits* chosen = nullptr;
  std::size_t fewest = std::numeric_limits<std::size_t>::max();
  auto consider = [&](const Bits& witnesses) {
    const std::size_t n = options(witnesses, nullptr);
    if (n < fewest) {
      fewest = n;
      chosen = &witnesses;
    }
    return n > 0;
  };
  for (const CapabilityModel& m : caps) {
    if (!kernels::any_and(ones, m.system_witnesses) && !consider(m.system_witnesses)) return false;
    if (m.needs_interface && !kernels::any_and(ones, m.interface_witnesses) && !consider(m.interface_witnesses))
      return false;
  }
  if (chosen == nullptr) {
    if (found != nullptr) *found = ones;
    return true;
  }
  if (failed.contains(ones)) return false;

  std::vector<Option> best;
  best.reserve(fewest);
  options(*chosen, &best);
  std::stable_sort(best.begin(), best.end(), [](const Option& a, const Option& b) { return a.added < b.added; });
  for (const Option& o : best) {
    Bits next = ones;
    set_bit(next, o.pos);
    if (!p.layout().is_system_bit(o.pos)) {
      const auto [a, b] = p.endpoints(o.pos);
      set_bit(next, a);
      set_bit(next, b);
    }
    if (search(next, zeros, failed, found)) return true;
  }
  failed.insert(ones);
  return false;
}

// ---------------------------------------------------------------------------
// Rules, walk, repair

ConflictRuleSet conflict_rules_for_slot(const Problem& p, const Genome& partial, std::size_t slot) {
  check_layout(p, partial.words());
  if (slot >= p.total_bits()) throw IndexError(fmt::format("slot {} outside genome", slot));
  Bits ones = p.empty_bits(), zeros = p.empty_bits();
  for (std::size_t pos = 0; pos < slot; ++pos) set_bit(partial.test(pos) ? ones : zeros, pos);

  const CompletionSearch search(p);
  bool admitted[2];
  for (int v = 0; v < 2; ++v) {
    Bits o = ones, z = zeros;
    set_bit(v ? o : z, slot);
    admitted[v] = search.completable(o, z);
  }
  if (!admitted[0] && !admitted[1])
    throw InfeasiblePrefix(fmt::format("no feasible completion of the first {} bits", slot));

  ConflictRuleSet rules;
  for (int v = 0; v < 2; ++v) {
    if (!admitted[v]) {
      rules.forbidden.insert({slot, v == 1});
      rules.forced.insert({slot, v != 1});
    }
  }
  return rules;
}

namespace {

// Decides bits in order. prefer(pos, ones, zeros) returns the preferred
// value; done(out, pos) may finish the walk early by returning true after
// filling the remaining bits itself.
template <class Prefer, class Done>
Genome walk(const Problem& p, Prefer&& prefer, Done&& done) {
  const CompletionSearch search(p);
  Bits ones = p.empty_bits(), zeros = p.empty_bits();
  Genome out(p.layout());
  const Bits& allowed = p.allowed();

  // fixed-one set of a feasible genome extending the decided prefix
  Bits witness;
  Bits disallowed = p.empty_bits();
  for (std::size_t pos = 0; pos < p.total_bits(); ++pos)
    if (!test_bit(allowed, pos)) set_bit(disallowed, pos);
  if (!search.completable(ones, disallowed, &witness)) throw RepairFailure("scenario admits no feasible genome");

  auto within_budgets = [&](const Bits& b) {
    for (const CapabilityModel& m : p.capabilities())
      if (spend(b, m) > m.budget) return false;
    return true;
  };

  for (std::size_t pos = 0; pos < p.total_bits(); ++pos) {
    if (done(out, pos)) return out;
    if (!test_bit(allowed, pos)) {
      set_bit(zeros, pos);
      continue;
    }
    const bool v = prefer(pos);
    set_bit(v ? ones : zeros, pos);

    bool ok = test_bit(witness, pos) == v;
    if (!ok && v) {
      // adding one bit to a feasible set keeps every requirement met; only
      // budgets can break (endpoints precede pos and are already decided)
      bool endpoints_on = true;
      if (!p.layout().is_system_bit(pos)) {
        const auto [a, b] = p.endpoints(pos);
        endpoints_on = test_bit(ones, a) && test_bit(ones, b);
      }
      if (endpoints_on) {
        Bits grown = witness;
        set_bit(grown, pos);
        if (within_budgets(grown)) {
          witness = std::move(grown);
          ok = true;
        }
      }
    }
    if (!ok) ok = search.completable(ones, zeros, &witness);
    if (!ok) {
      // the previous witness still extends the prefix with the other value
      clear_bit(v ? ones : zeros, pos);
      set_bit(v ? zeros : ones, pos);
    }
    out.set(pos, test_bit(ones, pos));
  }
  return out;
}

}  // namespace

Genome repair(const Problem& p, const Genome& g) {
  check_layout(p, g.words());
  if (is_feasible(p, g)) return g;

  // an active bit outside `allowed` always violates something, so finishing
  // with g's suffix cannot succeed before the walk has passed the last one
  std::size_t clean_from = 0;
  for (std::size_t w = 0; w < g.words().size(); ++w) {
    const std::uint64_t bad = g.words()[w] & ~p.allowed()[w];
    if (bad != 0) clean_from = w * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(bad))) + 1;
  }

  bool changed = true;
  return walk(
      p, [&](std::size_t pos) { return g.test(pos); },
      [&](Genome& out, std::size_t pos) {
        // out[0..pos) is decided; once it differs from g, try finishing with
        // g's suffix
        if (pos > 0 && out.test(pos - 1) != g.test(pos - 1)) changed = true;
        if (!changed || pos < clean_from) return false;
        changed = false;
        Genome candidate = out;
        for (std::size_t q = pos; q < p.total_bits(); ++q) candidate.set(q, g.test(q));
        if (!is_feasible(p, candidate)) return false;
        out = std::move(candidate);
        return true;
      });
}

Genome random_feasible_genome(const Problem& p, Rng& rng) {
  return walk(
      p, [&](std::size_t) { return rng.coin(); }, [](Genome&, std::size_t) { return false; });
}

}  // namespace sosarch
