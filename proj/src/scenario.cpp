#include "sosarch/scenario.hpp"

#include <cmath>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "sosarch/error.hpp"

namespace sosarch {
namespace {

bool nonneg_finite(double x) { return std::isfinite(x) && x >= 0.0; }

bool attrs_ok(const Attributes& a) {
  return nonneg_finite(a.cost) && nonneg_finite(a.duration) && nonneg_finite(a.performance);
}

bool individually_feasible(const Capability& c, const Attributes& a) {
  return a.performance >= c.performance_floor && a.duration <= c.deadline && a.cost <= c.budget;
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;
  const std::size_t n_sys = s.systems.size();

  if (n_sys == 0) out.push_back("scenario: no systems");
  if (s.capabilities.empty()) out.push_back("scenario: no capabilities");
  if (!std::isfinite(s.expected_duration) || s.expected_duration <= 0.0)
    out.push_back("scenario: expected_duration must be > 0");

  for (std::size_t i = 0; i < n_sys; ++i)
    if (s.systems[i].id != i + 1)
      out.push_back(fmt::format("system {}: ids must be contiguous from 1", s.systems[i].id));

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < s.interfaces.size(); ++k) {
    const InterfaceDef& f = s.interfaces[k];
    if (f.id != k + 1) out.push_back(fmt::format("interface {}: ids must be contiguous from 1", f.id));
    if (f.first >= f.second) {
      out.push_back(fmt::format("interface {}: endpoints must differ, j < j'", f.id));
      continue;
    }
    if (f.first < 1 || f.second > n_sys) {
      out.push_back(fmt::format("interface {}: endpoint out of range 1..{}", f.id, n_sys));
      continue;
    }
    if (!pairs.emplace(f.first, f.second).second)
      out.push_back(fmt::format("interface {}: duplicate endpoints ({}, {})", f.id, f.first, f.second));
  }

  std::set<std::string> cap_ids;
  for (const Capability& c : s.capabilities) {
    const std::string& id = c.id;
    if (!cap_ids.insert(id).second) out.push_back(fmt::format("capability {}: duplicate id", id));
    if (!nonneg_finite(c.budget) || !nonneg_finite(c.deadline) || !nonneg_finite(c.performance_floor))
      out.push_back(fmt::format("capability {}: budget, deadline and floor must be finite and >= 0", id));

    if (c.systems.empty()) {
      out.push_back(fmt::format("capability {}: no candidate systems", id));
    } else {
      bool refs_ok = true;
      for (const auto& [j, a] : c.systems) {
        if (j < 1 || j > n_sys) {
          out.push_back(fmt::format("capability {}: unknown system {}", id, j));
          refs_ok = false;
        }
        if (!attrs_ok(a))
          out.push_back(fmt::format("capability {}: system {} attributes must be finite and >= 0", id, j));
      }
      if (refs_ok) {
        bool floor_reachable = false;
        bool any_feasible = false;
        for (const auto& [j, a] : c.systems) {
          floor_reachable = floor_reachable || a.performance >= c.performance_floor;
          any_feasible = any_feasible || individually_feasible(c, a);
        }
        if (!floor_reachable)
          out.push_back(fmt::format("capability {}: performance floor unreachable", id));
        else if (!any_feasible)
          out.push_back(fmt::format("capability {}: no candidate system meets budget, deadline and floor", id));
      }
    }

    if (!c.interfaces.empty()) {
      bool refs_ok = true;
      for (const auto& [k, a] : c.interfaces) {
        if (k < 1 || k > s.interfaces.size()) {
          out.push_back(fmt::format("capability {}: unknown interface {}", id, k));
          refs_ok = false;
        }
        if (!attrs_ok(a))
          out.push_back(fmt::format("capability {}: interface {} attributes must be finite and >= 0", id, k));
      }
      if (refs_ok) {
        bool floor_reachable = false;
        bool any_feasible = false;
        for (const auto& [k, a] : c.interfaces) {
          floor_reachable = floor_reachable || a.performance >= c.performance_floor;
          any_feasible = any_feasible || individually_feasible(c, a);
        }
        if (!floor_reachable)
          out.push_back(fmt::format("capability {}: interface performance floor unreachable", id));
        else if (!any_feasible)
          out.push_back(
              fmt::format("capability {}: no candidate interface meets budget, deadline and floor", id));
      }
    }
  }
  return out;
}

void require_valid(const Scenario& s) {
  const auto violations = validate_scenario(s);
  if (!violations.empty()) throw ValidationError(fmt::format("{}", fmt::join(violations, "; ")));
}

Scenario tiny3() {
  Scenario s;
  s.name = "tiny3";
  s.description = "Three systems, one declared interface, two capabilities.";
  s.expected_duration = 5.0;
  s.systems = {{1, "S1"}, {2, "S2"}, {3, "S3"}};
  s.interfaces = {{1, 1, 3}};

  Capability a;
  a.id = "A";
  a.budget = 6.0;
  a.deadline = 3.0;
  a.performance_floor = 0.5;
  a.systems = {{1, {5.0, 2.0, 0.8}}, {2, {3.0, 3.0, 0.6}}};

  Capability b;
  b.id = "B";
  b.budget = 5.0;
  b.deadline = 2.0;
  b.performance_floor = 0.7;
  b.systems = {{3, {4.0, 1.0, 0.9}}};
  b.interfaces = {{1, {1.0, 1.0, 0.9}}};

  s.capabilities = {a, b};
  return s;
}

}  // namespace sosarch
