#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sosarch/genome.hpp"

namespace sosarch {

/// Cost, duration and performance of one candidate for one capability.
/// Units are scenario-defined; all values are finite and >= 0.
struct Attributes {
  double cost = 0.0;
  double duration = 0.0;
  double performance = 0.0;

  friend bool operator==(const Attributes&, const Attributes&) = default;
};

struct SystemDef {
  std::size_t id = 0;  // 1..n_sys, contiguous
  std::string label;

  friend bool operator==(const SystemDef&, const SystemDef&) = default;
};

struct InterfaceDef {
  std::size_t id = 0;  // 1..n_if
  std::size_t first = 0;
  std::size_t second = 0;  // first < second

  friend bool operator==(const InterfaceDef&, const InterfaceDef&) = default;
};

struct Capability {
  std::string id;
  double budget = 0.0;
  double deadline = 0.0;
  double performance_floor = 0.0;
  std::map<std::size_t, Attributes> systems;     // system id -> attributes
  std::map<std::size_t, Attributes> interfaces;  // interface id -> attributes

  friend bool operator==(const Capability&, const Capability&) = default;
};

struct Scenario {
  std::string name;
  std::string description;
  double expected_duration = 0.0;
  std::vector<SystemDef> systems;
  std::vector<InterfaceDef> interfaces;
  std::vector<Capability> capabilities;

  GenomeLayout layout() const { return GenomeLayout(systems.size()); }
  const InterfaceDef& interface_by_id(std::size_t id) const { return interfaces.at(id - 1); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// One line per violated invariant, "<entity>: <rule>". Empty iff valid.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Throws ValidationError carrying every violation when s is invalid.
void require_valid(const Scenario& s);

/// Three systems, one interface (1,3), two capabilities; the canonical small
/// instance used by tests and `--scenario tiny3`.
Scenario tiny3();

}  // namespace sosarch
