#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sosarch/genome.hpp"
#include "sosarch/problem.hpp"
#include "sosarch/rng.hpp"

namespace sosarch {

enum class ViolationKind {
  budget,
  deadline,
  performance_floor,
  coverage,
  system_indicator,
  interface_indicator,
  interface_endpoints,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind{};
  std::optional<std::string> capability;  // capability id, for per-capability kinds
  std::optional<std::string> entity;      // system / interface id or "(j,j')" pair
  std::string detail;

  /// "kind capability=i entity=j: detail", omitting absent fields.
  std::string to_line() const;
};

/// Systems and interfaces (1-based ids, ascending) selected per capability.
struct CapabilitySelection {
  std::vector<std::size_t> systems;
  std::vector<std::size_t> interfaces;

  friend bool operator==(const CapabilitySelection&, const CapabilitySelection&) = default;
};

struct Assignment {
  std::vector<CapabilitySelection> capabilities;

  bool selects_system(std::size_t cap, std::size_t j) const;
  bool selects_interface(std::size_t cap, std::size_t k) const;
};

/// S_ij = 1 for active candidate systems, c_ik = 1 for active candidate
/// interfaces whose endpoints are both active.
Assignment decode_assignment(const Problem& p, const Genome& g);

std::vector<Violation> check_feasible(const Problem& p, const Genome& g);
bool is_feasible(const Problem& p, std::span<const std::uint64_t> g);
inline bool is_feasible(const Problem& p, const Genome& g) { return is_feasible(p, g.words()); }
std::size_t count_violations(const Problem& p, const Genome& g);

/// Number of checked constraint instances: six per capability, one per
/// system bit and two per interface bit. Always > count_violations.
std::size_t constraint_instance_count(const Problem& p);

/// Forced / forbidden values for genome positions.
struct ConflictRuleSet {
  std::set<std::pair<std::size_t, bool>> forbidden;
  std::set<std::pair<std::size_t, bool>> forced;

  bool admits(std::size_t pos, bool value) const { return !forbidden.contains({pos, value}); }
};

/// Exact feasibility of partial assignments: decides whether some feasible
/// genome extends a set of fixed-one and fixed-zero bits.
class CompletionSearch {
 public:
  explicit CompletionSearch(const Problem& p) : p_(&p) {}

  /// On success, `found` (if given) receives the fixed-one set of a feasible
  /// completion; all other bits of that completion are zero.
  bool completable(std::span<const std::uint64_t> ones, std::span<const std::uint64_t> zeros,
                   Bits* found = nullptr) const;

  /// Search nodes visited since construction.
  std::size_t nodes() const { return nodes_; }

 private:
  bool search(Bits& ones, std::span<const std::uint64_t> zeros, std::set<Bits>& failed, Bits* found) const;

  const Problem* p_;
  mutable std::size_t nodes_ = 0;
};

/// Rules for position `slot` given the decided bits partial[0..slot).
/// A value is admitted iff some feasible genome extends prefix+value.
/// Throws InfeasiblePrefix when neither value is admitted.
ConflictRuleSet conflict_rules_for_slot(const Problem& p, const Genome& partial, std::size_t slot);

/// Nearest-first repair: walks the bits in order, keeping each bit of g that
/// still admits a feasible completion and taking the forced value otherwise.
/// Identity on feasible genomes, deterministic, idempotent. Throws
/// RepairFailure when the problem has no feasible genome at all.
Genome repair(const Problem& p, const Genome& g);

/// Random constrained genome built bit by bit: each undecided bit is drawn
/// uniformly from the values the conflict rules admit.
Genome random_feasible_genome(const Problem& p, Rng& rng);

}  // namespace sosarch
