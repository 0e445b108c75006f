#pragma once

// Scenario compiled to genome-width bit masks and dense per-bit attribute
// tables. Built once per run and shared read-only by the constraint,
// objective and search code.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sosarch/genome.hpp"
#include "sosarch/scenario.hpp"

namespace sosarch {

using Bits = std::vector<std::uint64_t>;

inline bool test_bit(std::span<const std::uint64_t> w, std::size_t pos) {
  return (w[pos >> 6] >> (pos & 63)) & 1U;
}
inline void set_bit(std::span<std::uint64_t> w, std::size_t pos) {
  w[pos >> 6] |= std::uint64_t{1} << (pos & 63);
}
inline void clear_bit(std::span<std::uint64_t> w, std::size_t pos) {
  w[pos >> 6] &= ~(std::uint64_t{1} << (pos & 63));
}

/// Calls f(pos) for every set bit of w, ascending.
template <class F>
void for_each_bit(std::span<const std::uint64_t> w, F&& f) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::uint64_t bits = w[i];
    while (bits != 0) {
      f(i * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
      bits &= bits - 1;
    }
  }
}

struct CapabilityModel {
  double budget = 0.0;
  double deadline = 0.0;
  double floor = 0.0;
  bool needs_interface = false;  // declares interface candidates
  Bits systems;                  // candidate system bits
  Bits interfaces;               // candidate interface bits
  Bits candidates;               // systems | interfaces
  Bits system_witnesses;         // allowed candidate systems with performance >= floor
  Bits interface_witnesses;      // allowed candidate interfaces with performance >= floor
  std::vector<double> cost;      // per bit position, 0 for non-candidates
  std::vector<double> duration;
  std::vector<double> performance;
};

class Problem {
 public:
  /// Validates s (ValidationError) and compiles it.
  explicit Problem(Scenario s);

  const Scenario& scenario() const { return scenario_; }
  const GenomeLayout& layout() const { return layout_; }
  std::size_t words() const { return layout_.word_count(); }
  std::size_t total_bits() const { return layout_.total_bits(); }

  const std::vector<CapabilityModel>& capabilities() const { return caps_; }

  /// Bits some capability can select: candidate systems and declared
  /// interfaces listed by a capability.
  const Bits& used() const { return used_; }
  /// Used bits that can be 1 in some genome without breaking a per-element
  /// deadline or budget; interfaces additionally need both endpoints allowed.
  const Bits& allowed() const { return allowed_; }
  const Bits& system_mask() const { return system_mask_; }
  const Bits& interface_mask() const { return interface_mask_; }

  /// Zero-based endpoint system positions of interface bit pos.
  std::pair<std::size_t, std::size_t> endpoints(std::size_t pos) const {
    return endpoints_[pos - layout_.system_count()];
  }
  /// Declared interface id at bit pos, 0 when the pair is undeclared.
  std::size_t interface_id_at(std::size_t pos) const { return interface_at_[pos - layout_.system_count()]; }
  std::size_t interface_position(std::size_t interface_id) const { return interface_pos_.at(interface_id - 1); }

  /// Interface bits of g whose endpoints are both active.
  Bits live_interfaces(std::span<const std::uint64_t> g) const;

  Bits empty_bits() const { return Bits(words(), 0); }

 private:
  Scenario scenario_;
  GenomeLayout layout_;
  std::vector<CapabilityModel> caps_;
  Bits used_, allowed_, system_mask_, interface_mask_;
  std::vector<std::pair<std::size_t, std::size_t>> endpoints_;
  std::vector<std::size_t> interface_at_;
  std::vector<std::size_t> interface_pos_;
};

}  // namespace sosarch
