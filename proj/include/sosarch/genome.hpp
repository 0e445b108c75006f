#pragma once

// Chromosome layout: n system bits S1..Sn followed by one bit per unordered
// system pair, ordered (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n). Bit positions
// are zero-based; system ids are one-based.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sosarch {

class GenomeLayout {
 public:
  GenomeLayout() = default;
  explicit GenomeLayout(std::size_t n_sys) : n_sys_(n_sys) {}

  std::size_t system_count() const { return n_sys_; }
  std::size_t pair_count() const { return n_sys_ * (n_sys_ - (n_sys_ > 0 ? 1 : 0)) / 2; }
  std::size_t total_bits() const { return n_sys_ + pair_count(); }
  std::size_t word_count() const { return (total_bits() + 63) / 64; }

  bool is_system_bit(std::size_t pos) const { return pos < n_sys_; }

  /// Position of system j (1-based). Throws IndexError when out of range.
  std::size_t system_bit_index(std::size_t j) const;

  /// Position of the interface bit for pair (j, j'), 1 <= j < j' <= n.
  /// Throws IndexError otherwise.
  std::size_t interface_bit_index(std::size_t j, std::size_t j2) const;

  /// Inverse of interface_bit_index for pos in [n, total_bits).
  std::pair<std::size_t, std::size_t> pair_at(std::size_t pos) const;

  /// Words with exactly the system bits set.
  std::vector<std::uint64_t> system_mask() const;

  friend bool operator==(const GenomeLayout&, const GenomeLayout&) = default;

 private:
  std::size_t n_sys_ = 0;
};

class Genome {
 public:
  Genome() = default;
  explicit Genome(const GenomeLayout& layout) : layout_(layout), words_(layout.word_count(), 0) {}

  const GenomeLayout& layout() const { return layout_; }
  std::size_t size() const { return layout_.total_bits(); }

  bool test(std::size_t pos) const { return (words_[pos >> 6] >> (pos & 63)) & 1U; }
  void set(std::size_t pos, bool value = true) {
    const std::uint64_t bit = std::uint64_t{1} << (pos & 63);
    if (value)
      words_[pos >> 6] |= bit;
    else
      words_[pos >> 6] &= ~bit;
  }
  void flip(std::size_t pos) { words_[pos >> 6] ^= std::uint64_t{1} << (pos & 63); }

  bool system(std::size_t j) const { return test(layout_.system_bit_index(j)); }
  bool interface(std::size_t j, std::size_t j2) const { return test(layout_.interface_bit_index(j, j2)); }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  std::size_t count() const;

  static Genome ones(const GenomeLayout& layout);

  friend bool operator==(const Genome&, const Genome&) = default;

 private:
  GenomeLayout layout_;
  std::vector<std::uint64_t> words_;  // bits past total_bits stay zero
};

std::string genome_to_string(const Genome& g);
/// Throws FormatError on a length mismatch or a character other than '0'/'1'.
Genome genome_from_string(const GenomeLayout& layout, std::string_view text);

struct Contributions {
  double system = 0.0;     // active system bits / n
  double interface = 0.0;  // active interface bits / (n(n-1)/2), 0 when n = 1
};

Contributions contributions(const Genome& g);

/// Positions where a and b differ, ascending.
std::vector<std::size_t> difference_set(const Genome& a, const Genome& b);

}  // namespace sosarch
