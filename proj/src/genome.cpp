#include "sosarch/genome.hpp"

#include <bit>

#include <fmt/format.h>

#include "sosarch/error.hpp"
#include "sosarch/kernels.hpp"

namespace sosarch {

std::size_t GenomeLayout::system_bit_index(std::size_t j) const {
  if (j < 1 || j > n_sys_) throw IndexError(fmt::format("system {} out of range 1..{}", j, n_sys_));
  return j - 1;
}

std::size_t GenomeLayout::interface_bit_index(std::size_t j, std::size_t j2) const {
  if (j < 1 || j >= j2 || j2 > n_sys_)
    throw IndexError(fmt::format("interface pair ({}, {}) invalid for {} systems", j, j2, n_sys_));
  return n_sys_ + (j - 1) * (2 * n_sys_ - j) / 2 + (j2 - j) - 1;
}

std::pair<std::size_t, std::size_t> GenomeLayout::pair_at(std::size_t pos) const {
  if (pos < n_sys_ || pos >= total_bits())
    throw IndexError(fmt::format("bit {} is not an interface bit", pos));
  std::size_t offset = pos - n_sys_;
  std::size_t j = 1;
  // row j holds n - j pairs
  while (offset >= n_sys_ - j) {
    offset -= n_sys_ - j;
    ++j;
  }
  return {j, j + 1 + offset};
}

std::vector<std::uint64_t> GenomeLayout::system_mask() const {
  std::vector<std::uint64_t> mask(word_count(), 0);
  for (std::size_t p = 0; p < n_sys_; ++p) mask[p >> 6] |= std::uint64_t{1} << (p & 63);
  return mask;
}

std::size_t Genome::count() const { return kernels::popcount(words_); }

Genome Genome::ones(const GenomeLayout& layout) {
  Genome g(layout);
  for (std::size_t p = 0; p < layout.total_bits(); ++p) g.set(p);
  return g;
}

std::string genome_to_string(const Genome& g) {
  std::string s(g.size(), '0');
  for (std::size_t p = 0; p < g.size(); ++p)
    if (g.test(p)) s[p] = '1';
  return s;
}

Genome genome_from_string(const GenomeLayout& layout, std::string_view text) {
  if (text.size() != layout.total_bits())
    throw FormatError(fmt::format("chromosome has {} characters, layout needs {}", text.size(),
                                  layout.total_bits()));
  Genome g(layout);
  for (std::size_t p = 0; p < text.size(); ++p) {
    const char c = text[p];
    if (c == '1')
      g.set(p);
    else if (c != '0')
      throw FormatError(fmt::format("chromosome character {} is '{}', expected '0' or '1'", p, c));
  }
  return g;
}

Contributions contributions(const Genome& g) {
  const GenomeLayout& layout = g.layout();
  Contributions c;
  if (layout.system_count() == 0) return c;
  const std::size_t total = g.count();
  const std::size_t sys = kernels::popcount_and(g.words(), layout.system_mask());
  c.system = static_cast<double>(sys) / static_cast<double>(layout.system_count());
  if (layout.pair_count() > 0)
    c.interface = static_cast<double>(total - sys) / static_cast<double>(layout.pair_count());
  return c;
}

std::vector<std::size_t> difference_set(const Genome& a, const Genome& b) {
  std::vector<std::uint64_t> diff(a.words().size());
  kernels::xor_into(a.words(), b.words(), diff);
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < diff.size(); ++w) {
    std::uint64_t bits = diff[w];
    while (bits != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

}  // namespace sosarch
