#pragma once

// Packed-bitset and reduction kernels used on the genome / population hot
// paths. Every kernel has a scalar reference and, on x86-64, an AVX2 variant
// chosen at runtime. Variants are required to agree bit-for-bit, including
// floating sums (both use the same 4-lane accumulation order).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sosarch::kernels {

enum class Backend { scalar, avx2 };

struct Table {
  std::string_view name;
  std::size_t (*popcount)(const std::uint64_t* a, std::size_t n);
  std::size_t (*popcount_and)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  bool (*any_and)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  void (*xor_into)(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max)(const double* x, std::size_t n);
};

const Table& scalar_table();
/// Null when the AVX2 translation unit was not built.
const Table* avx2_table();

bool supported(Backend b);
/// Throws std::invalid_argument for a backend this CPU/build cannot run.
void set_backend(Backend b);
Backend active_backend();
const Table& active();

inline std::size_t popcount(std::span<const std::uint64_t> a) {
  return active().popcount(a.data(), a.size());
}

inline std::size_t popcount_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active().popcount_and(a.data(), b.data(), a.size());
}

inline bool any_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active().any_and(a.data(), b.data(), a.size());
}

inline void xor_into(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                     std::span<std::uint64_t> out) {
  active().xor_into(a.data(), b.data(), out.data(), a.size());
}

/// Sum with fixed lane order: element i goes to accumulator i % 4, result is
/// (acc0 + acc1) + (acc2 + acc3).
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

/// Max of a non-empty range without NaNs; -inf for an empty one.
inline double max(std::span<const double> x) { return active().max(x.data(), x.size()); }

}  // namespace sosarch::kernels
