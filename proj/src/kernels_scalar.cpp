#include "sosarch/kernels.hpp"

#include <bit>
#include <limits>

namespace sosarch::kernels {
namespace {

std::size_t popcount_scalar(const std::uint64_t* a, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += static_cast<std::size_t>(std::popcount(a[i]));
  return c;
}

std::size_t popcount_and_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return c;
}

bool any_and_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if ((a[i] & b[i]) != 0) return true;
  return false;
}

void xor_into_scalar(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] ^ b[i];
}

double sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) acc[i % 4] += x[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double max_scalar(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace

const Table& scalar_table() {
  static const Table t{"scalar",       popcount_scalar, popcount_and_scalar, any_and_scalar,
                       xor_into_scalar, sum_scalar,     max_scalar};
  return t;
}

}  // namespace sosarch::kernels
