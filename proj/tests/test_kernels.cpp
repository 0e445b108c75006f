#include <doctest.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <cmath>
#include <vector>

#include "sosarch/kernels.hpp"
#include "sosarch/rng.hpp"

using namespace sosarch;

namespace {

std::vector<std::uint64_t> random_words(Rng& rng, std::size_t n) {
  std::vector<std::uint64_t> v(n);
  for (auto& w : v) w = rng.next();
  return v;
}

std::vector<double> random_doubles(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1e3, 1e3) * std::ldexp(1.0, static_cast<int>(rng.below(40)) - 20);
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar kernels match plain loops") {
  Rng rng(11);
  const auto& t = kernels::scalar_table();
  for (std::size_t n : {0, 1, 3, 4, 5, 8, 17, 64}) {
    const auto a = random_words(rng, n);
    const auto b = random_words(rng, n);
    std::size_t pc = 0, pca = 0;
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      pc += std::popcount(a[i]);
      pca += std::popcount(a[i] & b[i]);
      any = any || (a[i] & b[i]) != 0;
    }
    CHECK(t.popcount(a.data(), n) == pc);
    CHECK(t.popcount_and(a.data(), b.data(), n) == pca);
    CHECK(t.any_and(a.data(), b.data(), n) == any);
    std::vector<std::uint64_t> x(n);
    t.xor_into(a.data(), b.data(), x.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == (a[i] ^ b[i]));
  }
}

TEST_CASE("sum uses four interleaved lanes") {
  const std::vector<double> x = {1e16, 1.0, -1e16, 1.0, 1.0};
  // lanes: (1e16 + 1), 1, -1e16, 1  ->  ((1e16+1) + 1) + (-1e16 + 1)
  const double lane0 = 1e16 + 1.0;
  const double expect = (lane0 + 1.0) + (-1e16 + 1.0);
  CHECK(same_bits(kernels::scalar_table().sum(x.data(), x.size()), expect));
  CHECK(kernels::scalar_table().sum(x.data(), 0) == 0.0);
}

TEST_CASE("max of empty range is -inf") {
  CHECK(kernels::scalar_table().max(nullptr, 0) == -std::numeric_limits<double>::infinity());
  const std::vector<double> x = {0.25, -3.0, 7.5, 7.0};
  CHECK(kernels::scalar_table().max(x.data(), x.size()) == 7.5);
}

TEST_CASE("avx2 kernels are bit-identical to scalar") {
  const kernels::Table* v = kernels::avx2_table();
  if (v == nullptr || !kernels::supported(kernels::Backend::avx2)) {
    MESSAGE("avx2 variant unavailable on this build/CPU");
    return;
  }
  const auto& s = kernels::scalar_table();
  Rng rng(12345);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = rng.below(70);
    const auto a = random_words(rng, n);
    const auto b = random_words(rng, n);
    REQUIRE(v->popcount(a.data(), n) == s.popcount(a.data(), n));
    REQUIRE(v->popcount_and(a.data(), b.data(), n) == s.popcount_and(a.data(), b.data(), n));
    REQUIRE(v->any_and(a.data(), b.data(), n) == s.any_and(a.data(), b.data(), n));
    std::vector<std::uint64_t> xs(n), xv(n);
    s.xor_into(a.data(), b.data(), xs.data(), n);
    v->xor_into(a.data(), b.data(), xv.data(), n);
    REQUIRE(xs == xv);

    const auto d = random_doubles(rng, n);
    REQUIRE(same_bits(v->sum(d.data(), n), s.sum(d.data(), n)));
    REQUIRE(same_bits(v->max(d.data(), n), s.max(d.data(), n)));
  }
  // disjoint masks: any_and false on both
  std::vector<std::uint64_t> a(9, 0xAAAAAAAAAAAAAAAAULL), b(9, 0x5555555555555555ULL);
  CHECK_FALSE(v->any_and(a.data(), b.data(), a.size()));
  b[8] |= 0x8000000000000000ULL;
  CHECK(v->any_and(a.data(), b.data(), a.size()));
}

TEST_CASE("backend selection") {
  CHECK(kernels::supported(kernels::Backend::scalar));
  const auto before = kernels::active_backend();
  kernels::set_backend(kernels::Backend::scalar);
  CHECK(kernels::active().name == kernels::scalar_table().name);
  if (kernels::supported(kernels::Backend::avx2)) {
    kernels::set_backend(kernels::Backend::avx2);
    CHECK(kernels::active_backend() == kernels::Backend::avx2);
  } else {
    CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::avx2), std::invalid_argument);
  }
  kernels::set_backend(before);
}
