#include "sosarch/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sosarch::kernels {

#ifndef SOSARCH_HAVE_AVX2_TU
const Table* avx2_table() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(SOSARCH_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

// SOSARCH_KERNELS=scalar forces the reference path.
Backend initial_backend() {
  const char* env = std::getenv("SOSARCH_KERNELS");
  if (env != nullptr && std::string(env) == "scalar") return Backend::scalar;
  return cpu_has_avx2() && avx2_table() != nullptr ? Backend::avx2 : Backend::scalar;
}

struct State {
  Backend backend = initial_backend();
  const Table* table = backend == Backend::avx2 ? avx2_table() : &scalar_table();
};

State& state() {
  static State s;
  return s;
}

}  // namespace

bool supported(Backend b) {
  if (b == Backend::scalar) return true;
  return avx2_table() != nullptr && cpu_has_avx2();
}

void set_backend(Backend b) {
  if (!supported(b)) throw std::invalid_argument("kernel backend not supported on this host");
  state().backend = b;
  state().table = b == Backend::avx2 ? avx2_table() : &scalar_table();
}

Backend active_backend() { return state().backend; }

const Table& active() { return *state().table; }

}  // namespace sosarch::kernels
