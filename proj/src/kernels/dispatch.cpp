// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cassert>
#include <stdexcept>
#include <string>

#include "pear/kernels/kernels.hpp"

namespace pear::kernels {
namespace {

Backend detect() {
#if defined(PEAR_HAVE_AVX2_KERNELS)
  if (__builtin_cpu_supports("avx2")) return Backend::kAvx2;
#endif
  return Backend::kScalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

bool supported(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(PEAR_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const Table& table(Backend backend) {
  if (!supported(backend)) {
    throw std::invalid_argument("kernel backend not supported on this CPU: " +
                                std::string(name(backend)));
  }
#if defined(PEAR_HAVE_AVX2_KERNELS)
  if (backend == Backend::kAvx2) return avx2_table();
#endif
  return scalar_table();
}

void select(Backend backend) {
  (void)table(backend);
  current().store(backend);
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

const Table& active() { return table(active_backend()); }

std::string_view name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

void add_rows(std::span<double> out, std::span<const double> weights,
              std::size_t stride, std::span<const std::uint32_t> rows) {
  assert(out.size() <= stride);
  active().add_rows(out.data(), weights.data(), stride, rows.data(),
                    rows.size(), out.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) {
  active().scale(a, x.data(), x.size());
}

double max(std::span<const double> x) { return active().max(x.data(), x.size()); }

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active().dot(x.data(), y.data(), x.size());
}

}  // namespace pear::kernels
