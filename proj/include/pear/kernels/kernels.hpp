// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense double-precision inner loops shared by the policy and the optimizer.
//
// Every kernel exists as a scalar reference and, on x86-64, an AVX2 variant.
// The active table is picked once at startup from the CPU's capabilities and
// can be overridden for testing. Element-wise kernels (add_rows, axpy, scale,
// max) are bit-identical across backends; reductions (sum, dot) agree to a
// few ulps because the SIMD variants accumulate in four lanes.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace pear::kernels {

enum class Backend { kScalar, kAvx2 };

struct Table {
  // out[i] = sum over r in rows of weights[r * stride + i], for i < n.
  void (*add_rows)(double* out, const double* weights, std::size_t stride,
                   const std::uint32_t* rows, std::size_t num_rows,
                   std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= a
  void (*scale)(double a, double* x, std::size_t n);
  double (*max)(const double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
};

const Table& scalar_table();
#if defined(PEAR_HAVE_AVX2_KERNELS)
const Table& avx2_table();
#endif

bool supported(Backend backend);
const Table& table(Backend backend);

// Throws std::invalid_argument if the backend is not supported on this CPU.
void select(Backend backend);
Backend active_backend();
const Table& active();
std::string_view name(Backend backend);

// Span conveniences over the active table.
void add_rows(std::span<double> out, std::span<const double> weights,
              std::size_t stride, std::span<const std::uint32_t> rows);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
double max(std::span<const double> x);
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace pear::kernels
