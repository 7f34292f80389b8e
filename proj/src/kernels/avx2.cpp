// SPDX-License-Identifier: Apache-2.0
#include <immintrin.h>

#include <limits>

#include "pear/kernels/kernels.hpp"

namespace pear::kernels {
namespace {

constexpr std::size_t kLanes = 4;

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void add_rows_avx2(double* out, const double* weights, std::size_t stride,
                   const std::uint32_t* rows, std::size_t num_rows,
                   std::size_t n) {
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t r = 0; r < num_rows; ++r) {
      const double* row = weights + static_cast<std::size_t>(rows[r]) * stride;
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(row + i));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (std::size_t i = body; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t r = 0; r < num_rows; ++r) {
      acc += weights[static_cast<std::size_t>(rows[r]) * stride + i];
    }
    out[i] = acc;
  }
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (std::size_t i = body; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  }
  for (std::size_t i = body; i < n; ++i) x[i] *= a;
}

double max_avx2(const double* x, std::size_t n) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  __m256d m = _mm256_set1_pd(neg_inf);
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    m = _mm256_max_pd(m, _mm256_loadu_pd(x + i));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, m);
  double out = neg_inf;
  for (double v : lanes) out = v > out ? v : out;
  for (std::size_t i = body; i < n; ++i) out = x[i] > out ? x[i] : out;
  return out;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double s = hsum(acc);
  for (std::size_t i = body; i < n; ++i) s += x[i];
  return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d prod =
        _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, prod);
  }
  double s = hsum(acc);
  for (std::size_t i = body; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

const Table& avx2_table() {
  static const Table t{add_rows_avx2, axpy_avx2, scale_avx2,
                       max_avx2,      sum_avx2,  dot_avx2};
  return t;
}

}  // namespace pear::kernels
