// SPDX-License-Identifier: Apache-2.0
#include <limits>

#include "pear/kernels/kernels.hpp"

namespace pear::kernels {
namespace {

void add_rows_scalar(double* out, const double* weights, std::size_t stride,
                     const std::uint32_t* rows, std::size_t num_rows,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t r = 0; r < num_rows; ++r) {
    const double* row = weights + static_cast<std::size_t>(rows[r]) * stride;
    for (std::size_t i = 0; i < n; ++i) out[i] += row[i];
  }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double max_scalar(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

const Table& scalar_table() {
  static const Table t{add_rows_scalar, axpy_scalar, scale_scalar,
                       max_scalar,      sum_scalar,  dot_scalar};
  return t;
}

}  // namespace pear::kernels
