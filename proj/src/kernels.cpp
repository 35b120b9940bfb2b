#include "mfa/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mfa {

namespace {
int g_threads = 0;
}

void set_thread_count(int threads) { g_threads = std::max(0, threads); }

int thread_count() {
  if (g_threads > 0) return g_threads;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace kernels {

void coupling_product_serial(const SparseSymmetricMatrix& j, std::span<const double> x,
                             std::span<double> out) {
  const auto offsets = j.row_offsets();
  const auto cols = j.columns();
  const auto vals = j.values();
  const std::size_t n = j.size();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * x[cols[k]];
    out[i] = sum;
  }
}

void coupling_product_omp(const SparseSymmetricMatrix& j, std::span<const double> x,
                          std::span<double> out) {
  const auto offsets = j.row_offsets();
  const auto cols = j.columns();
  const auto vals = j.values();
  const auto n = static_cast<std::ptrdiff_t>(j.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * x[cols[k]];
    out[static_cast<std::size_t>(i)] = sum;
  }
}

void coupling_product(const SparseSymmetricMatrix& j, std::span<const double> x,
                      std::span<double> out, Exec exec) {
  if (exec == Exec::parallel) {
    coupling_product_omp(j, x, out);
  } else {
    coupling_product_serial(j, x, out);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm_inf(std::span<const double> a) {
  double best = 0.0;
  for (double v : a) best = std::max(best, std::abs(v));
  return best;
}

}  // namespace kernels
}  // namespace mfa
