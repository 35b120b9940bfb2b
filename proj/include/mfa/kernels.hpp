#pragma once

#include <cstddef>
#include <span>

#include "mfa/model.hpp"

namespace mfa {

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path; `parallel` uses OpenMP and must produce bit-identical results.
enum class Exec { serial, parallel };

/// Thread count used by `Exec::parallel` regions; 0 means the OpenMP default.
void set_thread_count(int threads);
int thread_count();

namespace kernels {

/// out_i = sum_j J_ij x_j. Rows are independent and each row is summed in
/// column order, so both policies agree bit for bit.
void coupling_product(const SparseSymmetricMatrix& j, std::span<const double> x,
                      std::span<double> out, Exec exec = Exec::serial);

void coupling_product_serial(const SparseSymmetricMatrix& j, std::span<const double> x,
                             std::span<double> out);
void coupling_product_omp(const SparseSymmetricMatrix& j, std::span<const double> x,
                          std::span<double> out);

/// Fixed-order dot product.
double dot(std::span<const double> a, std::span<const double> b);
double norm_inf(std::span<const double> a);

}  // namespace kernels
}  // namespace mfa
