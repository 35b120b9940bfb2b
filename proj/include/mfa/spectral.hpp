#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfa/kernels.hpp"
#include "mfa/model.hpp"

namespace mfa {

struct PowerIterationOptions {
  double tol = 1e-10;  // relative, on the extrapolated Rayleigh-quotient error
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0x6d66612d73706563ULL;
  Exec exec = Exec::serial;
};

struct EigenEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::vector<double> vector;  // unit norm
};

struct SpectralSummary {
  double lambda_max = 0.0;      // largest algebraic eigenvalue: T_c
  double lambda_abs_max = 0.0;  // spectral radius: T*
  std::size_t iterations = 0;
  double residual = 0.0;
};

class SpectralError : public std::runtime_error {
 public:
  SpectralError(const std::string& what, std::size_t iterations, double estimate)
      : std::runtime_error(what), iterations_(iterations), estimate_(estimate) {}
  std::size_t iterations() const { return iterations_; }
  double estimate() const { return estimate_; }

 private:
  std::size_t iterations_;
  double estimate_;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Power iteration for a positive semidefinite operator. Stops when the
/// Rayleigh quotient's estimated remaining error (successive change scaled by
/// the observed contraction rate) falls below tol * |value|. Throws
/// SpectralError after max_iter iterations.
EigenEstimate dominant_eigenpair_psd(std::size_t n, const LinearOperator& op,
                                     const PowerIterationOptions& opts);

/// Spectral radius of J, via power iteration on J^2 so that +-lambda pairs
/// (bipartite couplings) cannot stall the iteration.
EigenEstimate lambda_abs_max(const SparseSymmetricMatrix& j, const PowerIterationOptions& opts = {});

/// Largest algebraic eigenvalue of J: power iteration on J + sigma I with the
/// Gershgorin shift sigma = max_i sum_j |J_ij|.
EigenEstimate lambda_max(const SparseSymmetricMatrix& j, const PowerIterationOptions& opts = {});

SpectralSummary spectral_summary(const SparseSymmetricMatrix& j,
                                 const PowerIterationOptions& opts = {});

struct RescaledModel {
  IsingModel model;
  double scale = 1.0;  // original energy = scaled energy * scale
};

enum class RescaleFallback { none, spectral_radius };

/// Divides J, h and the offset by lambda_max(J). A non-positive lambda_max is
/// reported as ModelError unless `fallback` selects the spectral radius.
RescaledModel rescale_model(const IsingModel& model, const PowerIterationOptions& opts = {},
                            RescaleFallback fallback = RescaleFallback::none);

IsingModel scale_model(const IsingModel& model, double factor);

}  // namespace mfa
