#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mfa/model.hpp"
#include "mfa/spectral.hpp"

namespace mfa {

struct QuantumAnnealConfig {
  double delta = 1.0;
  double s_start = 0.5;
  double s_end = 1.0;
  double ds = 1e-3;
  double inner_tol = 1e-8;
  std::size_t inner_max_iter = 200;

  void validate() const;
};

/// s (-1/2 mz.J.mz - h.mz) - (1 - s) Delta sum_i sqrt(1 - mz_i^2).
double energy_mz(const IsingModel& model, std::span<const double> mz, double s, double delta);

/// energy_mz with mz = cos(theta), mx = sin(theta).
double energy_theta(const IsingModel& model, std::span<const double> theta, double s, double delta);

/// dE/dtheta_i = s (sum_j J_ij cos theta_j + h_i) sin theta_i - (1 - s) Delta cos theta_i.
std::vector<double> grad_theta(const IsingModel& model, std::span<const double> theta, double s,
                               double delta);

/// v.H.v / v.v for the Hessian of energy_mz in mz:
/// H = -s J + (1 - s) Delta diag(1 / (1 - mz_i^2)^{3/2}).
double quantum_hessian_quotient(const IsingModel& model, std::span<const double> mz, double s,
                                double delta, std::span<const double> probe);

/// Delta / (lambda_max(J) + Delta): below it mz = 0 is a minimum when h = 0.
double s_threshold(double lambda_max, double delta);
double s_threshold(const IsingModel& model, double delta, const PowerIterationOptions& opts = {});

/// Folds theta back into [0, pi] by reflection; cos is unchanged.
void reflect_theta(std::span<double> theta);

struct QuantumAnnealResult {
  SpinConfig spins;
  double energy = 0.0;       // Ising energy of `spins` on the caller's model
  std::vector<double> mz;    // cos(theta) at s_end
  double scale = 1.0;        // lambda_max used for rescaling
  double s_first = 0.0;      // first schedule point actually solved
  std::size_t s_steps = 0;
  std::size_t nonconverged_steps = 0;
  std::optional<double> first_nonconverged_s;
  std::size_t inner_iterations = 0;
};

/// Runs the s-schedule on a model that is already rescaled (lambda_max = 1).
/// The returned energy is evaluated on `scaled` itself.
QuantumAnnealResult quantum_anneal_scaled(const IsingModel& scaled, const QuantumAnnealConfig& cfg);

/// Rescales internally, anneals from theta = pi/2, rounds mz = cos(theta)
/// at s_end, and reports the Ising energy of the rounded spins on `model`.
/// `seed` drives the spectral start vector only.
QuantumAnnealResult quantum_anneal(const IsingModel& model, const QuantumAnnealConfig& cfg,
                                   std::uint64_t seed = 0);

}  // namespace mfa
