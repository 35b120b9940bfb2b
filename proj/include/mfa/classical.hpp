#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mfa/model.hpp"
#include "mfa/spectral.hpp"

namespace mfa {

enum class ClassicalMode { self_consistent, gradient };

struct ClassicalAnnealConfig {
  double t_start = 1.0;
  double t_end = 1e-3;
  double dt = 1e-3;
  double inner_tol = 1e-8;
  std::size_t inner_max_iter = 1000;
  ClassicalMode mode = ClassicalMode::gradient;
  // A period-2 signature must persist this long before breakdown is declared.
  std::size_t oscillation_window = 100;

  void validate() const;
};

/// T_start = 1.5 T*, T_end = 1e-3 T_c (T* when T_c <= 0), dT = T_start / 1000.
ClassicalAnnealConfig default_classical_config(const IsingModel& model, ClassicalMode mode,
                                               const PowerIterationOptions& spectral = {});

/// -1/2 m.J.m - h.m + T sum_i [p ln p + q ln q], p = (1 + m_i)/2, q = (1 - m_i)/2.
/// Throws ModelError if any |m_i| >= 1 or T <= 0.
double mf_free_energy(const IsingModel& model, std::span<const double> m, double temperature);

std::vector<double> mf_gradient(const IsingModel& model, std::span<const double> m,
                                double temperature);

/// m'_i = tanh((h_i + sum_j J_ij m_j) / T).
std::vector<double> self_consistent_step(const IsingModel& model, std::span<const double> m,
                                         double temperature);

/// Spectral radius of the Jacobian (1 - m_i^2) J_ij / T of the self-consistent
/// map; above 1 the fixed-point iteration cannot converge.
double iteration_stability(const IsingModel& model, std::span<const double> m, double temperature,
                           const PowerIterationOptions& opts = {});

/// v.H.v / v.v with H = -J + T diag(1 / (1 - m_i^2)).
double mf_hessian_quotient(const IsingModel& model, std::span<const double> m, double temperature,
                           std::span<const double> probe);

/// Minimizes the free energy at fixed T from `m` (steepest descent with
/// Armijo backtracking). Returns true when the gradient tolerance was met.
bool relax_free_energy(const IsingModel& model, std::vector<double>& m, double temperature,
                       double tol = 1e-8, std::size_t max_iter = 1000);

struct ClassicalAnnealResult {
  std::vector<double> m;
  SpinConfig spins;
  double final_temperature = 0.0;
  std::size_t temperature_steps = 0;
  std::size_t nonconverged_steps = 0;
  std::size_t inner_iterations = 0;
  bool breakdown = false;
  std::optional<double> breakdown_temperature;
};

/// Tracks the mean-field minimum from T_start down to T_end in steps of dT,
/// starting from m_i = tanh(h_i / T_start). Breakdown of the self-consistent
/// iteration is reported in the result, never thrown.
ClassicalAnnealResult classical_anneal(const IsingModel& model, const ClassicalAnnealConfig& cfg);

struct MixingTermRow {
  double m = 0.0;
  double entropy_term = 0.0;     // (T/2) ln((1 + m) / (1 - m))
  double transverse_term = 0.0;  // Delta m / sqrt(1 - m^2)
};

/// n_points samples on [-(1 - eps), 1 - eps], symmetric so that odd counts hit
/// m = 0 exactly. Delta is 1 and T is `t_over_delta`.
std::vector<MixingTermRow> mixing_term_table(double t_over_delta, std::size_t n_points,
                                             double eps = 1e-3);

}  // namespace mfa
