#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfa/kernels.hpp"
#include "mfa/model.hpp"
#include "mfa/quantum.hpp"

namespace mfa {

/// Noise field h^(k)_i ~ unif(-A, A) on the rescaled model, i.e.
/// unif(-A / lambda_max, A / lambda_max) in original units.
struct NoiseSpec {
  double amplitude = 0.0;
  std::uint64_t master_seed = 0;
  std::size_t n_trials = 200;

  void validate() const;
};

enum class Objective { cut, energy };

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double value = 0.0;   // cut value (cut objective) or noiseless Ising energy
  double energy = 0.0;  // Ising energy on the caller's model, noise excluded
  std::uint64_t digest = 0;
  std::size_t nonconverged_steps = 0;
  bool failed = false;
  std::string error;
};

struct EcdfPoint {
  double value = 0.0;
  double fraction = 0.0;
};

struct TrialBatchResult {
  double amplitude = 0.0;
  Objective objective = Objective::cut;
  std::vector<TrialRecord> trials;
  std::size_t n_failed = 0;
  double mean = 0.0;
  double best = 0.0;  // max for cuts, min for energies
  double std = 0.0;   // population
  std::vector<EcdfPoint> ecdf;
};

struct EnsembleOptions {
  Exec exec = Exec::parallel;
  PowerIterationOptions spectral;
};

/// Recomputes mean/best/std/ecdf from the non-failed trials.
void summarize(TrialBatchResult& batch);

/// Sorted distinct values with the fraction of trials at or below each one.
std::vector<EcdfPoint> empirical_cdf(std::span<const double> values);

/// Max-Cut ensemble: each trial anneals the rescaled Ising model of `graph`
/// with an independent noise field and scores the rounded spins by the cut
/// on the original weights.
TrialBatchResult run_trials(const WeightedGraph& graph, const NoiseSpec& noise,
                            const QuantumAnnealConfig& cfg, const EnsembleOptions& opts = {});

/// Generic Ising ensemble: noise is added on top of the model's own field,
/// trials are scored by the noiseless Ising energy (lower is better).
TrialBatchResult run_trials(const IsingModel& model, const NoiseSpec& noise,
                            const QuantumAnnealConfig& cfg, const EnsembleOptions& opts = {});

std::vector<TrialBatchResult> amplitude_sweep(const WeightedGraph& graph,
                                              std::span<const double> amplitudes,
                                              const NoiseSpec& base, const QuantumAnnealConfig& cfg,
                                              const EnsembleOptions& opts = {});

std::vector<TrialBatchResult> amplitude_sweep(const IsingModel& model,
                                              std::span<const double> amplitudes,
                                              const NoiseSpec& base, const QuantumAnnealConfig& cfg,
                                              const EnsembleOptions& opts = {});

}  // namespace mfa
