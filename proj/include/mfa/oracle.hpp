#pragma once

#include <cstddef>
#include <cstdint>

#include "mfa/kernels.hpp"
#include "mfa/model.hpp"

namespace mfa {

inline constexpr std::size_t kMaxOracleSpins = 24;
inline constexpr std::size_t kMaxFreeEnergySpins = 20;

class OracleSizeError : public ModelError {
 public:
  using ModelError::ModelError;
};

struct OracleResult {
  SpinConfig best_config;
  double best_value = 0.0;
  std::size_t num_optima = 0;
};

/// Exhaustive minimum of ising_energy over all 2^N configurations by Gray-code
/// enumeration. Among optima (equal within 1e-9 relative) the reported
/// configuration has the smallest mask, where bit i is set iff S_i = +1.
OracleResult exact_ground_state(const IsingModel& model, Exec exec = Exec::serial);

/// -T ln sum_n exp(-E_n / T), accumulated as a streaming log-sum-exp.
double exact_free_energy(const IsingModel& model, double temperature, Exec exec = Exec::serial);

/// Exhaustive maximum of cut_value, tracked directly on cut increments.
OracleResult exact_max_cut(const WeightedGraph& graph, Exec exec = Exec::serial);

}  // namespace mfa
