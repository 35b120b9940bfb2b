#include "mfa/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "mfa/rng.hpp"
#include "mfa/spectral.hpp"

namespace mfa {

void NoiseSpec::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ModelError("noise amplitude must be finite and >= 0");
  }
  if (n_trials == 0) throw ModelError("n_trials must be at least 1");
}

std::vector<EcdfPoint> empirical_cdf(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<EcdfPoint> out;
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

void summarize(TrialBatchResult& batch) {
  std::vector<double> values;
  batch.n_failed = 0;
  for (const auto& t : batch.trials) {
    if (t.failed) {
      ++batch.n_failed;
    } else {
      values.push_back(t.value);
    }
  }
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    batch.mean = batch.best = batch.std = nan;
    batch.ecdf.clear();
    return;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  batch.mean = mean;
  batch.std = std::sqrt(sq / static_cast<double>(values.size()));
  batch.best = batch.objective == Objective::cut ? *std::max_element(values.begin(), values.end())
                                                 : *std::min_element(values.begin(), values.end());
  batch.ecdf = empirical_cdf(values);
}

namespace {

TrialBatchResult run_batch(const IsingModel& model, const RescaledModel& rescaled,
                           const WeightedGraph* graph, const NoiseSpec& noise,
                           const QuantumAnnealConfig& cfg, const EnsembleOptions& opts) {
  noise.validate();
  cfg.validate();
  TrialBatchResult batch;
  batch.amplitude = noise.amplitude;
  batch.objective = graph ? Objective::cut : Objective::energy;
  batch.trials.resize(noise.n_trials);

  const auto run_one = [&](std::size_t k) {
    auto& rec = batch.trials[k];
    rec.index = k;
    rec.seed = substream_seed(noise.master_seed, k);
    try {
      CounterRng rng(rec.seed);
      std::vector<double> h(rescaled.model.field);
      for (auto& x : h) x += rng.uniform(-noise.amplitude, noise.amplitude);
      const IsingModel noisy(rescaled.model.couplings, std::move(h), rescaled.model.offset);
      const auto result = quantum_anneal_scaled(noisy, cfg);
      rec.energy = ising_energy(model, result.spins);
      rec.value = graph ? cut_value(*graph, result.spins) : rec.energy;
      rec.digest = result.spins.digest();
      rec.nonconverged_steps = result.nonconverged_steps;
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  };

  const auto n = static_cast<std::ptrdiff_t>(noise.n_trials);
  if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (std::ptrdiff_t k = 0; k < n; ++k) run_one(static_cast<std::size_t>(k));
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) run_one(static_cast<std::size_t>(k));
  }
  summarize(batch);
  return batch;
}

RescaledModel rescale(const IsingModel& model, const EnsembleOptions& opts) {
  return rescale_model(model, opts.spectral, RescaleFallback::spectral_radius);
}

}  // namespace

TrialBatchResult run_trials(const WeightedGraph& graph, const NoiseSpec& noise,
                            const QuantumAnnealConfig& cfg, const EnsembleOptions& opts) {
  const auto model = maxcut_to_ising(graph);
  return run_batch(model, rescale(model, opts), &graph, noise, cfg, opts);
}

TrialBatchResult run_trials(const IsingModel& model, const NoiseSpec& noise,
                            const QuantumAnnealConfig& cfg, const EnsembleOptions& opts) {
  return run_batch(model, rescale(model, opts), nullptr, noise, cfg, opts);
}

std::vector<TrialBatchResult> amplitude_sweep(const WeightedGraph& graph,
                                              std::span<const double> amplitudes,
                                              const NoiseSpec& base, const QuantumAnnealConfig& cfg,
                                              const EnsembleOptions& opts) {
  if (amplitudes.empty()) throw ModelError("amplitude sweep needs at least one amplitude");
  const auto model = maxcut_to_ising(graph);
  const auto rescaled = rescale(model, opts);
  std::vector<TrialBatchResult> out;
  for (double a : amplitudes) {
    NoiseSpec spec = base;
    spec.amplitude = a;
    out.push_back(run_batch(model, rescaled, &graph, spec, cfg, opts));
  }
  return out;
}

std::vector<TrialBatchResult> amplitude_sweep(const IsingModel& model,
                                              std::span<const double> amplitudes,
                                              const NoiseSpec& base, const QuantumAnnealConfig& cfg,
                                              const EnsembleOptions& opts) {
  if (amplitudes.empty()) throw ModelError("amplitude sweep needs at least one amplitude");
  const auto rescaled = rescale(model, opts);
  std::vector<TrialBatchResult> out;
  for (double a : amplitudes) {
    NoiseSpec spec = base;
    spec.amplitude = a;
    out.push_back(run_batch(model, rescaled, nullptr, spec, cfg, opts));
  }
  return out;
}

}  // namespace mfa
