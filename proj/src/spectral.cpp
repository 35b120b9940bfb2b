#include "mfa/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mfa/rng.hpp"

namespace mfa {

namespace {

void normalize(std::span<double> v) {
  const double norm = std::sqrt(kernels::dot(v, v));
  for (auto& x : v) x /= norm;
}

}  // namespace

EigenEstimate dominant_eigenpair_psd(std::size_t n, const LinearOperator& op,
                                     const PowerIterationOptions& opts) {
  EigenEstimate est;
  if (n == 0) throw ModelError("eigenvalue of an empty matrix");
  std::vector<double> v(n), w(n);
  CounterRng rng(opts.seed);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  normalize(v);

  double previous = std::numeric_limits<double>::quiet_NaN();
  double previous_change = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    op(v, w);
    const double rq = kernels::dot(v, w);
    const double wnorm = std::sqrt(kernels::dot(w, w));
    if (wnorm == 0.0) {
      // v lies in the null space; for a PSD operator with a random start this
      // means the operator vanishes.
      est.value = 0.0;
      est.iterations = it;
      est.residual = 0.0;
      est.vector = v;
      return est;
    }
    if (it > 1) {
      const double change = std::abs(rq - previous);
      double err = change;
      if (std::isfinite(previous_change) && previous_change > 0.0) {
        const double rate = change / previous_change;
        if (rate < 1.0) err = change * rate / (1.0 - rate);
        else err = std::numeric_limits<double>::infinity();
      }
      const double scale = std::abs(rq);
      if (err <= opts.tol * scale || change == 0.0) {
        est.value = rq;
        est.iterations = it;
        est.residual = scale > 0.0 ? err / scale : 0.0;
        est.vector = v;
        return est;
      }
      previous_change = change;
    }
    previous = rq;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wnorm;
  }
  throw SpectralError("power iteration did not converge in " + std::to_string(opts.max_iter) +
                          " iterations",
                      opts.max_iter, previous);
}

EigenEstimate lambda_abs_max(const SparseSymmetricMatrix& j, const PowerIterationOptions& opts) {
  const std::size_t n = j.size();
  if (j.nonzeros() == 0) {
    EigenEstimate est;
    est.vector.assign(n, n ? 1.0 / std::sqrt(static_cast<double>(n)) : 0.0);
    if (n == 0) throw ModelError("eigenvalue of an empty matrix");
    return est;
  }
  std::vector<double> tmp(n);
  auto squared = [&](std::span<const double> x, std::span<double> y) {
    kernels::coupling_product(j, x, tmp, opts.exec);
    kernels::coupling_product(j, tmp, y, opts.exec);
  };
  auto est = dominant_eigenpair_psd(n, squared, opts);
  est.value = std::sqrt(std::max(0.0, est.value));
  return est;
}

EigenEstimate lambda_max(const SparseSymmetricMatrix& j, const PowerIterationOptions& opts) {
  const std::size_t n = j.size();
  const double shift = j.max_abs_row_sum();
  if (shift == 0.0) {
    if (n == 0) throw ModelError("eigenvalue of an empty matrix");
    EigenEstimate est;
    est.vector.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    return est;
  }
  auto shifted = [&](std::span<const double> x, std::span<double> y) {
    kernels::coupling_product(j, x, y, opts.exec);
    for (std::size_t i = 0; i < n; ++i) y[i] += shift * x[i];
  };
  auto est = dominant_eigenpair_psd(n, shifted, opts);
  est.residual = est.residual * std::abs(est.value);
  est.value -= shift;
  est.residual = std::abs(est.value) > 0.0 ? est.residual / std::abs(est.value) : est.residual;
  return est;
}

SpectralSummary spectral_summary(const SparseSymmetricMatrix& j, const PowerIterationOptions& opts) {
  const auto top = lambda_max(j, opts);
  const auto radius = lambda_abs_max(j, opts);
  SpectralSummary s;
  s.lambda_max = top.value;
  // Both come from separate iterations; keep the invariant radius >= lambda_max.
  s.lambda_abs_max = std::max(radius.value, std::abs(top.value));
  s.iterations = top.iterations + radius.iterations;
  s.residual = std::max(top.residual, radius.residual);
  return s;
}

IsingModel scale_model(const IsingModel& model, double factor) {
  std::vector<double> h(model.field);
  for (auto& x : h) x *= factor;
  return IsingModel(model.couplings.scaled(factor), std::move(h), model.offset * factor);
}

RescaledModel rescale_model(const IsingModel& model, const PowerIterationOptions& opts,
                            RescaleFallback fallback) {
  double scale = lambda_max(model.couplings, opts).value;
  if (!(scale > 0.0)) {
    if (fallback == RescaleFallback::none) {
      throw ModelError("cannot rescale: lambda_max(J) = " + std::to_string(scale) + " <= 0");
    }
    scale = lambda_abs_max(model.couplings, opts).value;
    if (!(scale > 0.0)) throw ModelError("cannot rescale: J is zero");
  }
  return {scale_model(model, 1.0 / scale), scale};
}

}  // namespace mfa
