#include "mfa/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mfa/descent.hpp"
#include "mfa/kernels.hpp"

namespace mfa {

namespace {

void check_schedule_point(double s, double delta) {
  if (!(s >= 0.0 && s <= 1.0)) throw ModelError("schedule value s must lie in [0, 1]");
  if (!(delta > 0.0)) throw ModelError("transverse strength must be positive");
}

// energy_theta with cos/sin and the local field cached for the gradient.
class ThetaProblem {
 public:
  ThetaProblem(const IsingModel& model, double s, double delta)
      : model_(model), s_(s), delta_(delta), cos_(model.size()), sin_(model.size()),
        field_(model.size()) {}

  void reset(double s) { s_ = s; }

  double value(std::span<const double> theta) {
    const std::size_t n = theta.size();
    for (std::size_t i = 0; i < n; ++i) {
      cos_[i] = std::cos(theta[i]);
      sin_[i] = std::sin(theta[i]);
    }
    kernels::coupling_product(model_.couplings, cos_, field_);
    double ising = 0.0;
    double transverse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ising += cos_[i] * (-0.5 * field_[i] - model_.field[i]);
      transverse += sin_[i];
    }
    return s_ * ising - (1.0 - s_) * delta_ * transverse;
  }

  void gradient_at_last(std::span<double> g) const {
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = s_ * (field_[i] + model_.field[i]) * sin_[i] - (1.0 - s_) * delta_ * cos_[i];
    }
  }

  // Inverse diagonal of the theta Hessian, floored where the diagonal is small
  // or negative. Spins pinned near the poles and frustrated spins near the
  // equator differ in curvature by up to 1 / (1 - s); this evens them out.
  void precondition(std::span<double> g) const {
    const double floor = 1e-3 * (s_ + (1.0 - s_) * delta_);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double diag = s_ * (field_[i] + model_.field[i]) * cos_[i] + (1.0 - s_) * delta_ * sin_[i];
      g[i] /= std::max(diag, floor);
    }
  }

  static void project(std::span<double> theta) { reflect_theta(theta); }

 private:
  const IsingModel& model_;
  double s_;
  double delta_;
  std::vector<double> cos_, sin_, field_;
};

}  // namespace

void QuantumAnnealConfig::validate() const {
  if (!(delta > 0.0)) throw ModelError("delta must be positive");
  if (!(s_start >= 0.0 && s_start < s_end && s_end <= 1.0)) {
    throw ModelError("schedule must satisfy 0 <= s_start < s_end <= 1");
  }
  if (!(ds > 0.0)) throw ModelError("ds must be positive");
  if (!(inner_tol > 0.0)) throw ModelError("inner tolerance must be positive");
  if (inner_max_iter == 0) throw ModelError("inner iteration limit must be positive");
}

double energy_mz(const IsingModel& model, std::span<const double> mz, double s, double delta) {
  if (mz.size() != model.size()) throw ModelError("energy_mz: dimension mismatch");
  check_schedule_point(s, delta);
  std::vector<double> field(mz.size());
  kernels::coupling_product(model.couplings, mz, field);
  double ising = 0.0;
  double transverse = 0.0;
  for (std::size_t i = 0; i < mz.size(); ++i) {
    if (!(std::abs(mz[i]) <= 1.0)) throw ModelError("|mz| must not exceed 1");
    ising += mz[i] * (-0.5 * field[i] - model.field[i]);
    transverse += std::sqrt(1.0 - mz[i] * mz[i]);
  }
  return s * ising - (1.0 - s) * delta * transverse;
}

double energy_theta(const IsingModel& model, std::span<const double> theta, double s, double delta) {
  if (theta.size() != model.size()) throw ModelError("energy_theta: dimension mismatch");
  check_schedule_point(s, delta);
  ThetaProblem problem(model, s, delta);
  return problem.value(theta);
}

std::vector<double> grad_theta(const IsingModel& model, std::span<const double> theta, double s,
                               double delta) {
  if (theta.size() != model.size()) throw ModelError("grad_theta: dimension mismatch");
  check_schedule_point(s, delta);
  ThetaProblem problem(model, s, delta);
  problem.value(theta);
  std::vector<double> g(theta.size());
  problem.gradient_at_last(g);
  return g;
}

double quantum_hessian_quotient(const IsingModel& model, std::span<const double> mz, double s,
                                double delta, std::span<const double> probe) {
  const std::size_t n = mz.size();
  std::vector<double> jv(n);
  kernels::coupling_product(model.couplings, probe, jv);
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rest = 1.0 - mz[i] * mz[i];
    if (!(rest > 0.0)) throw ModelError("Hessian undefined at |mz| = 1");
    num += -s * probe[i] * jv[i] + (1.0 - s) * delta * probe[i] * probe[i] / (rest * std::sqrt(rest));
  }
  return num / kernels::dot(probe, probe);
}

double s_threshold(double lambda_max, double delta) {
  if (!(delta > 0.0)) throw ModelError("delta must be positive");
  if (!(lambda_max + delta > 0.0)) throw ModelError("lambda_max + delta must be positive");
  return delta / (lambda_max + delta);
}

double s_threshold(const IsingModel& model, double delta, const PowerIterationOptions& opts) {
  return s_threshold(lambda_max(model.couplings, opts).value, delta);
}

void reflect_theta(std::span<double> theta) {
  constexpr double pi = std::numbers::pi;
  for (auto& t : theta) {
    if (t < 0.0 || t > pi) {
      t = std::fmod(t, 2.0 * pi);
      if (t < 0.0) t += 2.0 * pi;
      if (t > pi) t = 2.0 * pi - t;
    }
  }
}

QuantumAnnealResult quantum_anneal_scaled(const IsingModel& scaled, const QuantumAnnealConfig& cfg) {
  cfg.validate();
  const std::size_t n = scaled.size();
  QuantumAnnealResult out;

  // Never start past the bifurcation of the trivial solution.
  const double s_first = std::clamp(std::min(cfg.s_start, s_threshold(1.0, cfg.delta) - 2.0 * cfg.ds),
                                    0.0, cfg.s_end);
  out.s_first = s_first;

  std::vector<double> theta(n, std::numbers::pi / 2.0);
  ThetaProblem problem(scaled, s_first, cfg.delta);
  DescentOptions descent;
  descent.tol = cfg.inner_tol;
  descent.max_iter = cfg.inner_max_iter;
  double step = 1.0;

  for (std::size_t k = 0;; ++k) {
    double s = s_first + static_cast<double>(k) * cfg.ds;
    const bool last = s >= cfg.s_end - 1e-12 * cfg.ds;
    if (last) s = cfg.s_end;
    problem.reset(s);
    const auto report = steepest_descent(problem, theta, step, descent);
    ++out.s_steps;
    out.inner_iterations += report.iterations;
    if (!std::isfinite(report.energy)) {
      throw std::runtime_error("non-finite energy at s = " + std::to_string(s));
    }
    if (!report.converged) {
      ++out.nonconverged_steps;
      if (!out.first_nonconverged_s) out.first_nonconverged_s = s;
    }
    if (last) break;
  }

  out.mz.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.mz[i] = std::cos(theta[i]);
  out.spins = round_magnetization(out.mz);
  out.energy = ising_energy(scaled, out.spins);
  return out;
}

QuantumAnnealResult quantum_anneal(const IsingModel& model, const QuantumAnnealConfig& cfg,
                                   std::uint64_t seed) {
  PowerIterationOptions opts;
  opts.seed = seed;
  const auto rescaled = rescale_model(model, opts, RescaleFallback::spectral_radius);
  auto result = quantum_anneal_scaled(rescaled.model, cfg);
  result.scale = rescaled.scale;
  result.energy = ising_energy(model, result.spins);
  return result;
}

}  // namespace mfa
