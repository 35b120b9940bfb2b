#include "mfa/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mfa/descent.hpp"
#include "mfa/kernels.hpp"

namespace mfa {

namespace {

constexpr double kBoundary = 1.0 - 1e-12;

void check_interior(std::span<const double> m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(std::abs(m[i]) < 1.0)) {
      throw ModelError("magnetization " + std::to_string(i) + " not strictly inside (-1, 1)");
    }
  }
}

void check_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ModelError("temperature must be positive");
}

double entropy_sum(std::span<const double> m) {
  double s = 0.0;
  for (double mi : m) {
    const double p = 0.5 * (1.0 + mi);
    const double q = 0.5 * (1.0 - mi);
    s += p * std::log(p) + q * std::log(q);
  }
  return s;
}

// Free energy in m with the box |m_i| <= kBoundary. The gradient handed to the
// descent is projected: components pushing outward at an active bound are zero.
class FreeEnergyProblem {
 public:
  FreeEnergyProblem(const IsingModel& model, double temperature)
      : model_(model), t_(temperature), field_(model.size()), m_(model.size()) {}

  double value(std::span<const double> m) {
    std::copy(m.begin(), m.end(), m_.begin());
    kernels::coupling_product(model_.couplings, m, field_);
    double energy = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      energy += -0.5 * m[i] * field_[i] - model_.field[i] * m[i];
    }
    return energy + t_ * entropy_sum(m);
  }

  void gradient_at_last(std::span<double> g) const {
    for (std::size_t i = 0; i < m_.size(); ++i) {
      g[i] = -field_[i] - model_.field[i] + t_ * std::atanh(m_[i]);
      if (m_[i] >= kBoundary && g[i] < 0.0) g[i] = 0.0;
      if (m_[i] <= -kBoundary && g[i] > 0.0) g[i] = 0.0;
    }
  }

  // Metric 1 - m_i^2 evens out the T / (1 - m_i^2) curvature of saturating spins.
  void precondition(std::span<double> g) const {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= 1.0 - m_[i] * m_[i];
  }

  static void project(std::span<double> m) {
    for (auto& v : m) v = std::clamp(v, -kBoundary, kBoundary);
  }

 private:
  const IsingModel& model_;
  double t_;
  std::vector<double> field_;
  std::vector<double> m_;
};

}  // namespace

void ClassicalAnnealConfig::validate() const {
  if (!(t_end > 0.0)) throw ModelError("T_end must be positive");
  if (!(t_start > t_end)) throw ModelError("T_start must exceed T_end");
  if (!(dt > 0.0)) throw ModelError("dT must be positive");
  if (!(inner_tol > 0.0)) throw ModelError("inner tolerance must be positive");
  if (inner_max_iter == 0) throw ModelError("inner iteration limit must be positive");
}

ClassicalAnnealConfig default_classical_config(const IsingModel& model, ClassicalMode mode,
                                               const PowerIterationOptions& spectral) {
  const auto summary = spectral_summary(model.couplings, spectral);
  ClassicalAnnealConfig cfg;
  cfg.mode = mode;
  const double t_star = summary.lambda_abs_max > 0.0 ? summary.lambda_abs_max : 1.0;
  const double t_c = summary.lambda_max > 0.0 ? summary.lambda_max : t_star;
  cfg.t_start = 1.5 * t_star;
  cfg.t_end = 1e-3 * t_c;
  cfg.dt = cfg.t_start / 1000.0;
  return cfg;
}

double mf_free_energy(const IsingModel& model, std::span<const double> m, double temperature) {
  if (m.size() != model.size()) throw ModelError("mf_free_energy: dimension mismatch");
  check_interior(m);
  check_temperature(temperature);
  FreeEnergyProblem problem(model, temperature);
  return problem.value(m);
}

std::vector<double> mf_gradient(const IsingModel& model, std::span<const double> m,
                                double temperature) {
  if (m.size() != model.size()) throw ModelError("mf_gradient: dimension mismatch");
  check_interior(m);
  check_temperature(temperature);
  std::vector<double> field(m.size()), g(m.size());
  kernels::coupling_product(model.couplings, m, field);
  for (std::size_t i = 0; i < m.size(); ++i) {
    g[i] = -field[i] - model.field[i] + 0.5 * temperature * std::log((1.0 + m[i]) / (1.0 - m[i]));
  }
  return g;
}

std::vector<double> self_consistent_step(const IsingModel& model, std::span<const double> m,
                                         double temperature) {
  if (m.size() != model.size()) throw ModelError("self_consistent_step: dimension mismatch");
  check_temperature(temperature);
  std::vector<double> next(m.size());
  kernels::coupling_product(model.couplings, m, next);
  for (std::size_t i = 0; i < m.size(); ++i) {
    next[i] = std::tanh((model.field[i] + next[i]) / temperature);
  }
  return next;
}

double iteration_stability(const IsingModel& model, std::span<const double> m, double temperature,
                           const PowerIterationOptions& opts) {
  if (m.size() != model.size()) throw ModelError("iteration_stability: dimension mismatch");
  check_interior(m);
  check_temperature(temperature);
  const std::size_t n = m.size();
  if (model.couplings.nonzeros() == 0) return 0.0;
  // D J is similar to the symmetric D^1/2 J D^1/2; iterate its square.
  std::vector<double> root(n), a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(1.0 - m[i] * m[i]);
  auto sym = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) a[i] = root[i] * x[i];
    kernels::coupling_product(model.couplings, a, b, opts.exec);
    for (std::size_t i = 0; i < n; ++i) y[i] = root[i] * b[i];
  };
  auto squared = [&](std::span<const double> x, std::span<double> y) {
    std::vector<double> tmp(n);
    sym(x, tmp);
    sym(tmp, y);
  };
  return std::sqrt(std::max(0.0, dominant_eigenpair_psd(n, squared, opts).value)) / temperature;
}

double mf_hessian_quotient(const IsingModel& model, std::span<const double> m, double temperature,
                           std::span<const double> probe) {
  check_interior(m);
  const std::size_t n = m.size();
  std::vector<double> jv(n);
  kernels::coupling_product(model.couplings, probe, jv);
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += -probe[i] * jv[i] + temperature * probe[i] * probe[i] / (1.0 - m[i] * m[i]);
  }
  return num / kernels::dot(probe, probe);
}

bool relax_free_energy(const IsingModel& model, std::vector<double>& m, double temperature,
                       double tol, std::size_t max_iter) {
  if (m.size() != model.size()) throw ModelError("relax_free_energy: dimension mismatch");
  check_temperature(temperature);
  FreeEnergyProblem::project(m);
  FreeEnergyProblem problem(model, temperature);
  DescentOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  double step = 1.0;
  return steepest_descent(problem, m, step, opts).converged;
}

namespace {

// Returns false when the period-2 signature persisted for the whole window.
bool relax_self_consistent(const IsingModel& model, std::vector<double>& m, double t,
                           const ClassicalAnnealConfig& cfg, ClassicalAnnealResult& out,
                           bool& converged) {
  const std::size_t n = m.size();
  std::vector<double> older = m;
  std::vector<double> next(n);
  std::size_t streak = 0;
  double last_step = -1.0;
  converged = false;
  for (std::size_t it = 0; it < cfg.inner_max_iter; ++it) {
    kernels::coupling_product(model.couplings, m, next);
    double step = 0.0;
    double span2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = std::tanh((model.field[i] + next[i]) / t);
      step = std::max(step, std::abs(next[i] - m[i]));
      span2 = std::max(span2, std::abs(next[i] - older[i]));
    }
    ++out.inner_iterations;
    if (step <= cfg.inner_tol) {
      m.swap(next);
      converged = true;
      return true;
    }
    // m^{k+2} returns to m^k while m^{k+1} stays away: a two-cycle.
    if (last_step > cfg.inner_tol && span2 < 1e-3 * last_step) {
      if (++streak >= cfg.oscillation_window) {
        m.swap(next);
        return false;
      }
    } else {
      streak = 0;
    }
    last_step = step;
    older = m;
    m.swap(next);
  }
  return true;
}

}  // namespace

ClassicalAnnealResult classical_anneal(const IsingModel& model, const ClassicalAnnealConfig& cfg) {
  cfg.validate();
  const std::size_t n = model.size();
  ClassicalAnnealResult out;
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = std::clamp(std::tanh(model.field[i] / cfg.t_start), -kBoundary, kBoundary);
  }

  DescentOptions descent;
  descent.tol = cfg.inner_tol;
  descent.max_iter = cfg.inner_max_iter;
  double step = 1.0;

  for (std::size_t k = 0;; ++k) {
    double t = cfg.t_start - static_cast<double>(k) * cfg.dt;
    const bool last = t <= cfg.t_end;
    if (last) t = cfg.t_end;
    out.final_temperature = t;
    ++out.temperature_steps;

    if (cfg.mode == ClassicalMode::self_consistent) {
      bool converged = false;
      if (!relax_self_consistent(model, m, t, cfg, out, converged)) {
        out.breakdown = true;
        out.breakdown_temperature = t;
        break;
      }
      if (!converged) ++out.nonconverged_steps;
    } else {
      FreeEnergyProblem problem(model, t);
      const auto report = steepest_descent(problem, m, step, descent);
      out.inner_iterations += report.iterations;
      if (!report.converged) ++out.nonconverged_steps;
    }
    if (last) break;
  }
  // Keep the state strictly interior so callers can evaluate F on it.
  for (auto& v : m) v = std::clamp(v, -kBoundary, kBoundary);
  out.spins = round_magnetization(m);
  out.m = std::move(m);
  return out;
}

std::vector<MixingTermRow> mixing_term_table(double t_over_delta, std::size_t n_points,
                                             double eps) {
  if (n_points < 2) throw ModelError("mixing table needs at least two points");
  if (!(eps > 0.0 && eps < 1.0)) throw ModelError("mixing table eps must be in (0, 1)");
  if (!(t_over_delta > 0.0)) throw ModelError("T/Delta must be positive");
  const double reach = 1.0 - eps;
  const double denom = static_cast<double>(n_points - 1);
  std::vector<MixingTermRow> rows(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double m = reach * (2.0 * static_cast<double>(k) - denom) / denom;
    rows[k].m = m;
    rows[k].entropy_term = 0.5 * t_over_delta * std::log((1.0 + m) / (1.0 - m));
    rows[k].transverse_term = m / std::sqrt(1.0 - m * m);
  }
  return rows;
}

}  // namespace mfa
