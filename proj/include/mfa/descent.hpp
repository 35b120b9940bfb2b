#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "mfa/kernels.hpp"

namespace mfa {

struct DescentOptions {
  double tol = 1e-8;  // on the infinity norm of the gradient
  std::size_t max_iter = 1000;
  double armijo = 1e-4;
  double max_step = 64.0;
  std::size_t max_halvings = 60;
};

struct DescentReport {
  std::size_t iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  double energy = 0.0;
};

/// value(x) evaluates the objective and caches whatever gradient_at_last()
/// needs; project(x) maps a trial point back into the feasible set.
template <class P>
concept DescentProblem = requires(P p, std::span<const double> x, std::span<double> out) {
  { p.value(x) } -> std::convertible_to<double>;
  p.gradient_at_last(out);
  p.project(out);
};

/// Optional diagonal metric: the search direction becomes -P g.
template <class P>
concept PreconditionedProblem = requires(const P p, std::span<double> g) { p.precondition(g); };

/// Steepest descent with halving backtracking under the Armijo condition.
/// `step` carries the next trial step length between calls (warm start). After
/// an accepted step it is the Barzilai-Borwein length of the secant pair, or,
/// without positive curvature along it, the minimizer of the quadratic through
/// the two energies and the slope (at most twice the accepted step). Energies
/// never increase beyond rounding: once the predicted decrease drops below the
/// resolution of the energy, a step is accepted when it shrinks |g|_2 instead.
template <DescentProblem P>
DescentReport steepest_descent(P& problem, std::vector<double>& x, double& step,
                               const DescentOptions& opts,
                               std::vector<double>* energy_trace = nullptr) {
  const std::size_t n = x.size();
  std::vector<double> g(n), dir(n), trial(n), trial_g(n);
  DescentReport report;
  double energy = problem.value(x);
  problem.gradient_at_last(g);
  if (energy_trace) energy_trace->push_back(energy);
  double gnorm = kernels::norm_inf(g);
  for (;;) {
    if (gnorm <= opts.tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= opts.max_iter) break;
    dir = g;
    if constexpr (PreconditionedProblem<P>) problem.precondition(dir);
    double alpha = step;
    bool accepted = false;
    double next_step = 2.0 * alpha;
    for (std::size_t h = 0; h <= opts.max_halvings; ++h, alpha *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - alpha * dir[i];
      problem.project(trial);
      double predicted = 0.0;
      for (std::size_t i = 0; i < n; ++i) predicted += g[i] * (trial[i] - x[i]);
      if (!(predicted < 0.0)) continue;
      const double candidate = problem.value(trial);
      const double resolution =
          16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(energy));
      if (-predicted > resolution) {
        accepted = candidate <= energy + opts.armijo * predicted;
        const double curvature = candidate - energy - predicted;
        next_step = curvature > 0.0 ? std::min(2.0, -predicted / (2.0 * curvature)) * alpha
                                    : 2.0 * alpha;
      } else if (candidate <= energy + resolution) {
        // Energy differences are rounding noise here; the gradient is not.
        // Near a minimum |g|_2 shrinks for small enough steps.
        problem.gradient_at_last(trial_g);
        accepted = kernels::dot(trial_g, trial_g) < kernels::dot(g, g);
        next_step = alpha;
      }
      if (accepted) {
        energy = candidate;
        break;
      }
    }
    if (!accepted) break;  // no representable descent step left
    // Barzilai-Borwein length from the secant pair, in the preconditioned metric.
    double gd = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) gd += g[i] * dir[i];
    x.swap(trial);
    trial_g = g;
    problem.gradient_at_last(g);
    for (std::size_t i = 0; i < n; ++i) sy += (x[i] - trial[i]) * (g[i] - trial_g[i]);
    if (sy > 0.0 && gd > 0.0) next_step = alpha * alpha * gd / sy;
    gnorm = kernels::norm_inf(g);
    if (energy_trace) energy_trace->push_back(energy);
    ++report.iterations;
    step = std::min(next_step, opts.max_step);
  }
  report.gradient_norm = gnorm;
  report.energy = energy;
  return report;
}

}  // namespace mfa
