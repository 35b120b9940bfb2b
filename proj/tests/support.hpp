#pragma once

// Test-only generators and independent reference computations. Nothing here
// calls into the solver paths it is used to check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mfa/model.hpp"

namespace mfa::testing {

inline IsingModel random_ising(std::size_t n, double density, std::uint64_t seed,
                               double field_scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Coupling> c;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (keep(rng)) c.push_back({i, j, w(rng)});
    }
  }
  std::vector<double> h(n);
  for (auto& x : h) x = field_scale * w(rng);
  return IsingModel(SparseSymmetricMatrix(n, std::move(c)), std::move(h));
}

inline WeightedGraph random_graph(std::size_t n, double p, std::uint64_t seed, bool unit = true) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(p);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (keep(rng)) edges.push_back({i, j, unit ? 1.0 : w(rng)});
    }
  }
  return WeightedGraph(n, std::move(edges));
}

/// rows x cols torus with +-1 weights, the layout of the G11-G13 family.
inline WeightedGraph toroidal_pm1_grid(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution sign(0.5);
  std::vector<Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      edges.push_back({id(r, c), id(r, (c + 1) % cols), sign(rng) ? 1.0 : -1.0});
      edges.push_back({id(r, c), id((r + 1) % rows, c), sign(rng) ? 1.0 : -1.0});
    }
  }
  return WeightedGraph(rows * cols, std::move(edges));
}

inline std::vector<std::vector<double>> random_symmetric_dense(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) q[i][j] = q[j][i] = w(rng);
  }
  return q;
}

inline Eigen::MatrixXd dense(const SparseSymmetricMatrix& j) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(j.size()),
                                            static_cast<Eigen::Index>(j.size()));
  for (const auto& c : j.entries()) {
    m(static_cast<Eigen::Index>(c.i), static_cast<Eigen::Index>(c.j)) = c.w;
    m(static_cast<Eigen::Index>(c.j), static_cast<Eigen::Index>(c.i)) = c.w;
  }
  return m;
}

inline Eigen::VectorXd dense_eigenvalues(const SparseSymmetricMatrix& j) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense(j));
  return solver.eigenvalues();
}

/// -1/2 sum_ij J_ij S_i S_j - sum_i h_i S_i + offset as a literal dense double sum.
inline double brute_energy(const IsingModel& model, const std::vector<int>& s) {
  const auto jm = dense(model.couplings);
  double e = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      e -= 0.5 * jm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * s[i] * s[k];
    }
    e -= model.field[i] * s[i];
  }
  return e + model.offset;
}

inline std::vector<int> spins_of(std::uint64_t mask, std::size_t n) {
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1U ? 1 : -1;
  return s;
}

/// Minimum energy by plain enumeration of the dense formula.
inline double brute_ground_energy(const IsingModel& model) {
  double best = INFINITY;
  const std::size_t n = model.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    best = std::min(best, brute_energy(model, spins_of(mask, n)));
  }
  return best;
}

/// sum_{i<j} W_ij (1 - S_i S_j) / 2 over an explicit adjacency matrix.
inline double brute_cut(const WeightedGraph& g, const std::vector<int>& s) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges()) w[e.u][e.v] = w[e.v][e.u] = e.weight;
  double cut = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) cut += w[i][j] * (1.0 - s[i] * s[j]) / 2.0;
  }
  return cut;
}

inline std::vector<double> central_differences(const std::function<double(const std::vector<double>&)>& f,
                                               std::vector<double> x, double step) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + step;
    const double up = f(x);
    x[i] = keep - step;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

/// ||a - b||_2 / max(||b||_2, floor).
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b,
                             double floor = 1e-3) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    norm += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), floor);
}

inline IsingModel triangle(double j, std::vector<double> h = {0.0, 0.0, 0.0}) {
  return IsingModel(SparseSymmetricMatrix(3, {{0, 1, j}, {0, 2, j}, {1, 2, j}}), std::move(h));
}

inline IsingModel pair_model(double j, double h0, double h1) {
  return IsingModel(SparseSymmetricMatrix(2, {{0, 1, j}}), {h0, h1});
}

}  // namespace mfa::testing
