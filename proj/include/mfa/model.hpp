#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfa {

/// Raised for structurally invalid problems: bad indices, asymmetry,
/// self-loops, duplicate pairs, dimension mismatches.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Coupling {
  std::size_t i = 0;
  std::size_t j = 0;
  double w = 0.0;
};

/// Symmetric matrix with zero diagonal. Each off-diagonal pair is stored once
/// as (i, j, w) with i < j and stands for both J_ij and J_ji. A CSR mirror
/// holding both directions is built for row-wise products.
class SparseSymmetricMatrix {
 public:
  SparseSymmetricMatrix() = default;
  explicit SparseSymmetricMatrix(std::size_t n) : SparseSymmetricMatrix(n, {}) {}
  SparseSymmetricMatrix(std::size_t n, std::vector<Coupling> entries);

  std::size_t size() const { return n_; }
  std::span<const Coupling> entries() const { return entries_; }
  std::size_t nonzeros() const { return cols_.size(); }

  // CSR view, both triangles.
  std::span<const std::size_t> row_offsets() const { return offsets_; }
  std::span<const std::uint32_t> columns() const { return cols_; }
  std::span<const double> values() const { return vals_; }

  double at(std::size_t i, std::size_t j) const;

  /// max_i sum_j |J_ij| (Gershgorin radius; the diagonal is zero).
  double max_abs_row_sum() const;

  SparseSymmetricMatrix scaled(double factor) const;

 private:
  std::size_t n_ = 0;
  std::vector<Coupling> entries_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

/// Energy  -1/2 sum_ij J_ij S_i S_j - sum_i h_i S_i + offset.
struct IsingModel {
  SparseSymmetricMatrix couplings;
  std::vector<double> field;
  double offset = 0.0;

  IsingModel() = default;
  IsingModel(SparseSymmetricMatrix j, std::vector<double> h, double offset = 0.0);

  std::size_t size() const { return couplings.size(); }
};

struct QuboEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double q = 0.0;
};

/// Symmetric QUBO matrix. An off-diagonal entry (i, j, q) sets Q_ij = Q_ji = q.
class QuboModel {
 public:
  QuboModel() = default;
  QuboModel(std::size_t n, std::vector<QuboEntry> entries);
  /// Throws ModelError when the matrix is not square or not symmetric.
  static QuboModel from_dense(const std::vector<std::vector<double>>& q);

  std::size_t size() const { return n_; }
  /// Canonical entries, i <= j.
  std::span<const QuboEntry> entries() const { return entries_; }

 private:
  std::size_t n_ = 0;
  std::vector<QuboEntry> entries_;
};

class SpinConfig {
 public:
  SpinConfig() = default;
  /// Throws ModelError unless every component is exactly +1 or -1.
  explicit SpinConfig(std::vector<int> spins);

  std::size_t size() const { return spins_.size(); }
  int operator[](std::size_t i) const { return spins_[i]; }
  std::span<const int> values() const { return spins_; }

  SpinConfig flipped() const;
  /// FNV-1a over the spin signs; cheap identity for trial records.
  std::uint64_t digest() const;

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  std::vector<int> spins_;
};

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

/// Undirected weighted graph; each unordered pair at most once, no self-loops.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(std::size_t n_vertices, std::vector<Edge> edges);

  std::size_t vertex_count() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }
  double total_weight() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

double ising_energy(const IsingModel& model, const SpinConfig& spins);
double qubo_value(const QuboModel& model, std::span<const int> x);

/// J_ij = -Q_ij / 2, h_i = -1/2 sum_j Q_ij, and an offset such that the
/// Ising energy equals the QUBO value exactly under x_i = (1 + S_i) / 2.
IsingModel qubo_to_ising(const QuboModel& model);

/// J_ij = -W_ij, h = 0, offset = -sum W. With that offset the Ising energy is
/// exactly -2 times the cut value, see cut_from_energy().
IsingModel maxcut_to_ising(const WeightedGraph& graph);
double cut_from_energy(double maxcut_ising_energy);

double cut_value(const WeightedGraph& graph, const SpinConfig& spins);

/// S_i = +1 when m_i >= 0, else -1.
SpinConfig round_magnetization(std::span<const double> m);

std::vector<int> spins_to_binary(const SpinConfig& spins);

}  // namespace mfa
