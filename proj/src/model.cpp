#include "mfa/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace mfa {

namespace {

std::string pair_str(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ModelError(std::string(what) + ": dimension mismatch (" + std::to_string(got) +
                     " vs " + std::to_string(want) + ")");
  }
}

}  // namespace

SparseSymmetricMatrix::SparseSymmetricMatrix(std::size_t n, std::vector<Coupling> entries)
    : n_(n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw ModelError("matrix dimension too large");
  }
  for (auto& e : entries) {
    if (e.i >= n || e.j >= n) {
      throw ModelError("coupling index out of range " + pair_str(e.i, e.j));
    }
    if (e.i == e.j) throw ModelError("diagonal coupling " + pair_str(e.i, e.j));
    if (!std::isfinite(e.w)) throw ModelError("non-finite coupling " + pair_str(e.i, e.j));
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(entries.begin(), entries.end(), [](const Coupling& a, const Coupling& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].i == entries[k - 1].i && entries[k].j == entries[k - 1].j) {
      throw ModelError("duplicate coupling " + pair_str(entries[k].i, entries[k].j));
    }
  }
  entries_ = std::move(entries);

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : entries_) {
    ++degree[e.i];
    ++degree[e.j];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  cols_.resize(offsets_[n]);
  vals_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Entries are sorted by (i, j); pushing lower-triangle mirrors first keeps
  // every row's columns ascending.
  for (const auto& e : entries_) {
    cols_[fill[e.j]] = static_cast<std::uint32_t>(e.i);
    vals_[fill[e.j]++] = e.w;
  }
  for (const auto& e : entries_) {
    cols_[fill[e.i]] = static_cast<std::uint32_t>(e.j);
    vals_[fill[e.i]++] = e.w;
  }
}

double SparseSymmetricMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw ModelError("index out of range " + pair_str(i, j));
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
  if (it == last || *it != j) return 0.0;
  return vals_[static_cast<std::size_t>(it - cols_.begin())];
}

double SparseSymmetricMatrix::max_abs_row_sum() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) sum += std::abs(vals_[k]);
    best = std::max(best, sum);
  }
  return best;
}

SparseSymmetricMatrix SparseSymmetricMatrix::scaled(double factor) const {
  auto copy = *this;
  for (auto& e : copy.entries_) e.w *= factor;
  for (auto& v : copy.vals_) v *= factor;
  return copy;
}

IsingModel::IsingModel(SparseSymmetricMatrix j, std::vector<double> h, double off)
    : couplings(std::move(j)), field(std::move(h)), offset(off) {
  require_size(field.size(), couplings.size(), "IsingModel field");
}

QuboModel::QuboModel(std::size_t n, std::vector<QuboEntry> entries) : n_(n) {
  std::map<std::pair<std::size_t, std::size_t>, double> canon;
  for (auto e : entries) {
    if (e.i >= n || e.j >= n) throw ModelError("QUBO index out of range " + pair_str(e.i, e.j));
    if (!std::isfinite(e.q)) throw ModelError("non-finite QUBO entry " + pair_str(e.i, e.j));
    if (e.i > e.j) std::swap(e.i, e.j);
    auto [it, inserted] = canon.emplace(std::pair(e.i, e.j), e.q);
    if (!inserted && it->second != e.q) {
      throw ModelError("asymmetric QUBO entry " + pair_str(e.i, e.j));
    }
  }
  entries_.reserve(canon.size());
  for (const auto& [key, q] : canon) {
    if (q != 0.0) entries_.push_back({key.first, key.second, q});
  }
}

QuboModel QuboModel::from_dense(const std::vector<std::vector<double>>& q) {
  const std::size_t n = q.size();
  std::vector<QuboEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i].size() != n) throw ModelError("QUBO matrix is not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (q[i][j] != q[j][i]) throw ModelError("asymmetric QUBO entry " + pair_str(i, j));
      if (q[i][j] != 0.0) entries.push_back({i, j, q[i][j]});
    }
  }
  return QuboModel(n, std::move(entries));
}

SpinConfig::SpinConfig(std::vector<int> spins) : spins_(std::move(spins)) {
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] != 1 && spins_[i] != -1) {
      throw ModelError("spin " + std::to_string(i) + " is not +1/-1");
    }
  }
}

SpinConfig SpinConfig::flipped() const {
  auto copy = *this;
  for (auto& s : copy.spins_) s = -s;
  return copy;
}

std::uint64_t SpinConfig::digest() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (int s : spins_) {
    hash ^= (s > 0 ? 1u : 0u);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

WeightedGraph::WeightedGraph(std::size_t n_vertices, std::vector<Edge> edges)
    : n_(n_vertices), edges_(std::move(edges)) {
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  keys.reserve(edges_.size());
  for (const auto& e : edges_) {
    if (e.u >= n_ || e.v >= n_) throw ModelError("edge index out of range " + pair_str(e.u, e.v));
    if (e.u == e.v) throw ModelError("self-loop at vertex " + std::to_string(e.u));
    if (!std::isfinite(e.weight)) throw ModelError("non-finite edge weight " + pair_str(e.u, e.v));
    keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(keys.begin(), keys.end());
  const auto dup = std::adjacent_find(keys.begin(), keys.end());
  if (dup != keys.end()) throw ModelError("duplicate edge " + pair_str(dup->first, dup->second));
}

double WeightedGraph::total_weight() const {
  double sum = 0.0;
  for (const auto& e : edges_) sum += e.weight;
  return sum;
}

double ising_energy(const IsingModel& model, const SpinConfig& spins) {
  require_size(spins.size(), model.size(), "ising_energy");
  double pair = 0.0;
  for (const auto& c : model.couplings.entries()) pair += c.w * spins[c.i] * spins[c.j];
  double field = 0.0;
  for (std::size_t i = 0; i < spins.size(); ++i) field += model.field[i] * spins[i];
  // Each stored pair appears twice in the full double sum.
  return -pair - field + model.offset;
}

double qubo_value(const QuboModel& model, std::span<const int> x) {
  require_size(x.size(), model.size(), "qubo_value");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0 && x[i] != 1) throw ModelError("QUBO variable " + std::to_string(i) + " not binary");
  }
  double value = 0.0;
  for (const auto& e : model.entries()) {
    const double mult = e.i == e.j ? 1.0 : 2.0;
    value += mult * e.q * x[e.i] * x[e.j];
  }
  return value;
}

IsingModel qubo_to_ising(const QuboModel& model) {
  const std::size_t n = model.size();
  std::vector<Coupling> couplings;
  std::vector<double> h(n, 0.0);
  double total = 0.0;
  double diagonal = 0.0;
  for (const auto& e : model.entries()) {
    if (e.i == e.j) {
      h[e.i] -= 0.5 * e.q;
      total += e.q;
      diagonal += e.q;
    } else {
      couplings.push_back({e.i, e.j, -0.5 * e.q});
      h[e.i] -= 0.5 * e.q;
      h[e.j] -= 0.5 * e.q;
      total += 2.0 * e.q;
    }
  }
  // q = 1/4 sum_ij Q_ij (1 + S_i)(1 + S_j); the S_i^2 = 1 diagonal terms and
  // the constant quarter of the full sum make up the offset.
  return IsingModel(SparseSymmetricMatrix(n, std::move(couplings)), std::move(h),
                    0.25 * (total + diagonal));
}

IsingModel maxcut_to_ising(const WeightedGraph& graph) {
  std::vector<Coupling> couplings;
  couplings.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) couplings.push_back({e.u, e.v, -e.weight});
  return IsingModel(SparseSymmetricMatrix(graph.vertex_count(), std::move(couplings)),
                    std::vector<double>(graph.vertex_count(), 0.0), -graph.total_weight());
}

double cut_from_energy(double maxcut_ising_energy) { return -0.5 * maxcut_ising_energy; }

double cut_value(const WeightedGraph& graph, const SpinConfig& spins) {
  require_size(spins.size(), graph.vertex_count(), "cut_value");
  double cut = 0.0;
  for (const auto& e : graph.edges()) {
    if (spins[e.u] != spins[e.v]) cut += e.weight;
  }
  return cut;
}

SpinConfig round_magnetization(std::span<const double> m) {
  std::vector<int> spins(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) spins[i] = m[i] >= 0.0 ? 1 : -1;
  return SpinConfig(std::move(spins));
}

std::vector<int> spins_to_binary(const SpinConfig& spins) {
  std::vector<int> x(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i) x[i] = (1 + spins[i]) / 2;
  return x;
}

}  // namespace mfa
