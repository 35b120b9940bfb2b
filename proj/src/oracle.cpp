#include "mfa/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mfa {

namespace {

constexpr std::size_t kParallelHighBits = 6;

double tie_tolerance(double e) { return 1e-9 * std::max(1.0, std::abs(e)); }

struct Neighbor {
  std::uint32_t index;
  double weight;
};

using Adjacency = std::vector<std::vector<Neighbor>>;

Adjacency adjacency_of(const SparseSymmetricMatrix& j) {
  Adjacency adj(j.size());
  for (const auto& c : j.entries()) {
    adj[c.i].push_back({static_cast<std::uint32_t>(c.j), c.w});
    adj[c.j].push_back({static_cast<std::uint32_t>(c.i), c.w});
  }
  return adj;
}

Adjacency adjacency_of(const WeightedGraph& g) {
  Adjacency adj(g.vertex_count());
  for (const auto& e : g.edges()) {
    adj[e.u].push_back({static_cast<std::uint32_t>(e.v), e.weight});
    adj[e.v].push_back({static_cast<std::uint32_t>(e.u), e.weight});
  }
  return adj;
}

SpinConfig config_of(std::uint64_t mask, std::size_t n) {
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1U ? 1 : -1;
  return SpinConfig(std::move(s));
}

// Ising energy with incremental local fields under single flips.
class IsingWalker {
 public:
  IsingWalker(const IsingModel& model, const Adjacency& adj, std::uint64_t mask)
      : model_(model), adj_(adj), spins_(model.size()), local_(model.size(), 0.0), mask_(mask) {
    const std::size_t n = model.size();
    for (std::size_t i = 0; i < n; ++i) spins_[i] = (mask >> i) & 1U ? 1 : -1;
    energy_ = model.offset;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& nb : adj[i]) local_[i] += nb.weight * spins_[nb.index];
      energy_ -= 0.5 * spins_[i] * local_[i] + model.field[i] * spins_[i];
    }
  }

  void flip(std::size_t b) {
    const int s = spins_[b];
    energy_ += 2.0 * s * (local_[b] + model_.field[b]);
    for (const auto& nb : adj_[b]) local_[nb.index] -= 2.0 * s * nb.weight;
    spins_[b] = -s;
    mask_ ^= std::uint64_t{1} << b;
  }

  double value() const { return energy_; }
  std::uint64_t mask() const { return mask_; }

 private:
  const IsingModel& model_;
  const Adjacency& adj_;
  std::vector<int> spins_;
  std::vector<double> local_;
  double energy_ = 0.0;
  std::uint64_t mask_;
};

// Cut value under single vertex moves.
class CutWalker {
 public:
  CutWalker(const Adjacency& adj, std::uint64_t mask) : adj_(adj), spins_(adj.size()), mask_(mask) {
    for (std::size_t i = 0; i < adj.size(); ++i) spins_[i] = (mask >> i) & 1U ? 1 : -1;
    for (std::size_t i = 0; i < adj.size(); ++i) {
      for (const auto& nb : adj[i]) {
        if (nb.index > i && spins_[i] != spins_[nb.index]) cut_ += nb.weight;
      }
    }
  }

  void flip(std::size_t b) {
    for (const auto& nb : adj_[b]) cut_ += spins_[b] == spins_[nb.index] ? nb.weight : -nb.weight;
    spins_[b] = -spins_[b];
    mask_ ^= std::uint64_t{1} << b;
  }

  double value() const { return cut_; }
  std::uint64_t mask() const { return mask_; }

 private:
  const Adjacency& adj_;
  std::vector<int> spins_;
  double cut_ = 0.0;
  std::uint64_t mask_;
};

struct ExtremeAcc {
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
  std::size_t count = 0;

  // Minimization; maximization negates values on the way in.
  void add(double v, std::uint64_t m) {
    if (count == 0 || v < best - tie_tolerance(best)) {
      best = v;
      mask = m;
      count = 1;
    } else if (std::abs(v - best) <= tie_tolerance(best)) {
      ++count;
      mask = std::min(mask, m);
      best = std::min(best, v);
    }
  }

  void merge(const ExtremeAcc& other) {
    if (other.count == 0) return;
    if (count == 0 || other.best < best - tie_tolerance(best)) {
      *this = other;
    } else if (std::abs(other.best - best) <= tie_tolerance(best)) {
      count += other.count;
      mask = std::min(mask, other.mask);
      best = std::min(best, other.best);
    }
  }
};

struct LogSumExpAcc {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double a) {
    if (a > max) {
      sum = sum * std::exp(max - a) + 1.0;
      max = a;
    } else {
      sum += std::exp(a - max);
    }
  }

  void merge(const LogSumExpAcc& other) {
    if (other.sum == 0.0) return;
    if (other.max > max) {
      sum = sum * std::exp(max - other.max) + other.sum;
      max = other.max;
    } else {
      sum += other.sum * std::exp(other.max - max);
    }
  }

  double log() const { return max + std::log(sum); }
};

// Visits every assignment of the low `free_bits` spins in Gray-code order,
// high bits held at whatever the walker started with.
template <class Walker, class Visit>
void gray_walk(Walker& walker, std::size_t free_bits, Visit&& visit) {
  visit(walker.value(), walker.mask());
  const std::uint64_t total = std::uint64_t{1} << free_bits;
  for (std::uint64_t k = 1; k < total; ++k) {
    walker.flip(static_cast<std::size_t>(std::countr_zero(k)));
    visit(walker.value(), walker.mask());
  }
}

// 2^p chunks with the top p bits fixed, merged in chunk order. Both policies
// walk the same chunks, so incremental rounding is identical and the result
// does not depend on scheduling.
template <class Acc, class MakeWalker, class Visit>
Acc enumerate(std::size_t n, Exec exec, MakeWalker make, Visit visit) {
  if (n <= kParallelHighBits) {
    Acc acc;
    auto walker = make(std::uint64_t{0});
    gray_walk(walker, n, [&](double v, std::uint64_t m) { visit(acc, v, m); });
    return acc;
  }
  const std::size_t high = kParallelHighBits;
  const std::size_t low = n - high;
  const auto chunks = static_cast<std::ptrdiff_t>(std::uint64_t{1} << high);
  std::vector<Acc> partial(static_cast<std::size_t>(chunks));
  const auto run_chunk = [&](std::ptrdiff_t c) {
    auto& acc = partial[static_cast<std::size_t>(c)];
    auto walker = make(static_cast<std::uint64_t>(c) << low);
    gray_walk(walker, low, [&](double v, std::uint64_t m) { visit(acc, v, m); });
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (std::ptrdiff_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    for (std::ptrdiff_t c = 0; c < chunks; ++c) run_chunk(c);
  }
  Acc total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

void guard(std::size_t n, std::size_t limit, const char* what) {
  if (n > limit) {
    throw OracleSizeError(std::string(what) + ": N = " + std::to_string(n) +
                          " exceeds the exhaustive limit " + std::to_string(limit));
  }
  if (n == 0) throw ModelError(std::string(what) + ": empty problem");
}

}  // namespace

OracleResult exact_ground_state(const IsingModel& model, Exec exec) {
  const std::size_t n = model.size();
  guard(n, kMaxOracleSpins, "exact_ground_state");
  const auto adj = adjacency_of(model.couplings);
  const auto acc = enumerate<ExtremeAcc>(
      n, exec, [&](std::uint64_t mask) { return IsingWalker(model, adj, mask); },
      [](ExtremeAcc& a, double v, std::uint64_t m) { a.add(v, m); });
  // Report the optimum evaluated directly rather than the running sum.
  auto best = config_of(acc.mask, n);
  const double value = ising_energy(model, best);
  return {std::move(best), value, acc.count};
}

double exact_free_energy(const IsingModel& model, double temperature, Exec exec) {
  const std::size_t n = model.size();
  guard(n, kMaxFreeEnergySpins, "exact_free_energy");
  if (!(temperature > 0.0)) throw ModelError("temperature must be positive");
  const auto adj = adjacency_of(model.couplings);
  const auto acc = enumerate<LogSumExpAcc>(
      n, exec, [&](std::uint64_t mask) { return IsingWalker(model, adj, mask); },
      [temperature](LogSumExpAcc& a, double v, std::uint64_t) { a.add(-v / temperature); });
  return -temperature * acc.log();
}

OracleResult exact_max_cut(const WeightedGraph& graph, Exec exec) {
  const std::size_t n = graph.vertex_count();
  guard(n, kMaxOracleSpins, "exact_max_cut");
  const auto adj = adjacency_of(graph);
  const auto acc = enumerate<ExtremeAcc>(
      n, exec, [&](std::uint64_t mask) { return CutWalker(adj, mask); },
      [](ExtremeAcc& a, double v, std::uint64_t m) { a.add(-v, m); });
  auto best = config_of(acc.mask, n);
  const double value = cut_value(graph, best);
  return {std::move(best), value, acc.count};
}

}  // namespace mfa
