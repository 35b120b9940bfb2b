#include <cmath>
#include <limits>

#include "doctest.h"
#include "mfa/ensemble.hpp"
#include "mfa/oracle.hpp"
#include "mfa/rng.hpp"
#include "support.hpp"

using namespace mfa;

namespace {

QuantumAnnealConfig quick() {
  QuantumAnnealConfig cfg;
  cfg.ds = 1e-2;
  return cfg;
}

void check_same(const TrialBatchResult& a, const TrialBatchResult& b) {
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t k = 0; k < a.trials.size(); ++k) {
    CHECK(a.trials[k].seed == b.trials[k].seed);
    CHECK(a.trials[k].value == b.trials[k].value);
    CHECK(a.trials[k].digest == b.trials[k].digest);
  }
  CHECK(a.mean == b.mean);
  CHECK(a.std == b.std);
}

}  // namespace

TEST_SUITE("ensemble") {
  TEST_CASE("substreams are distinct and reproducible") {
    CHECK(substream_seed(1, 0) != substream_seed(1, 1));
    CHECK(substream_seed(1, 0) != substream_seed(2, 0));
    CHECK(substream_seed(9, 4) == substream_seed(9, 4));
    CounterRng rng(substream_seed(3, 7));
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.uniform(-0.5, 0.5);
      CHECK(u >= -0.5);
      CHECK(u < 0.5);
    }
  }

  TEST_CASE("results do not depend on the execution policy or thread count") {
    const auto g = testing::random_graph(24, 0.2, 3);
    NoiseSpec noise{0.2, 11, 12};
    EnsembleOptions serial;
    serial.exec = Exec::serial;
    const auto reference = run_trials(g, noise, quick(), serial);
    for (int threads : {1, 2, 4}) {
      set_thread_count(threads);
      check_same(reference, run_trials(g, noise, quick()));
    }
    set_thread_count(0);
    check_same(reference, run_trials(g, noise, quick()));
  }

  TEST_CASE("trials are scored on the original graph") {
    const auto g = testing::random_graph(14, 0.3, 8, false);
    const auto model = maxcut_to_ising(g);
    const double optimum = exact_max_cut(g).best_value;
    const auto batch = run_trials(g, NoiseSpec{0.3, 5, 20}, quick());
    CHECK(batch.objective == Objective::cut);
    for (const auto& t : batch.trials) {
      REQUIRE_FALSE(t.failed);
      CHECK(t.value == doctest::Approx(cut_from_energy(t.energy)).epsilon(1e-12));
      CHECK(t.value <= optimum + 1e-9);
    }
    CHECK(batch.best <= optimum + 1e-9);
    (void)model;
  }

  TEST_CASE("summary statistics and ECDF invariants") {
    const auto batch = run_trials(testing::random_graph(16, 0.3, 4), NoiseSpec{0.5, 2, 30}, quick());
    CHECK(batch.trials.size() == 30);
    CHECK(batch.n_failed == 0);
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    for (const auto& t : batch.trials) {
      lo = std::min(lo, t.value);
      hi = std::max(hi, t.value);
      sum += t.value;
    }
    CHECK(batch.best == hi);
    CHECK(batch.mean == doctest::Approx(sum / 30.0));
    CHECK(batch.std >= 0.0);
    CHECK(batch.std <= (hi - lo) / 2.0 + 1e-12);
    REQUIRE_FALSE(batch.ecdf.empty());
    CHECK(batch.ecdf.front().value == lo);
    CHECK(batch.ecdf.back().value == hi);
    CHECK(batch.ecdf.back().fraction == 1.0);
    for (std::size_t i = 1; i < batch.ecdf.size(); ++i) {
      CHECK(batch.ecdf[i].value > batch.ecdf[i - 1].value);
      CHECK(batch.ecdf[i].fraction > batch.ecdf[i - 1].fraction);
    }
  }

  TEST_CASE("empirical_cdf and summarize by hand") {
    const std::vector<double> v{3.0, 1.0, 3.0, 2.0};
    const auto cdf = empirical_cdf(v);
    REQUIRE(cdf.size() == 3);
    CHECK(cdf[0].fraction == 0.25);
    CHECK(cdf[1].fraction == 0.5);
    CHECK(cdf[2].fraction == 1.0);

    TrialBatchResult b;
    b.objective = Objective::energy;
    for (double x : {4.0, -2.0, 1.0}) b.trials.push_back({.value = x});
    b.trials.push_back({.value = -100.0, .failed = true});
    summarize(b);
    CHECK(b.n_failed == 1);
    CHECK(b.best == -2.0);
    CHECK(b.mean == 1.0);
    CHECK(b.std == doctest::Approx(std::sqrt(6.0)));

    TrialBatchResult empty;
    empty.trials.push_back({.failed = true});
    summarize(empty);
    CHECK(std::isnan(empty.mean));
    CHECK(empty.ecdf.empty());
  }

  TEST_CASE("zero amplitude gives identical trials and one trial gives zero spread") {
    const auto g = testing::random_graph(12, 0.4, 10);
    const auto batch = run_trials(g, NoiseSpec{0.0, 1, 5}, quick());
    for (const auto& t : batch.trials) CHECK(t.digest == batch.trials[0].digest);
    CHECK(batch.std == 0.0);
    const auto single = run_trials(g, NoiseSpec{0.3, 1, 1}, quick());
    CHECK(single.std == 0.0);
    CHECK(single.mean == single.best);
  }

  TEST_CASE("energy objective and amplitude sweeps") {
    const auto model = testing::random_ising(12, 0.4, 14);
    const std::vector<double> amps{0.0, 0.1, 0.4};
    const auto sweep = amplitude_sweep(model, amps, NoiseSpec{0.0, 3, 6}, quick());
    REQUIRE(sweep.size() == 3);
    const double ground = exact_ground_state(model).best_value;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(sweep[i].amplitude == amps[i]);
      CHECK(sweep[i].objective == Objective::energy);
      CHECK(sweep[i].best >= ground - 1e-9);
      CHECK(sweep[i].trials.size() == 6);
    }
    check_same(sweep[1], run_trials(model, NoiseSpec{0.1, 3, 6}, quick()));
    CHECK_THROWS_AS(amplitude_sweep(model, std::vector<double>{}, NoiseSpec{}, quick()), ModelError);
    CHECK_THROWS_AS(run_trials(model, NoiseSpec{-1.0, 0, 1}, quick()), ModelError);
    CHECK_THROWS_AS(run_trials(model, NoiseSpec{0.1, 0, 0}, quick()), ModelError);
  }
}
