#include <cmath>
#include <random>

#include "doctest.h"
#include "mfa/model.hpp"
#include "support.hpp"

using namespace mfa;
using mfa::testing::brute_cut;
using mfa::testing::brute_energy;
using mfa::testing::spins_of;

TEST_SUITE("model") {
  TEST_CASE("sparse matrix keeps canonical order and rejects bad entries") {
    SparseSymmetricMatrix j(3, {{2, 0, 1.5}, {0, 1, -1.0}});
    REQUIRE(j.entries().size() == 2);
    CHECK(j.entries()[0].i == 0);
    CHECK(j.entries()[0].j == 1);
    CHECK(j.entries()[1].i == 0);
    CHECK(j.entries()[1].j == 2);
    CHECK(j.at(2, 0) == 1.5);
    CHECK(j.at(0, 2) == 1.5);
    CHECK(j.at(1, 2) == 0.0);
    CHECK(j.max_abs_row_sum() == doctest::Approx(2.5));

    CHECK_THROWS_AS(SparseSymmetricMatrix(2, {{0, 0, 1.0}}), ModelError);
    CHECK_THROWS_AS(SparseSymmetricMatrix(2, {{0, 2, 1.0}}), ModelError);
    CHECK_THROWS_AS(SparseSymmetricMatrix(2, {{0, 1, 1.0}, {1, 0, 1.0}}), ModelError);
    CHECK_THROWS_AS(IsingModel(SparseSymmetricMatrix(2), {0.0}), ModelError);
  }

  TEST_CASE("spin configurations must be +-1") {
    CHECK_THROWS_AS(SpinConfig({1, 0}), ModelError);
    CHECK_NOTHROW(SpinConfig({1, -1}));
  }

  TEST_CASE("ising_energy examples") {
    const auto pair = testing::pair_model(1.0, 0.0, 0.0);
    CHECK(ising_energy(pair, SpinConfig({1, 1})) == doctest::Approx(-1.0));
    CHECK(ising_energy(pair, SpinConfig({1, -1})) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ising_energy(pair, SpinConfig({1})), ModelError);

    // Triangle antiferromagnet: enumerate all 8 configurations.
    const auto tri = testing::triangle(-1.0);
    double best = INFINITY;
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
      const auto s = spins_of(mask, 3);
      const double e = ising_energy(tri, SpinConfig(s));
      CHECK(e == doctest::Approx(brute_energy(tri, s)));
      best = std::min(best, e);
    }
    CHECK(best == doctest::Approx(-1.0));
    CHECK(ising_energy(tri, SpinConfig({1, 1, -1})) == doctest::Approx(-1.0));
  }

  TEST_CASE("ising_energy matches the dense double sum and is flip invariant at h = 0") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto model = testing::random_ising(9, 0.5, seed);
      model.offset = 0.25 * static_cast<double>(seed);
      const auto zero_field = IsingModel(model.couplings, std::vector<double>(9, 0.0));
      std::mt19937_64 rng(seed);
      for (int k = 0; k < 20; ++k) {
        const auto s = spins_of(rng() & 511U, 9);
        const SpinConfig spins(s);
        CHECK(ising_energy(model, spins) == doctest::Approx(brute_energy(model, s)).epsilon(1e-12));
        CHECK(ising_energy(zero_field, spins) ==
              doctest::Approx(ising_energy(zero_field, spins.flipped())).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("qubo_value examples") {
    const auto offdiag = QuboModel::from_dense({{0, 1}, {1, 0}});
    CHECK(qubo_value(offdiag, std::vector<int>{1, 1}) == 2.0);
    CHECK(qubo_value(offdiag, std::vector<int>{0, 0}) == 0.0);
    const auto diag = QuboModel::from_dense({{2, 0}, {0, 3}});
    CHECK(qubo_value(diag, std::vector<int>{1, 1}) == 5.0);
    CHECK_THROWS_AS(qubo_value(diag, std::vector<int>{1, 2}), ModelError);
    CHECK_THROWS_AS(qubo_value(diag, std::vector<int>{1}), ModelError);
    CHECK_THROWS_AS(QuboModel::from_dense({{0, 1}, {2, 0}}), ModelError);
    CHECK_THROWS_AS(QuboModel(2, {{0, 1, 1.0}, {1, 0, 2.0}}), ModelError);
  }

  TEST_CASE("qubo_to_ising examples") {
    const auto ising = qubo_to_ising(QuboModel::from_dense({{0, 1}, {1, 0}}));
    CHECK(ising.couplings.at(0, 1) == -0.5);
    CHECK(ising.field[0] == -0.5);
    CHECK(ising.field[1] == -0.5);
    const QuboModel q = QuboModel::from_dense({{0, 1}, {1, 0}});
    for (std::uint64_t mask = 0; mask < 4; ++mask) {
      const SpinConfig s(spins_of(mask, 2));
      CHECK(ising_energy(ising, s) == qubo_value(q, spins_to_binary(s)));
    }

    const auto zero = qubo_to_ising(QuboModel::from_dense({{0, 0}, {0, 0}}));
    CHECK(zero.couplings.nonzeros() == 0);
    CHECK(zero.field == std::vector<double>{0.0, 0.0});
    CHECK(zero.offset == 0.0);
  }

  TEST_CASE("qubo_to_ising is exact on every input (property)") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::size_t n = 1 + seed % 12;
      const auto q = QuboModel::from_dense(testing::random_symmetric_dense(n, seed));
      const auto ising = qubo_to_ising(q);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const SpinConfig s(spins_of(mask, n));
        REQUIRE(std::abs(qubo_value(q, spins_to_binary(s)) - ising_energy(ising, s)) <= 1e-9);
      }
    }
  }

  TEST_CASE("maxcut_to_ising and cut_value") {
    const WeightedGraph edge(2, {{0, 1, 1.0}});
    CHECK(maxcut_to_ising(edge).couplings.at(0, 1) == -1.0);

    const WeightedGraph tri(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    const auto model = maxcut_to_ising(tri);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < 3; ++k) {
        if (i != k) CHECK(model.couplings.at(i, k) == -1.0);
      }
      CHECK(model.field[i] == 0.0);
    }
    CHECK(cut_value(tri, SpinConfig({1, 1, -1})) == 2.0);
    CHECK(cut_value(tri, SpinConfig({1, 1, 1})) == 0.0);
    CHECK(cut_value(tri, SpinConfig({-1, -1, -1})) == 0.0);
    CHECK_THROWS_AS(cut_value(tri, SpinConfig({1, 1})), ModelError);
    CHECK_THROWS_AS(WeightedGraph(2, {{1, 1, 1.0}}), ModelError);
    CHECK_THROWS_AS(WeightedGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}), ModelError);
  }

  TEST_CASE("cut identities hold on random graphs (property)") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = testing::random_graph(10, 0.4, seed, seed % 2 == 0);
      const auto model = maxcut_to_ising(g);
      double total = 0.0;
      for (const auto& e : g.edges()) total += e.weight;
      std::mt19937_64 rng(seed + 100);
      for (int k = 0; k < 20; ++k) {
        const auto s = spins_of(rng() & 1023U, 10);
        const SpinConfig spins(s);
        const double cv = cut_value(g, spins);
        CHECK(cv == doctest::Approx(brute_cut(g, s)).epsilon(1e-12));
        double pair = 0.0;
        for (const auto& e : g.edges()) pair += e.weight * s[e.u] * s[e.v];
        CHECK(2.0 * cv + pair == doctest::Approx(total).epsilon(1e-12));
        CHECK(cut_value(g, spins.flipped()) == cv);
        CHECK(cut_from_energy(ising_energy(model, spins)) == doctest::Approx(cv).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("round_magnetization examples") {
    CHECK(round_magnetization(std::vector<double>{0.3, -0.7}) == SpinConfig({1, -1}));
    CHECK(round_magnetization(std::vector<double>{0.0, 0.0}) == SpinConfig({1, 1}));
    CHECK(round_magnetization(std::vector<double>{-1e-12, 1e-12}) == SpinConfig({-1, 1}));
  }
}
